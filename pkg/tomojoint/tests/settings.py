# -*- coding: utf-8
"""Settings the test suite runs with"""
import math

X_AXIS = (-8.0, 8.0, 161)
MU_AXIS = (-4.5, 4.5, 97)
NU_AXIS = (-4.5, 4.5, 97)
THETA_AXIS = (0.0, math.pi, 181)

LOG_LEVEL = 'ERROR'
DEFAULT_SEED = 0
