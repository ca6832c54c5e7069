"""
Default settings for tomojoint

Every value can be overridden by a settings module named in the
TOMOJOINT_SETTINGS_MODULE environment variable.
"""
import importlib
import math
import os
import types

_module_name = os.environ.get('TOMOJOINT_SETTINGS_MODULE')
settings = importlib.import_module(_module_name) if _module_name else types.SimpleNamespace()

# Axis defaults as (min, max, count). X is the quadrature value, MU/NU the
# symplectic parameters, THETA the local oscillator phase, Q/P phase space.
X_AXIS = getattr(settings, 'X_AXIS', (-8.0, 8.0, 161))
MU_AXIS = getattr(settings, 'MU_AXIS', (-4.5, 4.5, 97))
NU_AXIS = getattr(settings, 'NU_AXIS', (-4.5, 4.5, 97))
THETA_AXIS = getattr(settings, 'THETA_AXIS', (0.0, math.pi, 181))
Q_AXIS = getattr(settings, 'Q_AXIS', (-8.0, 8.0, 161))
P_AXIS = getattr(settings, 'P_AXIS', (-8.0, 8.0, 161))

# Accuracy order of the finite difference stencils (2, 4, 6 or 8)
DERIVATIVE_ACCURACY = getattr(settings, 'DERIVATIVE_ACCURACY', 4)

# Relative size of a function at the lower boundary above which the inverse
# derivative reports that the integrand has not decayed
DECAY_TOL = getattr(settings, 'DECAY_TOL', 1e-8)

# Smallest prior value we are prepared to divide by
PRIOR_FLOOR = getattr(settings, 'PRIOR_FLOOR', 1e-280)

# Fraction of each axis excluded at both ends when computing residual norms
INTERIOR_MARGIN = getattr(settings, 'INTERIOR_MARGIN', 0.1)

# Radius in the (mu, nu) plane excluded from residual norms
ORIGIN_EXCLUSION_RADIUS = getattr(settings, 'ORIGIN_EXCLUSION_RADIUS', 1.0)

# Caps
MAX_FOCK_N = getattr(settings, 'MAX_FOCK_N', 12)
MAX_POLYNOMIAL_DEGREE = getattr(settings, 'MAX_POLYNOMIAL_DEGREE', 6)
MAX_MONOMIAL_ORDER = getattr(settings, 'MAX_MONOMIAL_ORDER', 4)
MAX_PRIOR_MOMENT_ORDER = getattr(settings, 'MAX_PRIOR_MOMENT_ORDER', 4)

# Tolerance on the X-integral of a tomogram slice before it is renormalized
SLICE_NORM_TOL = getattr(settings, 'SLICE_NORM_TOL', 1e-3)

# Spline order used to sample the Wigner function along Radon lines
RADON_SPLINE_ORDER = getattr(settings, 'RADON_SPLINE_ORDER', 3)

# Imaginary residue thresholds, relative to the largest absolute value
WIGNER_IMAG_TOL = getattr(settings, 'WIGNER_IMAG_TOL', 1e-8)
RECONSTRUCTION_IMAG_TOL = getattr(settings, 'RECONSTRUCTION_IMAG_TOL', 1e-6)

# Allowed drift of the reconstructed Wigner normalization
RECONSTRUCTION_NORM_TOL = getattr(settings, 'RECONSTRUCTION_NORM_TOL', 5e-2)

# Allowed drift of the total mass of a joint distribution
JOINT_NORM_TOL = getattr(settings, 'JOINT_NORM_TOL', 1e-2)

# Denominator floor for relative residuals
RESIDUAL_EPS = getattr(settings, 'RESIDUAL_EPS', 1e-12)

# Default priors. P1 is (mu0, nu0, xi, zeta), P2 a list of (weight, center, width)
P1_DEFAULT = getattr(settings, 'P1_DEFAULT', (0.0, 0.0, 1.0, 1.0))
P2_DEFAULT = getattr(settings, 'P2_DEFAULT', ((0.6, math.pi / 3, 0.7), (0.4, 2 * math.pi / 3, 0.9)))

LOG_LEVEL = getattr(settings, 'LOG_LEVEL', 'WARNING')

# Seed for random test functions in the verify suite
DEFAULT_SEED = getattr(settings, 'DEFAULT_SEED', 0)
