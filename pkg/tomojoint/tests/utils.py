import unittest

import factory
import numpy as np

from tomojoint.gridcalc.grid import Axis
from tomojoint.jointdist.joint import make_joint
from tomojoint.jointdist.priors import GaussianPrior, PriorComponent
from tomojoint.states.models import Coherent, Fock, OscillatorParams, SqueezedGaussian
from tomojoint.tomography.analytic import state_tomogram


class AxisFactory(factory.Factory):
    class Meta:
        model = Axis

    name = 'X'
    min = -8.0
    max = 8.0
    count = 161


class TomojointTestCase(unittest.TestCase):

    def assertArrayAlmostEqual(self, first, second, tol, msg=None):
        """Max-abs comparison of arrays (or GridFn values)"""
        first = getattr(first, 'values', first)
        second = getattr(second, 'values', second)
        error = float(np.max(np.abs(np.asarray(first) - np.asarray(second))))
        if error > tol:
            self.fail(msg or 'max abs difference {:.3e} exceeds {:.1e}'.format(error, tol))

    def assertClose(self, value, expected, tol, msg=None):
        if abs(value - expected) > tol:
            self.fail(msg or '{} differs from {} by more than {:.1e}'.format(value, expected, tol))


class OscillatorParamsFactory(factory.Factory):
    class Meta:
        model = OscillatorParams

    mass = 1.0
    omega = 1.0
    hbar = 1.0


class FockFactory(factory.Factory):
    class Meta:
        model = Fock

    n = 0


class CoherentFactory(factory.Factory):
    class Meta:
        model = Coherent

    alpha = 1 / np.sqrt(2)


class SqueezedGaussianFactory(factory.Factory):
    class Meta:
        model = SqueezedGaussian

    q = 0.0
    p = 0.0
    s = 2.0


class GaussianPriorFactory(factory.Factory):
    class Meta:
        model = GaussianPrior

    mu0 = 0.0
    nu0 = 0.0
    xi = 1.0
    zeta = 1.0


class PriorComponentFactory(factory.Factory):
    class Meta:
        model = PriorComponent

    weight = 1.0
    center = np.pi / 2
    width = 0.8


def state_joint(state, representation, prior, params, X_axis, parameter_axes):
    """Closed-form tomogram of `state` joined with `prior`"""
    return make_joint(state_tomogram(state, representation, params, X_axis, parameter_axes), prior)
