"""
Parameter priors: a shifted Gaussian over (mu, nu) and a truncated Gaussian
sum over theta in [0, pi]

Every derivative is closed form: for g(x) = exp(-(x - c)^2 / w^2),
d^k g / dx^k = (-1/w)^k H_k((x - c)/w) g(x).
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, eval_hermite

from tomojoint import settings
from tomojoint.gridcalc.calculus import integrate
from tomojoint.gridcalc.grid import Axis, GridFn
from tomojoint.jointdist.errors import PriorError, PriorUnderflow
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC

logger = logging.getLogger(__name__)

PRIOR_UNDERFLOW = 'prior underflow on grid'


def gaussian_derivative(x, center, width, order):
    """d^order/dx^order of exp(-(x - center)^2 / width^2)"""
    u = (np.asarray(x, dtype=float) - center) / width
    return (-1.0 / width) ** order * eval_hermite(order, u) * np.exp(-u ** 2)


class Prior(object):
    representation = None
    variables = ()
    is_constant = False

    def evaluate(self, **coordinates):
        return self.derivative(self.variables[0], 0, **coordinates)

    def derivative(self, variable, order, **coordinates):
        raise NotImplementedError

    def log_derivative(self, variable, **coordinates):
        """(dP/d variable) / P"""
        return self.derivative(variable, 1, **coordinates) / self.guarded(**coordinates)

    def curvature(self, variable, **coordinates):
        """(d^2 P / d variable^2) / P"""
        return self.derivative(variable, 2, **coordinates) / self.guarded(**coordinates)

    def guarded(self, **coordinates):
        values = self.evaluate(**coordinates)
        if np.min(values) < settings.PRIOR_FLOOR:
            raise PriorUnderflow(PRIOR_UNDERFLOW)
        return values

    def check_variable(self, variable):
        if variable not in self.variables:
            raise PriorError("{} has no variable '{}' (has {})".format(
                type(self).__name__, variable, ', '.join(self.variables)))


@dataclass(frozen=True)
class GaussianPrior(Prior):
    """
    P(mu, nu) = exp(-(mu - mu0)^2/xi^2 - (nu - nu0)^2/zeta^2) / (pi xi zeta)
    """
    mu0: float = 0.0
    nu0: float = 0.0
    xi: float = 1.0
    zeta: float = 1.0

    representation = SYMPLECTIC
    variables = ('mu', 'nu')

    def __post_init__(self):
        for name in ('mu0', 'nu0', 'xi', 'zeta'):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.xi > 0 and self.zeta > 0):
            raise PriorError('Prior widths must be positive, got xi={}, zeta={}'.format(self.xi, self.zeta))

    @property
    def center(self):
        return {'mu': self.mu0, 'nu': self.nu0}

    @property
    def width(self):
        return {'mu': self.xi, 'nu': self.zeta}

    def mixed_derivative(self, k, l, mu, nu):
        """d^k/dmu^k d^l/dnu^l P"""
        return (gaussian_derivative(mu, self.mu0, self.xi, k) * gaussian_derivative(nu, self.nu0, self.zeta, l)
                / (math.pi * self.xi * self.zeta))

    def derivative(self, variable, order, mu, nu):
        self.check_variable(variable)
        if variable == 'mu':
            return self.mixed_derivative(order, 0, mu, nu)
        return self.mixed_derivative(0, order, mu, nu)

    def log_derivative(self, variable, **coordinates):
        self.guarded(**coordinates)
        self.check_variable(variable)
        return -2 * (coordinates[variable] - self.center[variable]) / self.width[variable] ** 2

    def curvature(self, variable, **coordinates):
        self.guarded(**coordinates)
        self.check_variable(variable)
        u = coordinates[variable] - self.center[variable]
        w = self.width[variable]
        return 4 * u ** 2 / w ** 4 - 2 / w ** 2

    def to_dict(self):
        return {'kind': 'p1', 'mu0': self.mu0, 'nu0': self.nu0, 'xi': self.xi, 'zeta': self.zeta}

    def __str__(self):
        return 'p1:mu0={},nu0={},xi={},zeta={}'.format(self.mu0, self.nu0, self.xi, self.zeta)


@dataclass(frozen=True)
class PriorComponent(object):
    weight: float
    center: float
    width: float

    def __post_init__(self):
        for name in ('weight', 'center', 'width'):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.weight > 0:
            raise PriorError('Component weights must be positive, got {}'.format(self.weight))
        if not self.width > 0:
            raise PriorError('Component widths must be positive, got {}'.format(self.width))
        if not 0 <= self.center <= math.pi:
            raise PriorError('Component centers must lie in [0, pi], got {}'.format(self.center))

    @property
    def normalizer(self):
        """Makes the component integrate to one over [0, pi]"""
        return 1.0 / (math.sqrt(math.pi) * self.width / 2
                      * (erf((math.pi - self.center) / self.width) + erf(self.center / self.width)))

    def derivative(self, theta, order):
        return self.normalizer * gaussian_derivative(theta, self.center, self.width, order)

    def to_dict(self):
        return {'q': self.weight, 'f': self.center, 'phi': self.width}


@dataclass(frozen=True)
class GaussianSumPrior(Prior):
    """
    P(theta) = sum_k Q_k N_k exp(-(theta - f_k)^2 / phi_k^2) on [0, pi]
    """
    components: tuple

    representation = OPTICAL
    variables = ('theta',)

    def __post_init__(self):
        components = tuple(c if isinstance(c, PriorComponent) else PriorComponent(*c) for c in self.components)
        if not components:
            raise PriorError('A Gaussian-sum prior needs at least one component')
        total = sum(c.weight for c in components)
        if abs(total - 1.0) > 1e-12:
            raise PriorError('Component weights must sum to 1, got {}'.format(total))
        object.__setattr__(self, 'components', components)

    @property
    def single_peak(self):
        return len(self.components) == 1

    def derivative(self, variable, order, theta):
        self.check_variable(variable)
        theta = np.asarray(theta, dtype=float)
        if np.any(theta < -1e-12) or np.any(theta > math.pi + 1e-12):
            raise PriorError('theta outside [0, pi]')
        return sum(c.weight * c.derivative(theta, order) for c in self.components)

    def to_dict(self):
        return {'kind': 'p2', 'components': [c.to_dict() for c in self.components]}

    def __str__(self):
        return 'p2:[{}]'.format(','.join('{{"q":{},"f":{},"phi":{}}}'.format(c.weight, c.center, c.width)
                                         for c in self.components))


class UniformPrior(Prior):
    """
    Constant prior: conjugating by it changes nothing. Only its derivatives
    are used, so it needs no support.
    """

    is_constant = True

    def __init__(self, representation):
        self.representation = representation
        self.variables = ('mu', 'nu') if representation == SYMPLECTIC else ('theta',)

    def derivative(self, variable, order, **coordinates):
        self.check_variable(variable)
        shape = np.broadcast(*coordinates.values()).shape
        return np.ones(shape) if order == 0 else np.zeros(shape)

    def __eq__(self, other):
        return isinstance(other, UniformPrior) and other.representation == self.representation

    def __hash__(self):
        return hash(('uniform', self.representation))

    def to_dict(self):
        return {'kind': 'uniform', 'representation': self.representation}

    def __str__(self):
        return 'uniform'


def default_symplectic_prior():
    return GaussianPrior(*settings.P1_DEFAULT)


def default_optical_prior():
    return GaussianSumPrior(tuple(PriorComponent(*c) for c in settings.P2_DEFAULT))


def prior_eval(prior, axes):
    """
    Tabulate the prior on its parameter axes, e.g. (mu_axis, nu_axis) or (theta_axis,)
    """
    grid = GridFn(tuple(axes), np.zeros(tuple(axis.count for axis in axes)))
    _check_axes(prior, grid)
    return grid.with_values(prior.evaluate(**grid.mesh()))


def prior_log_derivative(prior, variable, axes):
    """Closed-form (dP/d variable)/P on the parameter axes"""
    grid = GridFn(tuple(axes), np.zeros(tuple(axis.count for axis in axes)))
    _check_axes(prior, grid)
    return grid.with_values(np.broadcast_to(prior.log_derivative(variable, **grid.mesh()), grid.shape))


def _check_axes(prior, grid):
    if grid.names != prior.variables:
        raise PriorError('{} lives on {}, got axes {}'.format(type(prior).__name__, prior.variables, grid.names))


def prior_moment_integral(prior, k, l, powers=None, count=401, span=10.0):
    """
    int mu^a nu^b d^k/dmu^k d^l/dnu^l P dmu dnu with (a, b) = powers, (k, l) by default.

    Integration by parts gives (-1)^(k+l) k! l! when the powers equal the
    derivative orders and 0 when a derivative order exceeds its power.
    Quadrature runs on its own grid of `count` points per axis spanning
    `span` widths on each side of the centre.
    """
    if max(k, l) > settings.MAX_PRIOR_MOMENT_ORDER:
        raise PriorError('Moment order ({}, {}) exceeds {}'.format(k, l, settings.MAX_PRIOR_MOMENT_ORDER))
    a, b = (k, l) if powers is None else powers
    mu_axis = Axis('mu', prior.mu0 - span * prior.xi, prior.mu0 + span * prior.xi, count)
    nu_axis = Axis('nu', prior.nu0 - span * prior.zeta, prior.nu0 + span * prior.zeta, count)
    integrand = GridFn.from_function(
        (mu_axis, nu_axis), lambda mu, nu: mu ** a * nu ** b * prior.mixed_derivative(k, l, mu, nu))
    return integrate(integrand)


def prior_moment_contract(k, l, powers=None):
    """The value prior_moment_integral must reproduce"""
    a, b = (k, l) if powers is None else powers
    if k > a or l > b:
        return 0.0
    if (a, b) == (k, l):
        return float((-1) ** (k + l) * math.factorial(k) * math.factorial(l))
    return None
