"""
Symplectic and optical tomograms
"""
import math
from dataclasses import dataclass, field

import numpy as np

from tomojoint.gridcalc.calculus import integrate, interpolate
from tomojoint.tomography.errors import TomographyError

SYMPLECTIC = 'symplectic'
OPTICAL = 'optical'
REPRESENTATION_CHOICES = (
    (SYMPLECTIC, 'Symplectic tomogram M(X, mu, nu)'),
    (OPTICAL, 'Optical tomogram w(X, theta)'),
)
PARAMETER_NAMES = {
    SYMPLECTIC: ('mu', 'nu'),
    OPTICAL: ('theta',),
}

# |mu| + |nu| below which a direction counts as the origin of the parameter plane
DEGENERATE_TOL = 1e-6
UNDEFINED_AT_ORIGIN = 'tomogram undefined at mu=nu=0 grid point'


def check_representation(representation):
    if representation not in PARAMETER_NAMES:
        raise TomographyError("Unknown representation '{}' (choose from {})".format(
            representation, ', '.join(PARAMETER_NAMES)))
    return representation


def check_theta_axis(theta_axis):
    if theta_axis.min < -1e-12 or theta_axis.max > math.pi + 1e-12:
        raise TomographyError('theta axis [{}, {}] leaves [0, pi]'.format(theta_axis.min, theta_axis.max))


def directions(representation, params, parameter_axes):
    """
    Line directions (mu, nu) for every parameter grid point, each shaped like
    the parameter grid. Optical tomograms use (cos theta, sin theta / (m omega)).
    """
    check_representation(representation)
    if representation == SYMPLECTIC:
        mu_axis, nu_axis = parameter_axes
        mu, nu = np.meshgrid(mu_axis.points, nu_axis.points, indexing='ij')
        return mu, nu
    theta_axis, = parameter_axes
    check_theta_axis(theta_axis)
    theta = theta_axis.points
    return np.cos(theta), np.sin(theta) / (params.mass * params.omega)


def is_degenerate(mu, nu):
    return abs(mu) + abs(nu) < DEGENERATE_TOL


def nascent_slice(X_axis):
    """Stand-in for delta(X): a Gaussian whose standard deviation is one X cell"""
    h = X_axis.spacing
    X = X_axis.points
    return np.exp(-X ** 2 / (2 * h ** 2)) / math.sqrt(2 * math.pi * h ** 2)


@dataclass(frozen=True, eq=False)
class Tomogram(object):
    """
    A tomogram tabulated on (X, mu, nu) or (X, theta).

    `flags` lists soft conditions met while building it (renormalized
    slices, the degenerate direction at the origin).
    """
    representation: str
    grid: object
    params: object
    flags: tuple = field(default=())

    def __post_init__(self):
        check_representation(self.representation)
        expected = ('X',) + PARAMETER_NAMES[self.representation]
        if self.grid.names != expected:
            raise TomographyError('{} tomogram needs axes {}, got {}'.format(
                self.representation, expected, self.grid.names))
        object.__setattr__(self, 'flags', tuple(self.flags))

    @property
    def X_axis(self):
        return self.grid.axes[0]

    @property
    def parameter_axes(self):
        return self.grid.axes[1:]

    def directions(self):
        return directions(self.representation, self.params, self.parameter_axes)

    def slice_norms(self):
        """Integral over X for every parameter point"""
        return integrate(self.grid, ['X'])

    def slice_moment(self, k):
        """Integral of X^k M over X for every parameter point"""
        return integrate(self.grid * self.grid.coordinates('X') ** k, ['X'])

    def value(self, X, *parameters):
        return interpolate(self.grid, (X,) + parameters)

    def with_flag(self, message):
        return Tomogram(self.representation, self.grid, self.params, self.flags + (message,))

    def header(self):
        return {
            'representation': self.representation,
            'params': self.params.to_dict(),
            'flags': list(self.flags),
        }
