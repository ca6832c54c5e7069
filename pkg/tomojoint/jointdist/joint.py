"""
Joint distributions: a tomogram times a prior on its parameters
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from tomojoint import settings
from tomojoint.gridcalc.calculus import integrate, interpolate
from tomojoint.gridcalc.grid import GridFn
from tomojoint.jointdist.errors import PriorError, PriorUnderflow
from tomojoint.jointdist.priors import PRIOR_UNDERFLOW
from tomojoint.tomography.models import PARAMETER_NAMES, Tomogram, directions

logger = logging.getLogger(__name__)


def prior_on(prior, grid):
    """Prior values on the parameter axes of grid, shaped to broadcast over X"""
    names = PARAMETER_NAMES[prior.representation]
    if grid.names[1:] != names:
        raise PriorError('Prior over {} does not fit axes {}'.format(names, grid.names))
    coordinates = {name: grid.coordinates(name) for name in names}
    return np.broadcast_to(prior.evaluate(**coordinates), grid.shape)


@dataclass(frozen=True, eq=False)
class JointDistribution(object):
    """
    M~(X, mu, nu) = M(X, mu, nu) P(mu, nu), or w~(X, theta) = w(X, theta) P(theta)
    """
    representation: str
    grid: GridFn
    prior: object
    params: object
    flags: tuple = field(default=())

    @property
    def X_axis(self):
        return self.grid.axes[0]

    @property
    def parameter_axes(self):
        return self.grid.axes[1:]

    def prior_values(self):
        return prior_on(self.prior, self.grid)

    def directions(self):
        return directions(self.representation, self.params, self.parameter_axes)

    def total(self):
        return integrate(self.grid)

    def value(self, X, *parameters):
        return interpolate(self.grid, (X,) + parameters)

    def with_values(self, values):
        return JointDistribution(self.representation, self.grid.with_values(values), self.prior, self.params,
                                 self.flags)

    def header(self):
        return {
            'representation': self.representation,
            'params': self.params.to_dict(),
            'prior': self.prior.to_dict(),
            'flags': list(self.flags),
        }


def make_joint(tomogram, prior, tol=None):
    """
    Bayes product of a tomogram and a prior; the total mass is checked
    against JOINT_NORM_TOL.
    """
    if prior.representation != tomogram.representation:
        raise PriorError('Cannot join a {} tomogram with a {} prior'.format(
            tomogram.representation, prior.representation))
    tol = settings.JOINT_NORM_TOL if tol is None else tol
    values = tomogram.grid.values * prior_on(prior, tomogram.grid)
    joint = JointDistribution(tomogram.representation, tomogram.grid.with_values(values), prior,
                              tomogram.params, tomogram.flags)
    total = joint.total()
    if abs(total - 1.0) > tol:
        raise PriorError('Joint distribution integrates to {:.6g}; widen the parameter axes'.format(total))
    logger.debug('Joint %s distribution, total mass %.8f', joint.representation, total)
    return joint


def recover_conditional(joint):
    """Divide the prior back out"""
    prior = prior_on(joint.prior, joint.grid)
    if np.min(prior) < settings.PRIOR_FLOOR:
        raise PriorUnderflow(PRIOR_UNDERFLOW)
    return Tomogram(joint.representation, joint.grid.with_values(joint.grid.values / prior), joint.params,
                    joint.flags)
