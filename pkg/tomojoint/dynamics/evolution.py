"""
Right-hand sides of the evolution equation d/dt M~ = (2/hbar) Im H M~

Two paths build the same right-hand side. The printed path writes the
kinetic part as a first order drift with the prior's score in closed form.
The general path takes Im of [p]^2/2m from the correspondence rules and
conjugates it with the prior.

Tomograms (no prior) are accepted too and give the precursor equations.
"""
import logging

import numpy as np

from tomojoint.dynamics.errors import DynamicsError
from tomojoint.dynamics.models import (
    EVOLUTION,
    ResidualReport,
    condition_residual,
    grid_metadata,
    interior_mask,
    relative_residual,
)
from tomojoint.opalg.errors import OperatorError
from tomojoint.opalg.expr import Coordinate, Derivative, Function, Identity, Scalar
from tomojoint.opalg.models import Representation
from tomojoint.opalg.rules import momentum_operator, printed_score
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC

logger = logging.getLogger(__name__)

PRINTED = 'printed'
GENERAL = 'general'
PATH_CHOICES = (
    (PRINTED, 'Closed-form drift with the prior score written out'),
    (GENERAL, 'Im of the kinetic term derived from the correspondence rules'),
)

COS_SQUARED = Function('cos^2 theta', ('theta',), lambda theta: np.cos(theta) ** 2)
SIN_DOUBLE = Function('sin 2theta', ('theta',), lambda theta: np.sin(2 * theta))


def representation_of(distribution, prior, family):
    """
    The joint (or tomographic) representation `distribution` lives in,
    checked against the expected family and the prior passed alongside.
    """
    if distribution.representation != family:
        raise DynamicsError('Expected a {} distribution, got {}'.format(family, distribution.representation))
    own = getattr(distribution, 'prior', None)
    if prior is not None and own is None:
        raise DynamicsError('A tomogram takes no prior; got {}'.format(prior))
    if prior is not None and prior != own:
        raise DynamicsError('Prior {} does not match the joint distribution prior {}'.format(prior, own))
    try:
        return Representation.for_distribution(distribution)
    except OperatorError as e:
        raise DynamicsError(e.message)


def shifted_derivative(rep, variable):
    """d + S in a joint representation with a closed-form score, plain d otherwise"""
    try:
        score = printed_score(rep.prior)
    except OperatorError as e:
        raise DynamicsError(e.message)
    if score is None:
        return Derivative(variable)
    return score(variable) + Derivative(variable)


def printed_drift(rep):
    """The kinetic part of the right-hand side as a first order operator"""
    params = rep.params
    if rep.family == SYMPLECTIC:
        return Scalar(1 / params.mass) * Coordinate('mu') * shifted_derivative(rep, 'nu')
    return Scalar(params.omega) * (
        COS_SQUARED * shifted_derivative(rep, 'theta')
        - Scalar(0.5) * SIN_DOUBLE * (Identity() + Coordinate('X') * Derivative('X')))


def kinetic_operator(rep):
    """[p]^2 / 2m with the joint rules derived by conjugation"""
    p = momentum_operator(rep, derived=True)
    return Scalar(1 / (2 * rep.params.mass)) * p * p


def _imaginary_part(op, grid, scale):
    result = op.apply(grid)
    return result.with_values(scale * np.imag(result.values))


def evolution_parts(distribution, prior, potential, path=PRINTED, family=None):
    """
    (drift, potential part) of the right-hand side, both real GridFns on the
    distribution's grid. Their sum is d/dt of the distribution.
    """
    family = family or distribution.representation
    rep = representation_of(distribution, prior, family)
    hbar = rep.params.hbar
    grid = distribution.grid
    try:
        if path == PRINTED:
            drift = printed_drift(rep).apply(grid).real
        elif path == GENERAL:
            drift = _imaginary_part(kinetic_operator(rep), grid, 2 / hbar)
        else:
            raise DynamicsError("Unknown construction path '{}' (choose from {})".format(
                path, ', '.join(key for key, _ in PATH_CHOICES)))
        potential_part = _imaginary_part(potential.operator(rep, derived=path == GENERAL), grid, 2 / hbar)
    except OperatorError as e:
        raise DynamicsError(e.message)
    logger.debug('%s evolution parts on %s (%s path)', family, grid, path)
    return drift, potential_part


def _rhs(distribution, prior, potential, path, family):
    drift, potential_part = evolution_parts(distribution, prior, potential, path, family)
    return drift + potential_part


def evolution_rhs_symplectic(joint, prior, potential, path=PRINTED):
    """
    (mu/m)(2(nu - nu0)/zeta^2 + d_nu) M~ + (2/hbar) Im V([q]) M~
    """
    return _rhs(joint, prior, potential, path, SYMPLECTIC)


def evolution_rhs_optical(joint, prior, potential, path=PRINTED):
    """
    omega [cos^2 theta (S + d_theta) - sin 2theta (1 + X d_X) / 2] w~ + (2/hbar) Im V([q]) w~
    with S the score of the Gaussian-sum prior
    """
    return _rhs(joint, prior, potential, path, OPTICAL)


def evolution_rhs(distribution, prior, potential, path=PRINTED):
    """Dispatch on the distribution's representation"""
    if distribution.representation == SYMPLECTIC:
        return evolution_rhs_symplectic(distribution, prior, potential, path)
    return evolution_rhs_optical(distribution, prior, potential, path)


def evolution_residual(distribution, prior, potential, oracle=None, path=PRINTED, state=None):
    """
    Compare the right-hand side with a time-derivative oracle on the same
    grid. Without an oracle the state is expected to be stationary and the
    drift and potential parts are checked for cancellation.
    """
    drift, potential_part = evolution_parts(distribution, prior, potential, path)
    rhs = drift + potential_part
    mask = interior_mask(distribution.grid)
    metadata = dict(grid_metadata(distribution.grid), path=path)
    if oracle is None:
        relative = condition_residual(drift, potential_part, mask)
        difference = rhs.values
    else:
        if not oracle.same_grid(distribution.grid):
            raise DynamicsError('Oracle axes {} differ from the distribution axes {}'.format(
                oracle.names, distribution.grid.names))
        relative = relative_residual(rhs, oracle, mask)
        difference = rhs.values - oracle.values
        metadata['oracle'] = 'finite difference'
    report = ResidualReport('{}-{}'.format(EVOLUTION, distribution.representation), str(state or ''), relative,
                            float(np.max(np.abs(difference[mask]))), metadata=metadata)
    logger.info('%s residual %.3e', report.equation, relative)
    return report
