"""
Stationary states: the energy equation E M~ = Re H M~ and the stationarity
condition Im H M~ = 0, in symplectic and optical joint representations
"""
import logging

import numpy as np

from tomojoint import settings
from tomojoint.dynamics.errors import DynamicsError
from tomojoint.dynamics.evolution import (
    COS_SQUARED,
    SIN_DOUBLE,
    evolution_parts,
    kinetic_operator,
    representation_of,
)
from tomojoint.dynamics.models import (
    CONDITION,
    STATIONARY,
    ResidualReport,
    condition_residual,
    grid_metadata,
    interior_mask,
    masked_norm,
    relative_residual,
)
from tomojoint.jointdist.priors import GaussianPrior, GaussianSumPrior
from tomojoint.opalg.conjugation import conjugate_by_prior
from tomojoint.opalg.errors import OperatorError
from tomojoint.opalg.expr import Coordinate, Derivative, Function, Identity, InverseDerivative, Scalar
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC

logger = logging.getLogger(__name__)

SIN_SQUARED = Function('sin^2 theta', ('theta',), lambda theta: np.sin(theta) ** 2)


def _equation(check, family):
    return '{}-{}'.format(check, family)


def printed_kinetic_symplectic(rep, nu0_sign=1):
    """
    Re [p]^2 / 2m for a Gaussian prior written out in closed form:

        d_X^-2 / m (2(nu + s nu0)^2/zeta^4 + d_nu^2/2 + 2(nu + s nu0)/zeta^2 d_nu + 1/zeta^2)
        - mu^2 hbar^2 / (8m) d_X^2

    with s = `nu0_sign`. s = -1 is what the correspondence rules generate.
    """
    prior = rep.prior
    if not isinstance(prior, GaussianPrior):
        raise DynamicsError('The printed stationary equation needs a Gaussian prior, got {}'.format(prior))
    m = rep.params.mass
    hbar = rep.params.hbar
    shift = nu0_sign * prior.nu0
    zeta = prior.zeta
    square = Function('2(nu {:+g})^2/zeta^4 + 1/zeta^2'.format(shift), ('nu',),
                      lambda nu: 2 * (nu + shift) ** 2 / zeta ** 4 + 1 / zeta ** 2)
    slope = Function('2(nu {:+g})/zeta^2'.format(shift), ('nu',), lambda nu: 2 * (nu + shift) / zeta ** 2)
    bracket = square + Scalar(0.5) * Derivative('nu', 2) + slope * Derivative('nu')
    return (Scalar(1 / m) * InverseDerivative('X', 2) * bracket
            - Scalar(hbar ** 2 / (8 * m)) * Coordinate('mu', 2) * Derivative('X', 2))


def _energy_report(distribution, family, energy, rhs, state, metadata):
    grid = distribution.grid
    params = distribution.params
    mask = interior_mask(grid)
    lhs = grid * energy
    difference = masked_norm(lhs.values - rhs.values, mask)
    relative = relative_residual(lhs, rhs, mask)
    scaled = difference / max(params.hbar * params.omega * masked_norm(grid, mask), settings.RESIDUAL_EPS)
    metadata = dict(metadata, energy=energy, **grid_metadata(grid))
    report = ResidualReport(_equation(STATIONARY, family), str(state or ''), relative,
                            float(np.max(np.abs(lhs.values - rhs.values)[mask])), scaled, metadata)
    logger.info('%s residual %.3e (scaled %.3e) at E=%g', report.equation, relative, scaled, energy)
    return report


def stationary_rhs_symplectic(distribution, prior, potential):
    """Re H M~ with H derived from the correspondence rules"""
    rep = representation_of(distribution, prior, SYMPLECTIC)
    try:
        hamiltonian = kinetic_operator(rep) + potential.operator(rep, derived=True)
    except OperatorError as e:
        raise DynamicsError(e.message)
    return hamiltonian.apply(distribution.grid).real


def stationary_residual_symplectic(joint, prior, potential, energy, printed_form=False, state=None):
    """
    E M~ - Re H M~. With `printed_form` the closed-form kinetic operator is
    evaluated as well and its discrepancy from the derived one reported; the
    derived operator stays authoritative.
    """
    rhs = stationary_rhs_symplectic(joint, prior, potential)
    metadata = {'path': 'derived'}
    if printed_form:
        rep = representation_of(joint, prior, SYMPLECTIC)
        printed = (printed_kinetic_symplectic(rep) + potential.operator(rep)).apply(joint.grid).real
        mask = interior_mask(joint.grid)
        metadata.update(printed_discrepancy=relative_residual(printed, rhs, mask),
                        printed_relative=relative_residual(joint.grid * energy, printed, mask),
                        printed_note='printed kinetic term carries (nu + nu0); the rules generate (nu - nu0)')
        logger.info('Printed stationary operator differs from the derived one by %.3e',
                    metadata['printed_discrepancy'])
    return _energy_report(joint, SYMPLECTIC, energy, rhs, state, metadata)


def tomographic_kinetic_optical(params):
    """
    Re [p]^2 / 2m on an optical tomogram:

        m omega^2 { cos^2 theta d_X^-2 (d_theta^2 + 1) / 2 - X d_X^-1 (cos^2 theta + sin 2theta d_theta) / 2
                    + X^2 sin^2 theta / 2 - hbar^2 cos^2 theta d_X^2 / (8 m^2 omega^2) }
    """
    return _optical_kinetic(params, Derivative('theta', 2) + Identity(), SIN_DOUBLE * Derivative('theta'))


def single_peak_kinetic_optical(params, prior):
    """
    The same operator conjugated by a one-component prior, u = theta - f:
    d_theta^2 + 1 -> d_theta^2 + 4u/phi^2 d_theta + 4u^2/phi^4 + 2/phi^2 + 1 and
    sin 2theta d_theta -> sin 2theta (d_theta + 2u/phi^2)
    """
    if not prior.single_peak:
        raise DynamicsError('The single-peak equation needs a one-component prior, got {} components'.format(
            len(prior.components)))
    f = prior.components[0].center
    phi = prior.components[0].width
    second = (Derivative('theta', 2)
              + Function('4u/phi^2', ('theta',), lambda theta: 4 * (theta - f) / phi ** 2) * Derivative('theta')
              + Function('4u^2/phi^4 + 2/phi^2 + 1', ('theta',),
                         lambda theta: 4 * (theta - f) ** 2 / phi ** 4 + 2 / phi ** 2 + 1))
    first = SIN_DOUBLE * (Derivative('theta')
                          + Function('2u/phi^2', ('theta',), lambda theta: 2 * (theta - f) / phi ** 2))
    return _optical_kinetic(params, second, first)


def _optical_kinetic(params, second, first):
    m = params.mass
    omega = params.omega
    return Scalar(m * omega ** 2) * (
        Scalar(0.5) * COS_SQUARED * InverseDerivative('X', 2) * second
        - Scalar(0.5) * Coordinate('X') * InverseDerivative('X') * (COS_SQUARED + first)
        + Scalar(0.5) * Coordinate('X', 2) * SIN_SQUARED
        - Scalar(params.hbar ** 2 / (8 * m ** 2 * omega ** 2)) * COS_SQUARED * Derivative('X', 2))


def stationary_rhs_optical(distribution, prior, potential, single_peak=False):
    """Re H w~ from the closed-form optical kinetic operator"""
    rep = representation_of(distribution, prior, OPTICAL)
    if single_peak and not isinstance(rep.prior, GaussianSumPrior):
        raise DynamicsError('The single-peak equation needs a Gaussian-sum prior')
    try:
        if single_peak:
            kinetic = single_peak_kinetic_optical(rep.params, rep.prior)
        elif rep.is_joint:
            kinetic = conjugate_by_prior(tomographic_kinetic_optical(rep.params), rep.prior)
        else:
            kinetic = tomographic_kinetic_optical(rep.params)
        operator = kinetic + potential.operator(rep)
    except OperatorError as e:
        raise DynamicsError(e.message)
    return operator.apply(distribution.grid).real


def stationary_residual_optical(joint, prior, potential, energy, single_peak=False, state=None):
    """E w~ - Re H w~, through the general or the single-peak kinetic operator"""
    rhs = stationary_rhs_optical(joint, prior, potential, single_peak)
    metadata = {'path': 'single-peak' if single_peak else 'general'}
    return _energy_report(joint, OPTICAL, energy, rhs, state, metadata)


def stationarity_condition_parts(distribution, prior, potential):
    """
    Drift and potential halves of the condition. Symplectic:

        A = (mu/m)((nu - nu0)/zeta^2 + d_nu/2) M~,  B = (1/hbar) Im V([q]) M~

    Both sum to half the evolution right-hand side.
    """
    drift, potential_part = evolution_parts(distribution, prior, potential)
    return drift * 0.5, potential_part * 0.5


def _condition_report(distribution, prior, potential, family, state):
    representation_of(distribution, prior, family)
    first, second = stationarity_condition_parts(distribution, prior, potential)
    mask = interior_mask(distribution.grid)
    total = first.values + second.values
    report = ResidualReport(_equation(CONDITION, family), str(state or ''),
                            condition_residual(first, second, mask), float(np.max(np.abs(total[mask]))),
                            metadata=grid_metadata(distribution.grid))
    logger.info('%s residual %.3e', report.equation, report.relative)
    return report


def stationarity_condition_symplectic(joint, prior, potential, state=None):
    return _condition_report(joint, prior, potential, SYMPLECTIC, state)


def stationarity_condition_optical(joint, prior, potential, state=None):
    """Im H w~ = 0 with the optical drift and potential halves"""
    return _condition_report(joint, prior, potential, OPTICAL, state)
