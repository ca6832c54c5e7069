"""
Position-representation wavefunctions and pure-state density matrices
"""
import dataclasses
import logging
import math

import numpy as np
from scipy.special import eval_hermite, factorial

from tomojoint.gridcalc.calculus import integrate
from tomojoint.gridcalc.grid import GridFn
from tomojoint.states.errors import StateError
from tomojoint.states.models import Coherent, Fock, SqueezedGaussian

logger = logging.getLogger(__name__)

# Number of standard deviations the q axis must cover on each side of the mean
COVERAGE = 3.0


def fock_profile(n, params, q):
    """Hermite-Gaussian eigenfunction of the oscillator, unnormalized on the grid"""
    xi = params.k * q
    norm = (params.mass * params.omega / (math.pi * params.hbar)) ** 0.25 / math.sqrt(2.0 ** n * factorial(n))
    return norm * eval_hermite(n, xi) * np.exp(-xi ** 2 / 2)


def gaussian_profile(q_mean, p_mean, var_q, params, q):
    return ((2 * math.pi * var_q) ** -0.25
            * np.exp(-(q - q_mean) ** 2 / (4 * var_q) + 1j * p_mean * q / params.hbar))


def check_coverage(spec, params, q_axis):
    mean, spread = spec.position_spread(params)
    lower, upper = mean - COVERAGE * spread, mean + COVERAGE * spread
    if lower < q_axis.min or upper > q_axis.max:
        raise StateError('q axis [{}, {}] does not cover {} (needs [{:.3g}, {:.3g}])'.format(
            q_axis.min, q_axis.max, spec, lower, upper))


def wavefunction(spec, params, q_axis):
    """
    psi(q) of a catalog state on q_axis, renormalized on the grid.
    """
    check_coverage(spec, params, q_axis)
    q_axis = dataclasses.replace(q_axis, name='q')
    q = q_axis.points
    if isinstance(spec, Fock):
        values = fock_profile(spec.n, params, q).astype(complex)
    elif isinstance(spec, (Coherent, SqueezedGaussian)):
        q_mean, p_mean, var_q, _ = spec.moments(params)
        values = gaussian_profile(q_mean, p_mean, var_q, params, q)
    else:
        raise StateError('Unknown state {!r}'.format(spec))
    psi = GridFn((q_axis,), values)
    norm = integrate(GridFn((q_axis,), np.abs(values) ** 2))
    logger.debug('%s: grid norm before renormalization %.12f', spec, norm)
    return psi * (1.0 / math.sqrt(norm))


def density_matrix(spec, params, q_axis):
    """rho(q, q') = psi(q) conj(psi(q')) on the axes named q and q_prime"""
    psi = wavefunction(spec, params, q_axis)
    q_axis = psi.axes[0]
    values = np.outer(psi.values, np.conj(psi.values))
    return GridFn((q_axis, dataclasses.replace(q_axis, name='q_prime')), values)


def trace(rho):
    """Diagonal quadrature of a density matrix"""
    diagonal = GridFn(rho.axes[:1], np.diagonal(rho.values).copy())
    return integrate(diagonal)
