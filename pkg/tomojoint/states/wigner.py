"""
Wigner functions: by quadrature from a density matrix, and in closed form
for Gaussian states
"""
import dataclasses
import logging
import math

import numpy as np

from tomojoint import settings
from tomojoint.gridcalc.grid import GridFn
from tomojoint.states.errors import StateError
from tomojoint.states.models import WignerFn
from tomojoint.states.wavefunctions import density_matrix

logger = logging.getLogger(__name__)


def relative_shift_samples(rho):
    """
    Table A[i, j] = rho(q_i + u_j/2, q_i - u_j/2) for u_j = 2 j h, j = -(n-1)..n-1.

    The u spacing is twice the q spacing so every sample falls on a node;
    samples outside the matrix are zero.
    """
    n = rho.shape[0]
    rows = np.arange(n)[:, None]
    shifts = np.arange(-(n - 1), n)[None, :]
    first = rows + shifts
    second = rows - shifts
    inside = (first >= 0) & (first < n) & (second >= 0) & (second < n)
    samples = rho.values[np.clip(first, 0, n - 1), np.clip(second, 0, n - 1)]
    return np.where(inside, samples, 0.0), shifts.ravel()


def wigner_from_density(rho, params, p_axis):
    """
    W(q, p) = 1/(2 pi hbar) int rho(q + u/2, q - u/2) exp(-i p u / hbar) du

    The imaginary residue is checked against WIGNER_IMAG_TOL and dropped.
    """
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise StateError('Density matrix must be square, got shape {}'.format(rho.shape))
    q_axis = dataclasses.replace(rho.axes[0], name='q')
    p_axis = dataclasses.replace(p_axis, name='p')
    h = q_axis.spacing
    samples, shifts = relative_shift_samples(rho)
    u = 2 * h * shifts
    kernel = np.exp(-1j * np.outer(u, p_axis.points) / params.hbar)
    values = samples @ kernel * (2 * h / (2 * math.pi * params.hbar))
    scale = np.max(np.abs(values))
    residue = np.max(np.abs(values.imag))
    if scale > 0 and residue > settings.WIGNER_IMAG_TOL * scale:
        raise StateError('Wigner transform has imaginary residue {:.3g} (relative); '
                         'check the grids or the Hermiticity of rho'.format(residue / scale))
    logger.debug('Wigner transform on %dx%d grid, imaginary residue %.3g', q_axis.count, p_axis.count, residue)
    return WignerFn(GridFn((q_axis, p_axis), values.real.copy()), params)


def gaussian_wigner_values(q_mean, p_mean, var_q, var_p, q, p):
    return (np.exp(-(q - q_mean) ** 2 / (2 * var_q) - (p - p_mean) ** 2 / (2 * var_p))
            / (2 * math.pi * math.sqrt(var_q * var_p)))


def wigner_analytic(spec, params, q_axis, p_axis):
    """Closed-form Wigner function of a Gaussian-class state"""
    if not spec.is_gaussian:
        raise StateError('No closed-form Gaussian Wigner function for {}'.format(spec))
    q_mean, p_mean, var_q, var_p = spec.moments(params)
    axes = (dataclasses.replace(q_axis, name='q'), dataclasses.replace(p_axis, name='p'))
    grid = GridFn.from_function(
        axes, lambda q, p: gaussian_wigner_values(q_mean, p_mean, var_q, var_p, q, p))
    return WignerFn(grid, params)


def state_wigner(spec, params, q_axis, p_axis):
    """Closed form for Gaussian states, the density-matrix transform otherwise"""
    if spec.is_gaussian:
        return wigner_analytic(spec, params, q_axis, p_axis)
    return wigner_from_density(density_matrix(spec, params, q_axis), params, p_axis)
