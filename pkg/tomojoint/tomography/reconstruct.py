"""
Wigner function from a symplectic tomogram

chi(mu, nu) = int M(X, mu, nu) exp(i k X) dX is the characteristic function
of W at (k mu, k nu), k = sqrt(m omega / hbar), so

    W(q, p) = m omega / (4 pi^2 hbar) int chi(mu, nu) exp(-i k (mu q + nu p)) dmu dnu
"""
import dataclasses
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from tomojoint import settings
from tomojoint.gridcalc.grid import GridFn
from tomojoint.states.models import WignerFn
from tomojoint.tomography.errors import TomographyError
from tomojoint.tomography.models import SYMPLECTIC

logger = logging.getLogger(__name__)

# Fraction of its own peak that a slice may keep at the X boundaries before
# the tomogram counts as non-decaying (and so not normalizable)
EDGE_TOL = 0.5


@dataclass(frozen=True)
class Reconstruction(object):
    wigner: WignerFn
    raw_normalization: float
    imaginary_residue: float

    @property
    def drift(self):
        return abs(self.raw_normalization - 1.0)


def trapezoid_weights(axis):
    weights = np.full(axis.count, axis.spacing)
    weights[[0, -1]] /= 2
    return weights


def check_decay(tomogram):
    values = np.abs(tomogram.grid.values)
    peaks = values.max(axis=0)
    if not peaks.any():
        raise TomographyError('Cannot reconstruct from a zero tomogram')
    edges = np.maximum(values[0], values[-1])
    ratio = float(np.max(edges / np.where(peaks > 0, peaks, np.inf)))
    if ratio > EDGE_TOL:
        raise TomographyError('Tomogram does not decay in X (edge/peak = {:.3g}); '
                              'input is not normalizable'.format(ratio))


def reconstruct_symplectic(tomogram, q_axis, p_axis):
    """
    Invert a symplectic tomogram on (q_axis, p_axis); the raw normalization
    and the imaginary residue are reported next to the normalized result.
    """
    if tomogram.representation != SYMPLECTIC:
        raise TomographyError('Reconstruction needs a symplectic tomogram, got {}'.format(tomogram.representation))
    check_decay(tomogram)
    params = tomogram.params
    k = params.k
    X_axis, mu_axis, nu_axis = tomogram.grid.axes
    q_axis = dataclasses.replace(q_axis, name='q')
    p_axis = dataclasses.replace(p_axis, name='p')

    phase = np.exp(1j * k * X_axis.points)[:, None, None]
    chi = trapezoid(tomogram.grid.values * phase, dx=X_axis.spacing, axis=0)
    chi = chi * trapezoid_weights(mu_axis)[:, None] * trapezoid_weights(nu_axis)[None, :]
    left = np.exp(-1j * k * np.outer(q_axis.points, mu_axis.points))
    right = np.exp(-1j * k * np.outer(nu_axis.points, p_axis.points))
    values = left @ chi @ right * (k ** 2 / (4 * math.pi ** 2))

    scale = np.max(np.abs(values))
    residue = float(np.max(np.abs(values.imag)) / scale)
    if residue > settings.RECONSTRUCTION_IMAG_TOL:
        raise TomographyError('Reconstructed Wigner function has imaginary residue {:.3g}'.format(residue))
    grid = GridFn((q_axis, p_axis), values.real.copy())
    raw = float(trapezoid(trapezoid(grid.values, dx=p_axis.spacing, axis=1), dx=q_axis.spacing))
    if abs(raw - 1.0) > settings.RECONSTRUCTION_NORM_TOL:
        raise TomographyError('Reconstructed Wigner function integrates to {:.4g}; '
                              'widen the mu, nu or q, p axes'.format(raw))
    logger.debug('Reconstruction: raw normalization %.6f, imaginary residue %.3g', raw, residue)
    return Reconstruction(WignerFn(grid * (1.0 / raw), params), raw, residue)


def wigner_from_symplectic(tomogram, q_axis, p_axis):
    return reconstruct_symplectic(tomogram, q_axis, p_axis).wigner
