"""
Tomograms from Wigner functions by explicit line integration

M(X, mu, nu) = int W(q, p) delta(X - mu q - nu p) dq dp is evaluated along the
line (q, p) = X n / r + s t with n = (mu, nu)/r, t = (-nu, mu)/r and r = |(mu, nu)|,
which gives M = (1/r) int W ds. W is sampled with a spline of RADON_SPLINE_ORDER
and treated as zero outside its grid.
"""
import dataclasses
import logging
import math

import numpy as np
from scipy.integrate import trapezoid
from scipy.ndimage import map_coordinates, spline_filter

from tomojoint import settings
from tomojoint.gridcalc.grid import GridFn
from tomojoint.tomography.errors import TomographyError
from tomojoint.tomography.models import (
    OPTICAL,
    SYMPLECTIC,
    UNDEFINED_AT_ORIGIN,
    Tomogram,
    check_theta_axis,
    directions,
    is_degenerate,
    nascent_slice,
)

logger = logging.getLogger(__name__)

# Directions sampled together; bounds the size of the sample array
BATCH = 64


class LineSampler(object):
    """
    Line integrals of one Wigner function along arbitrary directions
    """

    def __init__(self, wigner, X_axis, order=None):
        self.wigner = wigner
        self.X = X_axis.points
        self.X_axis = X_axis
        self.order = settings.RADON_SPLINE_ORDER if order is None else order
        q_axis, p_axis = wigner.q_axis, wigner.p_axis
        self.q_axis, self.p_axis = q_axis, p_axis
        values = np.asarray(wigner.grid.values, dtype=float)
        self.coefficients = spline_filter(values, order=self.order) if self.order > 1 else values
        reach = math.hypot(max(abs(q_axis.min), abs(q_axis.max)), max(abs(p_axis.min), abs(p_axis.max)))
        step = min(q_axis.spacing, p_axis.spacing)
        count = 2 * int(math.ceil(reach / step)) + 1
        self.s = np.linspace(-reach, reach, count)

    def integrals(self, mu, nu):
        """
        M(X, mu_i, nu_i) for 1-D arrays of directions, shape (len(X), len(mu)).
        Every direction must be non-degenerate.
        """
        mu = np.asarray(mu, dtype=float)
        nu = np.asarray(nu, dtype=float)
        r = np.hypot(mu, nu)
        n_q, n_p = mu / r, nu / r
        X = self.X[:, None, None]
        s = self.s[None, None, :]
        q = X * n_q[None, :, None] / r[None, :, None] - s * n_p[None, :, None]
        p = X * n_p[None, :, None] / r[None, :, None] + s * n_q[None, :, None]
        coordinates = np.array([
            (q - self.q_axis.min) / self.q_axis.spacing,
            (p - self.p_axis.min) / self.p_axis.spacing,
        ])
        samples = map_coordinates(self.coefficients, coordinates.reshape(2, -1), order=self.order,
                                  mode='constant', cval=0.0, prefilter=False).reshape(q.shape)
        return trapezoid(samples, self.s, axis=-1) / r[None, :]

    def table(self, mu, nu, strict=False):
        """
        Integrals for a grid of directions (arrays of equal shape); returns an
        array shaped (len(X),) + mu.shape and the flags raised.
        """
        mu = np.asarray(mu, dtype=float)
        nu = np.asarray(nu, dtype=float)
        flat_mu, flat_nu = mu.ravel(), nu.ravel()
        out = np.empty((len(self.X), flat_mu.size))
        flags = []
        degenerate = np.array([is_degenerate(a, b) for a, b in zip(flat_mu, flat_nu)], dtype=bool)
        if degenerate.any():
            if strict:
                raise TomographyError(UNDEFINED_AT_ORIGIN)
            out[:, degenerate] = nascent_slice(self.X_axis)[:, None]
            message = 'degenerate direction mu=nu=0 stored as a nascent Gaussian of width h_X'
            logger.warning(message)
            flags.append(message)
        regular = np.flatnonzero(~degenerate)
        batch = BATCH
        for start in range(0, regular.size, batch):
            chunk = regular[start:start + batch]
            out[:, chunk] = self.integrals(flat_mu[chunk], flat_nu[chunk])
            logger.debug('Radon batch %d/%d', start // batch + 1, -(-regular.size // batch))
        return out.reshape((len(self.X),) + mu.shape), flags


def renormalize_slices(values, X_axis):
    """Rescale slices whose X-integral drifts by more than SLICE_NORM_TOL"""
    norms = trapezoid(values, dx=X_axis.spacing, axis=0)
    drift = np.abs(norms - 1.0)
    bad = (drift > settings.SLICE_NORM_TOL) & (norms > 0)
    flags = []
    if bad.any():
        values = values.copy()
        values[:, bad] /= norms[bad]
        message = '{} slice(s) renormalized, largest drift {:.3g}'.format(int(bad.sum()), float(drift[bad].max()))
        logger.warning(message)
        flags.append(message)
    return values, flags


def _x_axis(X_axis):
    return dataclasses.replace(X_axis, name='X')


def symplectic_tomogram(wigner, X_axis, mu_axis, nu_axis, order=None, strict=False):
    """
    M(X, mu, nu) of a Wigner function on the product of the three axes.

    The origin of the (mu, nu) plane has no line; it is stored as a nascent
    Gaussian and flagged, or rejected when strict is set.
    """
    X_axis = _x_axis(X_axis)
    axes = (X_axis, dataclasses.replace(mu_axis, name='mu'), dataclasses.replace(nu_axis, name='nu'))
    mu, nu = directions(SYMPLECTIC, wigner.params, axes[1:])
    sampler = LineSampler(wigner, X_axis, order)
    values, flags = sampler.table(mu, nu, strict=strict)
    values, renormalized = renormalize_slices(values, X_axis)
    return Tomogram(SYMPLECTIC, GridFn(axes, values), wigner.params, flags + renormalized)


def optical_tomogram(wigner, X_axis, theta_axis, order=None):
    """w(X, theta) = M(X, cos theta, sin theta / (m omega))"""
    theta_axis = dataclasses.replace(theta_axis, name='theta')
    check_theta_axis(theta_axis)
    X_axis = _x_axis(X_axis)
    mu, nu = directions(OPTICAL, wigner.params, (theta_axis,))
    sampler = LineSampler(wigner, X_axis, order)
    values, flags = sampler.table(mu, nu)
    values, renormalized = renormalize_slices(values, X_axis)
    return Tomogram(OPTICAL, GridFn((X_axis, theta_axis), values), wigner.params, flags + renormalized)


def symplectic_slice(wigner, X_axis, mu, nu, order=None):
    """One slice M(., mu, nu) at an arbitrary non-degenerate direction"""
    if is_degenerate(mu, nu):
        raise TomographyError(UNDEFINED_AT_ORIGIN)
    X_axis = _x_axis(X_axis)
    values = LineSampler(wigner, X_axis, order).integrals([mu], [nu])[:, 0]
    return GridFn((X_axis,), values)
