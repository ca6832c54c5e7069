"""
Closed-form tomograms of Gaussian states and Fock states
"""
import dataclasses
import logging
import math

import numpy as np
from scipy.special import eval_hermite, factorial

from tomojoint.gridcalc.grid import GridFn
from tomojoint.states.models import Fock
from tomojoint.tomography.errors import TomographyError
from tomojoint.tomography.models import (
    PARAMETER_NAMES,
    UNDEFINED_AT_ORIGIN,
    Tomogram,
    check_representation,
    directions,
    nascent_slice,
)

logger = logging.getLogger(__name__)


def _axes(representation, X_axis, parameter_axes):
    names = PARAMETER_NAMES[check_representation(representation)]
    if len(parameter_axes) != len(names):
        raise TomographyError('{} tomogram needs {} parameter axes'.format(representation, len(names)))
    return (dataclasses.replace(X_axis, name='X'),) + tuple(
        dataclasses.replace(axis, name=name) for axis, name in zip(parameter_axes, names))


def _tabulate(representation, params, X_axis, parameter_axes, profile, strict):
    """
    Evaluate profile(X, mu, nu) -> values on every regular direction and put
    the nascent Gaussian at the origin of the parameter plane.
    """
    axes = _axes(representation, X_axis, parameter_axes)
    mu, nu = directions(representation, params, axes[1:])
    X = axes[0].points.reshape((-1,) + (1,) * mu.ndim)
    degenerate = (np.abs(mu) + np.abs(nu)) < 1e-6
    flags = ()
    with np.errstate(divide='ignore', invalid='ignore'):
        values = profile(X, mu[None], nu[None])
    if degenerate.any():
        if strict:
            raise TomographyError(UNDEFINED_AT_ORIGIN)
        values[:, degenerate] = nascent_slice(axes[0])[:, None]
        message = 'degenerate direction mu=nu=0 stored as a nascent Gaussian of width h_X'
        logger.warning(message)
        flags = (message,)
    return Tomogram(representation, GridFn(axes, values), params, flags)


def tomogram_analytic(spec, representation, params, X_axis, parameter_axes, strict=False):
    """
    Gaussian tomogram of a Gaussian-class state: mean mu q + nu p and variance
    mu^2 var_q + nu^2 var_p (optical directions substituted for the optical case).
    """
    if not spec.is_gaussian:
        raise TomographyError('{} is not a Gaussian state'.format(spec))
    q_mean, p_mean, var_q, var_p = spec.moments(params)

    def profile(X, mu, nu):
        mean = mu * q_mean + nu * p_mean
        variance = mu ** 2 * var_q + nu ** 2 * var_p
        return np.exp(-(X - mean) ** 2 / (2 * variance)) / np.sqrt(2 * math.pi * variance)

    return _tabulate(representation, params, X_axis, parameter_axes, profile, strict)


def fock_tomogram(n, representation, params, X_axis, parameter_axes, strict=False):
    """
    M_n = exp(-X^2/s^2) / sqrt(pi s^2) H_n(X/s)^2 / (2^n n!)
    with s^2 = mu^2 hbar/(m omega) + nu^2 hbar m omega.
    """
    n = Fock(n).n
    weight = 1.0 / (2.0 ** n * factorial(n))

    def profile(X, mu, nu):
        s = np.sqrt(mu ** 2 * params.hbar / (params.mass * params.omega)
                    + nu ** 2 * params.hbar * params.mass * params.omega)
        return np.exp(-(X / s) ** 2) / np.sqrt(math.pi) / s * eval_hermite(n, X / s) ** 2 * weight

    return _tabulate(representation, params, X_axis, parameter_axes, profile, strict)


def state_tomogram(spec, representation, params, X_axis, parameter_axes, strict=False):
    """Closed-form tomogram of any catalog state"""
    if isinstance(spec, Fock):
        return fock_tomogram(spec.n, representation, params, X_axis, parameter_axes, strict)
    return tomogram_analytic(spec, representation, params, X_axis, parameter_axes, strict)
