"""
Derivatives, inverse derivatives, quadrature and interpolation on uniform grids
"""
import logging
from functools import lru_cache
from numbers import Integral

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.interpolate import RegularGridInterpolator

from tomojoint import settings
from tomojoint.gridcalc.errors import GridError
from tomojoint.gridcalc.grid import GridFn

logger = logging.getLogger(__name__)


def fornberg_weights(z, nodes, order):
    """
    Finite difference weights for the `order`-th derivative at z from
    values at `nodes` (Fornberg's recursion).
    """
    nodes = np.asarray(nodes, dtype=float)
    n = len(nodes)
    c = np.zeros((n, order + 1))
    c1 = 1.0
    c4 = nodes[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - z
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 = c2 * c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


@lru_cache(maxsize=None)
def stencils(order, accuracy):
    """
    Central weights plus the one-sided weights used for the points that the
    central stencil cannot reach. Both have the requested accuracy.
    """
    if order < 1:
        raise GridError('Derivative order must be positive, got {}'.format(order))
    if accuracy < 2 or accuracy % 2:
        raise GridError('Stencil accuracy must be an even number >= 2, got {}'.format(accuracy))
    width = 2 * ((order + 1) // 2) - 1 + accuracy
    half = width // 2
    central = fornberg_weights(0.0, np.arange(-half, half + 1), order)
    size = order + accuracy
    nodes = np.arange(size)
    left = np.array([fornberg_weights(float(i), nodes, order) for i in range(half)])
    right = np.array([fornberg_weights(float(size - 1 - i), nodes, order) for i in range(half)])
    return half, central, left, right, size


def _derivative_values(values, index, spacing, order, accuracy):
    half, central, left, right, size = stencils(order, accuracy)
    n = values.shape[index]
    if n < max(size, 2 * half + 1):
        raise GridError('Axis with {} points is too short for a derivative of order {} '
                        'at accuracy {} (needs {})'.format(n, order, accuracy, max(size, 2 * half + 1)))
    moved = np.moveaxis(values, index, 0)
    out = np.zeros(moved.shape, dtype=np.result_type(moved.dtype, float))
    for offset, weight in zip(range(-half, half + 1), central):
        if weight:
            out[half:n - half] += weight * moved[half + offset:n - half + offset]
    for i in range(half):
        out[i] = np.tensordot(left[i], moved[:size], axes=(0, 0))
        out[n - 1 - i] = np.tensordot(right[i], moved[n - size:], axes=(0, 0))
    out /= spacing ** order
    return np.moveaxis(out, 0, index)


def derivative(f, axis, order=1, accuracy=None):
    """
    Finite difference derivative of f along one axis.

    Central stencils in the interior, one-sided stencils of the same accuracy
    next to the boundaries.
    """
    accuracy = accuracy or settings.DERIVATIVE_ACCURACY
    index = f.axis_index(axis)
    values = _derivative_values(f.values, index, f.axes[index].spacing, order, accuracy)
    return f.with_values(values)


def _antiderivative_values(values, index, spacing, accuracy):
    # Trapezoid plus the Euler-Maclaurin endpoint term, fourth order overall
    integral = cumulative_trapezoid(values, dx=spacing, axis=index, initial=0)
    slope = _derivative_values(values, index, spacing, 1, accuracy)
    start = np.take(slope, [0], axis=index)
    return integral - spacing ** 2 / 12.0 * (slope - start)


def decay_warning(f, index, tol):
    """Return a message when f has not decayed at the lower end of an axis"""
    scale = np.max(np.abs(f.values))
    if scale == 0:
        return None
    edge = np.max(np.abs(np.take(f.values, 0, axis=index)))
    if edge > tol * scale:
        return ('inverse derivative along {}: integrand at the lower boundary is {:.3g} of its maximum'
                .format(f.axes[index].name, edge / scale))
    return None


def inverse_derivative(f, axis, n=1, accuracy=None, decay_tol=None):
    """
    n-fold antiderivative measured from the lower end of the axis.

    This is the convolution of f with (x - x')^(n-1) Theta(x - x') / (n-1)!,
    with the lower grid boundary standing in for minus infinity. When f has
    not decayed there, a warning is logged and attached to the result.
    """
    if int(n) != n or n < 1:
        raise GridError('Inverse derivative order must be a positive integer, got {}'.format(n))
    accuracy = accuracy or settings.DERIVATIVE_ACCURACY
    decay_tol = settings.DECAY_TOL if decay_tol is None else decay_tol
    index = f.axis_index(axis)
    spacing = f.axes[index].spacing
    warnings = f.warnings
    message = decay_warning(f, index, decay_tol)
    if message:
        logger.warning(message)
        warnings = warnings + (message,)
    values = f.values
    for _ in range(int(n)):
        values = _antiderivative_values(values, index, spacing, accuracy)
    return f.with_values(values, warnings)


def integrate(f, axes=None):
    """
    Trapezoid quadrature over the given axes (all of them by default).

    Returns a GridFn on the remaining axes, or a scalar when nothing remains.
    """
    if axes is None:
        indices = list(range(f.ndim))
    else:
        if isinstance(axes, (str, Integral)):
            axes = [axes]
        indices = [f.axis_index(key) for key in axes]
        if len(set(indices)) != len(indices):
            raise GridError('Repeated axis in integration: {}'.format(list(axes)))
    values = f.values
    for index in sorted(indices, reverse=True):
        values = trapezoid(values, dx=f.axes[index].spacing, axis=index)
    remaining = tuple(axis for i, axis in enumerate(f.axes) if i not in indices)
    if not remaining:
        value = complex(values) if np.iscomplexobj(values) else float(values)
        return value
    return GridFn(remaining, values, f.warnings)


def _fractional_positions(f, point):
    if isinstance(point, dict):
        point = [point[name] for name in f.names]
    point = [float(value) for value in point]
    if len(point) != f.ndim:
        raise GridError('Point {} does not match {} axes'.format(point, f.ndim))
    for value, axis in zip(point, f.axes):
        if not axis.contains(value):
            raise GridError('Point {}={} outside [{}, {}]'.format(axis.name, value, axis.min, axis.max))
    return point, [(value - axis.min) / axis.spacing for value, axis in zip(point, f.axes)]


def interpolate(f, point):
    """
    Multilinear interpolation of f at a point (a sequence ordered like the
    axes or a dict keyed by axis name). Exact at grid nodes.
    """
    point, positions = _fractional_positions(f, point)
    nodes = [int(round(p)) for p in positions]
    if all(abs(p - k) < 1e-9 for p, k in zip(positions, nodes)):
        value = f.values[tuple(nodes)]
        return complex(value) if np.iscomplexobj(value) else float(value)
    grid = tuple(axis.points for axis in f.axes)
    clipped = [np.clip(value, axis.min, axis.max) for value, axis in zip(point, f.axes)]
    if np.iscomplexobj(f.values):
        real = RegularGridInterpolator(grid, np.real(f.values))(clipped)[0]
        imag = RegularGridInterpolator(grid, np.imag(f.values))(clipped)[0]
        return complex(real, imag)
    return float(RegularGridInterpolator(grid, f.values)(clipped)[0])


def restrict(f, axis, value):
    """
    Slice f at axis=value by linear interpolation between the two
    neighbouring nodes; the axis is removed from the result.
    """
    index = f.axis_index(axis)
    ax = f.axes[index]
    if not ax.contains(value):
        raise GridError('{}={} outside [{}, {}]'.format(ax.name, value, ax.min, ax.max))
    position = min(max((value - ax.min) / ax.spacing, 0.0), ax.count - 1.0)
    lower = int(np.floor(position))
    weight = position - lower
    if weight < 1e-9 or lower == ax.count - 1:
        values = np.take(f.values, lower, axis=index)
    elif weight > 1 - 1e-9:
        values = np.take(f.values, lower + 1, axis=index)
    else:
        values = ((1 - weight) * np.take(f.values, lower, axis=index)
                  + weight * np.take(f.values, lower + 1, axis=index))
    remaining = f.axes[:index] + f.axes[index + 1:]
    if not remaining:
        return complex(values) if np.iscomplexobj(values) else float(values)
    return GridFn(remaining, values, f.warnings)
