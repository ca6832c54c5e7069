"""
Uniform axes and the functions tabulated on their Cartesian products
"""
from dataclasses import dataclass, field
from numbers import Integral, Number

import numpy as np

from tomojoint.gridcalc.errors import GridError

REAL = 'real'
COMPLEX = 'complex'
SCALAR_KIND_CHOICES = (
    (REAL, 'Real'),
    (COMPLEX, 'Complex'),
)


@dataclass(frozen=True)
class Axis(object):
    """
    A uniform sampling of [min, max] with `count` points.
    """
    name: str
    min: float
    max: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, 'min', float(self.min))
        object.__setattr__(self, 'max', float(self.max))
        if int(self.count) != self.count or self.count < 3:
            raise GridError('Axis {} needs an integer count >= 3, got {}'.format(self.name, self.count))
        object.__setattr__(self, 'count', int(self.count))
        if not self.max > self.min:
            raise GridError('Axis {} needs max > min, got [{}, {}]'.format(self.name, self.min, self.max))

    @classmethod
    def from_tuple(cls, name, spec):
        lower, upper, count = spec
        return cls(name, lower, upper, count)

    @classmethod
    def from_points(cls, name, points):
        """Build an axis from explicit points, rejecting anything non-uniform"""
        points = np.asarray(points, dtype=float)
        if points.ndim != 1 or len(points) < 3:
            raise GridError('Axis {} needs a 1-D array of at least 3 points'.format(name))
        steps = np.diff(points)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise GridError('Axis {} is not uniform'.format(name))
        return cls(name, points[0], points[-1], len(points))

    @property
    def spacing(self):
        return (self.max - self.min) / (self.count - 1)

    @property
    def points(self):
        return self.min + self.spacing * np.arange(self.count)

    def contains(self, value, tol=1e-12):
        return self.min - tol * self.spacing <= value <= self.max + tol * self.spacing

    def nearest_index(self, value):
        return int(np.clip(np.rint((value - self.min) / self.spacing), 0, self.count - 1))

    def to_dict(self):
        return {'name': self.name, 'min': self.min, 'max': self.max, 'count': self.count}

    @classmethod
    def from_dict(cls, data):
        return cls(data['name'], data['min'], data['max'], data['count'])


@dataclass(frozen=True, eq=False)
class GridFn(object):
    """
    Values of a real or complex function on the product of `axes`.

    The value array is read-only; every operation returns a new GridFn.
    `warnings` carries soft diagnostics produced while computing the values.
    """
    axes: tuple
    values: np.ndarray
    warnings: tuple = field(default=())

    def __post_init__(self):
        axes = tuple(self.axes)
        names = [axis.name for axis in axes]
        if len(set(names)) != len(names):
            raise GridError('Repeated axis names: {}'.format(names))
        values = np.asarray(self.values)
        if not (np.issubdtype(values.dtype, np.floating) or np.issubdtype(values.dtype, np.complexfloating)):
            values = values.astype(float)
        shape = tuple(axis.count for axis in axes)
        if values.shape != shape:
            if values.size != int(np.prod(shape)):
                raise GridError('{} values do not fit axes of shape {}'.format(values.size, shape))
            values = values.reshape(shape)
        values = values.view()
        values.flags.writeable = False
        object.__setattr__(self, 'axes', axes)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'warnings', tuple(self.warnings))

    @classmethod
    def from_function(cls, axes, func, dtype=None):
        """Tabulate func(**coordinates) on the grid spanned by axes"""
        grid = cls(axes, np.zeros(tuple(axis.count for axis in axes)))
        values = np.broadcast_to(func(**grid.mesh()), grid.shape)
        if dtype is not None:
            values = values.astype(dtype)
        return cls(axes, np.array(values))

    @property
    def shape(self):
        return tuple(axis.count for axis in self.axes)

    @property
    def ndim(self):
        return len(self.axes)

    @property
    def names(self):
        return tuple(axis.name for axis in self.axes)

    @property
    def scalar_kind(self):
        return COMPLEX if np.iscomplexobj(self.values) else REAL

    def axis_index(self, key):
        """Resolve an axis name or position to a position"""
        if isinstance(key, str):
            try:
                return self.names.index(key)
            except ValueError:
                raise GridError('No axis named {} in {}'.format(key, self.names))
        if isinstance(key, Integral) and not isinstance(key, bool):
            if not 0 <= key < self.ndim:
                raise GridError('Axis index {} out of range for {} axes'.format(key, self.ndim))
            return int(key)
        raise GridError('Cannot interpret {!r} as an axis'.format(key))

    def axis(self, key):
        return self.axes[self.axis_index(key)]

    def has_axis(self, name):
        return name in self.names

    def coordinates(self, key):
        """Coordinates along one axis, shaped to broadcast against the values"""
        index = self.axis_index(key)
        shape = [1] * self.ndim
        shape[index] = self.axes[index].count
        return self.axes[index].points.reshape(shape)

    def mesh(self):
        return {axis.name: self.coordinates(i) for i, axis in enumerate(self.axes)}

    def with_values(self, values, warnings=None):
        if warnings is None:
            warnings = self.warnings
        return GridFn(self.axes, values, warnings)

    def with_warning(self, message):
        return GridFn(self.axes, self.values, self.warnings + (message,))

    def same_grid(self, other):
        return self.axes == other.axes

    def to_complex(self):
        return self.with_values(self.values.astype(complex))

    @property
    def real(self):
        return self.with_values(np.real(self.values).copy())

    @property
    def imag(self):
        return self.with_values(np.imag(self.values).copy())

    def max_abs(self):
        return float(np.max(np.abs(self.values)))

    def _other_values(self, other):
        if isinstance(other, GridFn):
            if not self.same_grid(other):
                raise GridError('Grid mismatch: {} vs {}'.format(self.names, other.names))
            return other.values
        if isinstance(other, (Number, np.ndarray)):
            return other
        return NotImplemented

    def _combine(self, other, operation):
        values = self._other_values(other)
        if values is NotImplemented:
            return NotImplemented
        merged = self.warnings + (other.warnings if isinstance(other, GridFn) else ())
        return GridFn(self.axes, operation(self.values, values), merged)

    def __add__(self, other):
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: np.subtract(b, a))

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._combine(other, np.divide)

    def __neg__(self):
        return self.with_values(-self.values)

    def __repr__(self):
        return 'GridFn(axes={}, kind={})'.format(
            ', '.join('{}[{:g},{:g}]x{}'.format(a.name, a.min, a.max, a.count) for a in self.axes),
            self.scalar_kind)
