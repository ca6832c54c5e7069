"""
Operators on grid functions as immutable expression trees

`A * B` composes: B acts first. Sums and products are kept exactly as
built; nothing is reordered or simplified.
"""
import logging
from numbers import Number

import numpy as np

from tomojoint import settings
from tomojoint.gridcalc.calculus import derivative, inverse_derivative
from tomojoint.opalg.errors import OperatorError

logger = logging.getLogger(__name__)


def as_operator(value):
    if isinstance(value, Operator):
        return value
    if isinstance(value, Number):
        return Scalar(value)
    raise OperatorError('Cannot use {!r} as an operator'.format(value))


class Operator(object):
    """
    Base class of every node. Subclasses implement `_apply` on a complex
    GridFn and `key`, a hashable description used for structural equality.
    """

    def apply(self, f, accuracy=None):
        """Act on f; the result is always complex"""
        self.check_axes(f)
        result = self._apply(f.to_complex(), accuracy)
        return result.with_values(result.values, tuple(dict.fromkeys(result.warnings)))

    def __call__(self, f, accuracy=None):
        return self.apply(f, accuracy)

    def _apply(self, f, accuracy):
        raise NotImplementedError

    def axes(self):
        return frozenset()

    def check_axes(self, f):
        missing = self.axes() - set(f.names)
        if missing:
            raise OperatorError('Operator acts on {} but the grid has axes {}'.format(
                ', '.join(sorted(missing)), f.names))

    def key(self):
        raise NotImplementedError

    def map(self, transform):
        """Rebuild the tree with `transform` applied to every leaf"""
        return transform(self)

    def leaves(self):
        yield self

    def __eq__(self, other):
        return isinstance(other, Operator) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __add__(self, other):
        return Sum((self, as_operator(other)))

    def __radd__(self, other):
        return Sum((as_operator(other), self))

    def __neg__(self):
        return Product((Scalar(-1), self))

    def __sub__(self, other):
        return self + (-as_operator(other))

    def __rsub__(self, other):
        return as_operator(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, Number):
            return Product((Scalar(other), self))
        return Product((self, as_operator(other)))

    def __rmul__(self, other):
        return Product((as_operator(other), self))

    def __pow__(self, n):
        if int(n) != n or n < 0:
            raise OperatorError('Operator powers must be non-negative integers, got {}'.format(n))
        if n == 0:
            return Identity()
        return Product((self,) * int(n))


class Identity(Operator):

    def _apply(self, f, accuracy):
        return f

    def key(self):
        return ('1',)

    def __str__(self):
        return '1'


class Scalar(Operator):

    def __init__(self, value):
        self.value = complex(value)

    def _apply(self, f, accuracy):
        return f * self.value

    def key(self):
        return ('c', self.value.real, self.value.imag)

    def __str__(self):
        if self.value.imag == 0:
            return '{:g}'.format(self.value.real)
        return '({:g})'.format(self.value)


class Coordinate(Operator):
    """Multiplication by a grid coordinate raised to `power`"""

    def __init__(self, axis, power=1):
        self.axis = axis
        self.power = power

    def _apply(self, f, accuracy):
        return f * f.coordinates(self.axis) ** self.power

    def axes(self):
        return frozenset([self.axis])

    def key(self):
        return ('x', self.axis, self.power)

    def __str__(self):
        return self.axis if self.power == 1 else '{}^{}'.format(self.axis, self.power)


class Function(Operator):
    """
    Multiplication by a closed-form function of some coordinates.

    Two Function nodes are structurally equal when their labels and axes
    agree, whatever their callables.
    """

    def __init__(self, label, axes, func):
        self.label = label
        self.variables = tuple(axes)
        self.func = func

    def _apply(self, f, accuracy):
        coordinates = {name: f.coordinates(name) for name in self.variables}
        return f * np.broadcast_to(self.func(**coordinates), f.shape)

    def axes(self):
        return frozenset(self.variables)

    def key(self):
        return ('f', self.label, self.variables)

    def __str__(self):
        return '[{}]'.format(self.label)


class Derivative(Operator):

    def __init__(self, axis, order=1):
        if int(order) != order or order < 1:
            raise OperatorError('Derivative order must be a positive integer, got {}'.format(order))
        self.axis = axis
        self.order = int(order)

    def _apply(self, f, accuracy):
        return derivative(f, self.axis, self.order, accuracy or settings.DERIVATIVE_ACCURACY)

    def axes(self):
        return frozenset([self.axis])

    def key(self):
        return ('d', self.axis, self.order)

    def __str__(self):
        return 'd_{}'.format(self.axis) if self.order == 1 else 'd_{}^{}'.format(self.axis, self.order)


class InverseDerivative(Operator):

    def __init__(self, axis, n=1):
        if int(n) != n or n < 1:
            raise OperatorError('Inverse derivative order must be a positive integer, got {}'.format(n))
        self.axis = axis
        self.n = int(n)

    def _apply(self, f, accuracy):
        return inverse_derivative(f, self.axis, self.n, accuracy or settings.DERIVATIVE_ACCURACY)

    def axes(self):
        return frozenset([self.axis])

    def key(self):
        return ('i', self.axis, self.n)

    def __str__(self):
        return 'd_{}^-{}'.format(self.axis, self.n)


class Sum(Operator):

    def __init__(self, terms):
        flat = []
        for term in terms:
            term = as_operator(term)
            flat.extend(term.terms if isinstance(term, Sum) else [term])
        if not flat:
            raise OperatorError('Empty sum')
        self.terms = tuple(flat)

    def _apply(self, f, accuracy):
        results = [term._apply(f, accuracy) for term in self.terms]
        values = sum(result.values for result in results)
        warnings = tuple(dict.fromkeys(w for result in results for w in result.warnings))
        return f.with_values(values, warnings)

    def axes(self):
        return frozenset().union(*(term.axes() for term in self.terms))

    def key(self):
        # addition commutes, so the order of terms does not matter
        return ('+',) + tuple(sorted((term.key() for term in self.terms), key=repr))

    def map(self, transform):
        return Sum(tuple(term.map(transform) for term in self.terms))

    def leaves(self):
        for term in self.terms:
            yield from term.leaves()

    def __str__(self):
        return '(' + ' + '.join(str(term) for term in self.terms) + ')'


class Product(Operator):
    """Composition; the rightmost factor acts first"""

    def __init__(self, factors):
        flat = []
        for factor in factors:
            factor = as_operator(factor)
            flat.extend(factor.factors if isinstance(factor, Product) else [factor])
        if not flat:
            raise OperatorError('Empty product')
        self.factors = tuple(flat)

    def _apply(self, f, accuracy):
        for factor in reversed(self.factors):
            f = factor._apply(f, accuracy)
        return f

    def axes(self):
        return frozenset().union(*(factor.axes() for factor in self.factors))

    def key(self):
        return ('*',) + tuple(factor.key() for factor in self.factors)

    def map(self, transform):
        return Product(tuple(factor.map(transform) for factor in self.factors))

    def leaves(self):
        for factor in self.factors:
            yield from factor.leaves()

    def __str__(self):
        return ' '.join(str(factor) for factor in self.factors)


def apply(op, f, accuracy=None):
    return op.apply(f, accuracy)


def commutator(a, b):
    return a * b - b * a


def polynomial_of_operator(op, coefficients):
    """
    c0 + c1 A + ... + cd A^d composed by Horner's rule, so applying it
    applies A exactly d times.
    """
    coefficients = [float(c) for c in coefficients]
    while len(coefficients) > 1 and coefficients[-1] == 0:
        coefficients.pop()
    if not coefficients:
        raise OperatorError('A polynomial needs at least one coefficient')
    degree = len(coefficients) - 1
    if degree > settings.MAX_POLYNOMIAL_DEGREE:
        raise OperatorError('Polynomial degree {} exceeds {}'.format(degree, settings.MAX_POLYNOMIAL_DEGREE))
    result = Scalar(coefficients[-1]) * Identity()
    for c in reversed(coefficients[:-1]):
        result = op * result
        if c:
            result = Scalar(c) * Identity() + result
    return result
