from dataclasses import dataclass

import numpy as np

from tomojoint import settings
from tomojoint.dynamics.errors import DynamicsError
from tomojoint.opalg.errors import OperatorError
from tomojoint.opalg.rules import potential_operator


@dataclass(frozen=True)
class PolynomialPotential(object):
    """
    V(q) = c0 + c1 q + ... + cd q^d, time independent
    """
    coefficients: tuple

    def __post_init__(self):
        try:
            coefficients = [float(c) for c in self.coefficients]
        except (TypeError, ValueError):
            raise DynamicsError('Potential coefficients must be numbers, got {!r}'.format(self.coefficients))
        while len(coefficients) > 1 and coefficients[-1] == 0:
            coefficients.pop()
        if not coefficients:
            raise DynamicsError('A potential needs at least one coefficient')
        if len(coefficients) - 1 > settings.MAX_POLYNOMIAL_DEGREE:
            raise DynamicsError('Potential degree {} exceeds {}'.format(
                len(coefficients) - 1, settings.MAX_POLYNOMIAL_DEGREE))
        object.__setattr__(self, 'coefficients', tuple(coefficients))

    @classmethod
    def harmonic(cls, params):
        """m omega^2 q^2 / 2"""
        return cls((0.0, 0.0, params.mass * params.omega ** 2 / 2))

    @classmethod
    def free(cls):
        return cls((0.0,))

    @classmethod
    def parse(cls, text):
        """Comma separated coefficients, constant first: '0,0,0.5'"""
        try:
            return cls(tuple(float(part) for part in text.split(',')))
        except ValueError:
            raise DynamicsError("Cannot read potential coefficients from '{}'".format(text))

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def is_free(self):
        return self.degree == 0

    def evaluate(self, q):
        return np.polynomial.polynomial.polyval(q, self.coefficients)

    def operator(self, rep, derived=False):
        """V([q]) in the representation `rep`"""
        try:
            return potential_operator(rep, self.coefficients, derived)
        except OperatorError as e:
            raise DynamicsError(e.message)

    def __str__(self):
        terms = ['{:g} q^{}'.format(c, k) for k, c in enumerate(self.coefficients) if c]
        return 'V(q) = {}'.format(' + '.join(terms) or '0')
