"""
Dual symbols: the functions an observable is paired with to turn a joint
distribution into an expectation value
"""
from dataclasses import dataclass, field

import numpy as np

from tomojoint.gridcalc.grid import GridFn
from tomojoint.symbols.errors import SymbolError
from tomojoint.tomography.models import PARAMETER_NAMES, SYMPLECTIC

REGULAR = 'regular'
SINGULAR = 'singular'
ALTERNATIVE = 'alt'
MONOMIAL = 'monomial'
SYMBOL_KIND_CHOICES = (
    (REGULAR, 'Regular generalized function'),
    (SINGULAR, 'Delta-supported generalized function'),
    (ALTERNATIVE, 'Alternative regular form of q^2 and p^2'),
    (MONOMIAL, 'Weyl-symmetrized monomial q^k p^l'),
)


@dataclass(frozen=True, eq=False)
class RegularSymbol(object):
    """
    A smooth dual symbol. `func(**coordinates)` returns its (complex) values
    on the axes of a joint distribution.
    """
    name: str
    representation: str
    prior: object
    func: object

    def evaluate(self, grid):
        """Tabulate the symbol on the axes of `grid`"""
        expected = ('X',) + PARAMETER_NAMES[self.representation]
        if grid.names != expected:
            raise SymbolError('{} symbol needs axes {}, got {}'.format(self.representation, expected, grid.names))
        coordinates = {name: grid.coordinates(name) for name in expected}
        values = np.broadcast_to(self.func(**coordinates), grid.shape).astype(complex)
        return GridFn(grid.axes, values)

    def shifted(self, constant, name=None):
        """The same symbol plus a constant"""
        func = self.func
        return RegularSymbol(name or self.name, self.representation, self.prior,
                             lambda **coordinates: func(**coordinates) + constant)

    def __str__(self):
        return '{} regular symbol of {} | {}'.format(self.representation, self.name, self.prior)


@dataclass(frozen=True)
class SingularTerm(object):
    """
    coefficient * weight(X) * prod_axis delta^(order)(axis - support[axis])

    `derivatives` maps a constrained axis to the order of the delta
    derivative sitting there; axes not listed carry a plain delta.
    """
    coefficient: complex
    weight: object
    support: dict
    derivatives: dict = field(default_factory=dict)

    def __post_init__(self):
        unknown = set(self.derivatives) - set(self.support)
        if unknown:
            raise SymbolError('Delta derivatives on unconstrained axes {}'.format(sorted(unknown)))


@dataclass(frozen=True, eq=False)
class SingularSymbol(object):
    """
    A finite sum of delta-supported terms plus an additive constant.
    Pairing slices the joint at every support point; no delta is ever
    put on the grid.
    """
    name: str
    prior: object
    terms: tuple
    constant: complex = 0j

    representation = SYMPLECTIC

    def supports(self):
        return [term.support for term in self.terms]

    def __str__(self):
        return 'singular symbol of {} | {} ({} terms)'.format(self.name, self.prior, len(self.terms))
