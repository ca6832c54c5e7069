"""
Expectation values: <A> = int (dual symbol of A) x (joint distribution)
"""
import logging

from tomojoint.gridcalc.calculus import derivative, integrate, restrict
from tomojoint.gridcalc.errors import GridError
from tomojoint.gridcalc.grid import GridFn
from tomojoint.symbols.errors import SymbolError
from tomojoint.symbols.models import RegularSymbol, SingularSymbol
from tomojoint.symbols.regular import regular_symbol

logger = logging.getLogger(__name__)


def _check_compatible(symbol, joint):
    if symbol.representation != joint.representation:
        raise SymbolError('Cannot pair a {} symbol with a {} joint distribution'.format(
            symbol.representation, joint.representation))
    if symbol.prior != joint.prior:
        raise SymbolError('Symbol built for prior {} but the joint uses {}'.format(symbol.prior, joint.prior))


def _pair_regular(symbol, grid):
    return complex(integrate(symbol.evaluate(grid) * grid))


def _pair_term(term, grid):
    f = grid
    for axis, order in sorted(term.derivatives.items()):
        f = derivative(f, axis, order) * (-1) ** order
    for axis, value in sorted(term.support.items()):
        ax = f.axis(axis)
        if not ax.contains(value):
            raise SymbolError('Delta support {}={} lies outside the grid [{}, {}]'.format(
                axis, value, ax.min, ax.max))
        try:
            f = restrict(f, axis, value)
        except GridError as e:
            raise SymbolError(e.message)
    if not isinstance(f, GridFn) or f.names != ('X',):
        raise SymbolError('Delta supports must constrain every parameter axis, left {}'.format(
            getattr(f, 'names', ())))
    return term.coefficient * complex(integrate(f * term.weight(f.coordinates('X'))))


def _pair_singular(symbol, grid):
    return sum((_pair_term(term, grid) for term in symbol.terms), complex(symbol.constant))


def pair(symbol, joint):
    """
    Expectation value of the symbol's observable in the state behind `joint`.
    Always complex; take the real part explicitly where it is meant.
    """
    _check_compatible(symbol, joint)
    if isinstance(symbol, RegularSymbol):
        value = _pair_regular(symbol, joint.grid)
    elif isinstance(symbol, SingularSymbol):
        value = _pair_singular(symbol, joint.grid)
    else:
        raise SymbolError('Cannot pair {!r}'.format(symbol))
    logger.debug('<%s> = %s', symbol.name, value)
    return value


def pair_operator(op, joint, symbol=None):
    """
    <A> from the correspondence rule of A: the identity symbol paired with
    [A] applied to the joint. `symbol` defaults to the regular identity of
    the joint's representation.
    """
    if symbol is None:
        symbol = regular_symbol('one', joint.representation, joint.prior, joint.params)
    _check_compatible(symbol, joint)
    image = joint.with_values(op.apply(joint.grid).values)
    return pair(symbol, image)
