from tomojoint.symbols.errors import SymbolError
from tomojoint.symbols.models import ALTERNATIVE, MONOMIAL, REGULAR, SINGULAR, SYMBOL_KIND_CHOICES
from tomojoint.symbols.regular import alternative_regular_symbols_q2_p2, monomial_regular_symbol, regular_symbol
from tomojoint.symbols.singular import singular_symbol
from tomojoint.tomography.models import SYMPLECTIC


def parse_symbol_kind(text):
    """
    regular | singular | alt | monomial:k,l -> (kind, (k, l) or None)
    """
    if not text:
        raise SymbolError('Missing symbol kind')
    kind, _, body = text.strip().partition(':')
    kind = kind.lower()
    if kind == MONOMIAL:
        try:
            k, l = (int(part) for part in body.split(','))
        except ValueError:
            raise SymbolError("monomial expects 'monomial:k,l', got '{}'".format(text))
        return kind, (k, l)
    if kind not in (REGULAR, SINGULAR, ALTERNATIVE) or body:
        raise SymbolError("Unknown symbol kind '{}' (choose from {})".format(
            text, ', '.join(key for key, _ in SYMBOL_KIND_CHOICES)))
    return kind, None


def build_symbol(kind, name, representation, prior, params, orders=None):
    """The dual symbol of operator `name` in the requested form"""
    if kind == REGULAR:
        return regular_symbol(name, representation, prior, params)
    if representation != SYMPLECTIC:
        raise SymbolError('{} symbols are only given for symplectic joints'.format(kind))
    if kind == SINGULAR:
        return singular_symbol(name, prior, params)
    if kind == ALTERNATIVE:
        q2, p2 = alternative_regular_symbols_q2_p2(prior)
        if name == 'q2':
            return q2
        if name == 'p2':
            return p2
        raise SymbolError("Alternative symbols exist for q2 and p2 only, not '{}'".format(name))
    if kind == MONOMIAL:
        return monomial_regular_symbol(orders[0], orders[1], prior)
    raise SymbolError("Unknown symbol kind '{}'".format(kind))
