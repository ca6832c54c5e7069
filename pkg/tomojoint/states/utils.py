import math

from tomojoint.states.errors import StateError
from tomojoint.states.models import Coherent, Fock, SqueezedGaussian, StateSpec


def parse_fields(text):
    """
    Split 'kind:a=1,b=2' into ('kind', {'a': '1', 'b': '2'})
    """
    kind, _, body = text.strip().partition(':')
    fields = {}
    for item in filter(None, (part.strip() for part in body.split(','))):
        key, sep, value = item.partition('=')
        if not sep or not key.strip():
            raise StateError("Cannot parse '{}' in '{}'".format(item, text))
        fields[key.strip()] = value.strip()
    return kind.strip().lower(), fields


def _number(fields, key, default, text):
    value = fields.pop(key, default)
    try:
        return float(value)
    except ValueError:
        raise StateError("'{}' is not a number in '{}'".format(value, text))


def parse_state(text):
    """
    fock:n=2, coherent:re=0.5,im=0.0 or gauss:q=1,p=0,s=2
    """
    if not text:
        raise StateError('Missing state spec')
    kind, fields = parse_fields(text)
    if kind == StateSpec.FOCK:
        n = _number(fields, 'n', 0, text)
        state = Fock(int(n) if n == int(n) else n)
    elif kind == StateSpec.COHERENT:
        state = Coherent(complex(_number(fields, 're', 0, text), _number(fields, 'im', 0, text)))
    elif kind == StateSpec.GAUSS:
        state = SqueezedGaussian(_number(fields, 'q', 0, text), _number(fields, 'p', 0, text),
                                 _number(fields, 's', 1, text))
    else:
        raise StateError("Unknown state kind '{}' (choose from {})".format(
            kind, ', '.join(key for key, _ in StateSpec.STATE_KINDS)))
    if fields:
        raise StateError('Unexpected fields {} in {}'.format(sorted(fields), text))
    return state


def state_catalog():
    """The states every symbol and residual check runs over"""
    return [
        Fock(0), Fock(1), Fock(2), Fock(3),
        Coherent(0), Coherent(1 / math.sqrt(2)), Coherent((1 + 1j) / math.sqrt(2)),
        SqueezedGaussian(0, 0, 0.5), SqueezedGaussian(0, 0, 2),
    ]
