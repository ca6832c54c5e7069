import json

from tomojoint.jointdist.errors import PriorError
from tomojoint.jointdist.priors import (
    GaussianPrior,
    GaussianSumPrior,
    PriorComponent,
    default_optical_prior,
    default_symplectic_prior,
)
from tomojoint.states.errors import StateError
from tomojoint.states.utils import parse_fields

P1_FIELDS = ('mu0', 'nu0', 'xi', 'zeta')


def parse_prior(text):
    """
    p1:mu0=0,nu0=0,xi=1,zeta=1 | p1-default | p2:[{"q":..,"f":..,"phi":..},...] | p2-default
    """
    if not text:
        raise PriorError('Missing prior spec')
    text = text.strip()
    if text == 'p1-default':
        return default_symplectic_prior()
    if text == 'p2-default':
        return default_optical_prior()
    if text.startswith('p2:'):
        return parse_gaussian_sum(text[3:])
    try:
        kind, fields = parse_fields(text)
    except StateError as e:
        raise PriorError(e.message)
    if kind != 'p1':
        raise PriorError("Unknown prior '{}' (use p1:..., p1-default, p2:[...] or p2-default)".format(text))
    unknown = set(fields) - set(P1_FIELDS)
    if unknown:
        raise PriorError('Unexpected fields {} in {}'.format(sorted(unknown), text))
    defaults = default_symplectic_prior().to_dict()
    try:
        values = [float(fields.get(name, defaults[name])) for name in P1_FIELDS]
    except ValueError:
        raise PriorError("Non-numeric field in '{}'".format(text))
    return GaussianPrior(*values)


def parse_gaussian_sum(body):
    try:
        items = json.loads(body)
    except ValueError:
        raise PriorError("p2 expects a JSON list of {{q, f, phi}} objects, got '{}'".format(body))
    if isinstance(items, dict):
        items = [items]
    try:
        components = tuple(PriorComponent(item['q'], item['f'], item['phi']) for item in items)
    except (KeyError, TypeError):
        raise PriorError("Every p2 component needs q, f and phi: '{}'".format(body))
    return GaussianSumPrior(components)


def prior_from_dict(data):
    """Inverse of the priors' to_dict"""
    if data.get('kind') == 'p1':
        return GaussianPrior(*(data[name] for name in P1_FIELDS))
    if data.get('kind') == 'p2':
        return GaussianSumPrior(tuple(PriorComponent(c['q'], c['f'], c['phi']) for c in data['components']))
    raise PriorError('Unknown prior record {}'.format(data))
