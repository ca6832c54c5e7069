"""
Delta-supported dual symbols for a symplectic joint with a Gaussian prior

Every delta sits where the prior is known in closed form, so each weight
carries the exponential that cancels P at the support point. For a slice
M(X, mu, nu) the X moments are

    int X^n M(X, mu, nu) dX = <(mu q + nu p)^n>,

which is what the supports (xi, 0), (0, zeta) and (xi, zeta) pick apart.
"""
import logging
import math

import numpy as np

from tomojoint.jointdist.priors import GaussianPrior
from tomojoint.symbols.errors import SymbolError
from tomojoint.symbols.models import SingularSymbol, SingularTerm

logger = logging.getLogger(__name__)

SINGULAR_NAMES = ('one', 'q', 'p', 'q2', 'p2', 'qn', 'pn', 'qp', 'n', 'q_fourier', 'p_fourier', 'qp_fourier')


def _unit(X):
    return np.ones_like(X)


def _power(n):
    return lambda X: X ** n


def _check_prior(prior):
    if not isinstance(prior, GaussianPrior):
        raise SymbolError('Singular symbols are only given for the symplectic Gaussian prior, got {}'.format(prior))


def compensation(prior, mu, nu):
    """pi xi zeta / P(mu, nu), the factor that cancels the prior at a support point"""
    return math.pi * prior.xi * prior.zeta * math.exp(
        (mu - prior.mu0) ** 2 / prior.xi ** 2 + (nu - prior.nu0) ** 2 / prior.zeta ** 2)


def identity_symbol(prior):
    """
    pi xi zeta exp(mu0^2/xi^2 + nu0^2/zeta^2) delta(mu) delta(nu)
    """
    return SingularSymbol('one', prior, (SingularTerm(compensation(prior, 0, 0), _unit, {'mu': 0.0, 'nu': 0.0}),))


def position_power_symbol(prior, n=1):
    """
    <q^n> from the slice through (xi, 0):
    pi zeta / xi^(n-1) exp((xi - mu0)^2/xi^2 + nu0^2/zeta^2) X^n delta(mu - xi) delta(nu)
    """
    coefficient = compensation(prior, prior.xi, 0) / prior.xi ** n
    return SingularSymbol('q^{}'.format(n), prior,
                          (SingularTerm(coefficient, _power(n), {'mu': prior.xi, 'nu': 0.0}),))


def momentum_power_symbol(prior, n=1):
    coefficient = compensation(prior, 0, prior.zeta) / prior.zeta ** n
    return SingularSymbol('p^{}'.format(n), prior,
                          (SingularTerm(coefficient, _power(n), {'mu': 0.0, 'nu': prior.zeta}),))


def product_symbol(prior, params):
    """
    (pi/2) X^2 [e(xi, zeta) delta(mu - xi) delta(nu - zeta) - e(xi, 0) delta(mu - xi) delta(nu)
    - e(0, zeta) delta(mu) delta(nu - zeta)] + (i hbar pi / 2) xi zeta e(0, 0) delta(mu) delta(nu)

    with e(a, b) = exp((a - mu0)^2/xi^2 + (b - nu0)^2/zeta^2).
    """
    xi, zeta = prior.xi, prior.zeta
    scale = 1.0 / (2 * xi * zeta)
    square = _power(2)
    terms = (
        SingularTerm(scale * compensation(prior, xi, zeta), square, {'mu': xi, 'nu': zeta}),
        SingularTerm(-scale * compensation(prior, xi, 0), square, {'mu': xi, 'nu': 0.0}),
        SingularTerm(-scale * compensation(prior, 0, zeta), square, {'mu': 0.0, 'nu': zeta}),
        SingularTerm(0.5j * params.hbar * compensation(prior, 0, 0), _unit, {'mu': 0.0, 'nu': 0.0}),
    )
    return SingularSymbol('qp', prior, terms)


def number_symbol(prior, params):
    """(m omega / hbar q^2 + p^2 / (hbar m omega) - 1) / 2"""
    mw = params.mass * params.omega
    parts = ((0.5 * mw / params.hbar, position_power_symbol(prior, 2)),
             (0.5 / (params.hbar * mw), momentum_power_symbol(prior, 2)),
             (-0.5, identity_symbol(prior)))
    terms = tuple(SingularTerm(scale * term.coefficient, term.weight, term.support, term.derivatives)
                  for scale, symbol in parts for term in symbol.terms)
    return SingularSymbol('n', prior, terms)


def _plane_wave(k):
    return lambda X: np.exp(1j * k * X)


def _shifted_derivative_terms(coefficient, weight, axis, shift):
    """coefficient * weight * (shift + d_axis) delta(mu) delta(nu)"""
    origin = {'mu': 0.0, 'nu': 0.0}
    return (SingularTerm(coefficient * shift, weight, origin),
            SingularTerm(coefficient, weight, origin, {axis: 1}))


def position_fourier_symbol(prior, params):
    """
    i pi sqrt(hbar/(m omega)) [2 mu0/xi^2 + d_mu] delta(mu) delta(nu) xi zeta
    exp(mu0^2/xi^2 + nu0^2/zeta^2 + i sqrt(m omega/hbar) X)
    """
    mw = params.mass * params.omega
    k = math.sqrt(mw / params.hbar)
    coefficient = 1j / k * compensation(prior, 0, 0)
    terms = _shifted_derivative_terms(coefficient, _plane_wave(k), 'mu', 2 * prior.mu0 / prior.xi ** 2)
    return SingularSymbol('q', prior, terms)


def momentum_fourier_symbol(prior, params):
    mw = params.mass * params.omega
    k = 1 / math.sqrt(params.hbar * mw)
    coefficient = 1j / k * compensation(prior, 0, 0)
    terms = _shifted_derivative_terms(coefficient, _plane_wave(k), 'nu', 2 * prior.nu0 / prior.zeta ** 2)
    return SingularSymbol('p', prior, terms)


def product_fourier_symbol(prior, params):
    """
    -pi hbar xi zeta [2 mu0/xi^2 + d_mu][2 nu0/zeta^2 + d_nu] delta(mu) delta(nu)
    exp(mu0^2/xi^2 + nu0^2/zeta^2 + i X / sqrt(hbar)), plus the i hbar / 2 of qp
    """
    hbar = params.hbar
    base = compensation(prior, 0, 0)
    wave = _plane_wave(1 / math.sqrt(hbar))
    a = 2 * prior.mu0 / prior.xi ** 2
    b = 2 * prior.nu0 / prior.zeta ** 2
    origin = {'mu': 0.0, 'nu': 0.0}
    c = -hbar * base
    terms = (
        SingularTerm(c * a * b, wave, origin),
        SingularTerm(c * a, wave, origin, {'nu': 1}),
        SingularTerm(c * b, wave, origin, {'mu': 1}),
        SingularTerm(c, wave, origin, {'mu': 1, 'nu': 1}),
        SingularTerm(0.5j * hbar * base, _unit, origin),
    )
    return SingularSymbol('qp', prior, terms)


def singular_symbol(name, prior, params, n=None):
    """
    Singular symbol by name: one, q, p, q2, p2, qn, pn (with n), qp, n,
    q_fourier, p_fourier or qp_fourier
    """
    _check_prior(prior)
    if name == 'one':
        return identity_symbol(prior)
    if name in ('q', 'p', 'q2', 'p2', 'qn', 'pn'):
        if name in ('qn', 'pn'):
            if n is None or int(n) != n or n < 1:
                raise SymbolError('{} needs a positive integer power, got {}'.format(name, n))
            power = int(n)
        else:
            power = 2 if name.endswith('2') else 1
        if name.startswith('q'):
            return position_power_symbol(prior, power)
        return momentum_power_symbol(prior, power)
    if name == 'qp':
        return product_symbol(prior, params)
    if name == 'n':
        return number_symbol(prior, params)
    if name == 'q_fourier':
        return position_fourier_symbol(prior, params)
    if name == 'p_fourier':
        return momentum_fourier_symbol(prior, params)
    if name == 'qp_fourier':
        return product_fourier_symbol(prior, params)
    raise SymbolError("No singular symbol for '{}' (choose from {})".format(name, ', '.join(SINGULAR_NAMES)))
