"""
Regular dual symbols

Symplectic symbols undo a Gaussian prior through its derivatives; the
general form for the Weyl-symmetrized moment of q^k p^l is

    (-1)^(k+l) X^(k+l) / (k+l)! (d^k_mu d^l_nu P) / P.

Optical symbols hold for any prior on theta, because the prior is divided
out explicitly.
"""
import math

import numpy as np

from tomojoint import settings
from tomojoint.jointdist.priors import GaussianPrior, Prior
from tomojoint.symbols.errors import SymbolError
from tomojoint.symbols.models import RegularSymbol
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC

REGULAR_NAMES = ('one', 'q', 'p', 'q2', 'p2', 'qp', 'pq', 'n')


def _check_name(name):
    if name not in REGULAR_NAMES:
        raise SymbolError("No regular symbol for '{}' (choose from {})".format(name, ', '.join(REGULAR_NAMES)))


def _gaussian(prior):
    if not isinstance(prior, GaussianPrior):
        raise SymbolError('Symplectic symbols need a Gaussian prior, got {}'.format(prior))
    return prior


def symplectic_regular_symbol(name, prior, params):
    _check_name(name)
    prior = _gaussian(prior)
    mu0, nu0, xi, zeta = prior.mu0, prior.nu0, prior.xi, prior.zeta
    mw = params.mass * params.omega
    hbar = params.hbar

    def q2_bracket(mu):
        return (2 * (mu - mu0) ** 2 - xi ** 2) / xi ** 4

    def p2_bracket(nu):
        return (2 * (nu - nu0) ** 2 - zeta ** 2) / zeta ** 4

    def product(X, mu, nu):
        return 2 * X ** 2 * (mu - mu0) * (nu - nu0) / (xi ** 2 * zeta ** 2)

    forms = {
        'one': lambda X, mu, nu: np.ones(np.broadcast(X, mu, nu).shape),
        'q': lambda X, mu, nu: 2 * (mu - mu0) * X / xi ** 2 + 0 * nu,
        'p': lambda X, mu, nu: 2 * (nu - nu0) * X / zeta ** 2 + 0 * mu,
        'q2': lambda X, mu, nu: X ** 2 * q2_bracket(mu) + 0 * nu,
        'p2': lambda X, mu, nu: X ** 2 * p2_bracket(nu) + 0 * mu,
        'qp': lambda X, mu, nu: product(X, mu, nu) + 0.5j * hbar,
        'pq': lambda X, mu, nu: product(X, mu, nu) - 0.5j * hbar,
        'n': lambda X, mu, nu: X ** 2 * (mw / (2 * hbar)) * (q2_bracket(mu) + p2_bracket(nu) / mw ** 2) - 0.5,
    }
    return RegularSymbol(name, SYMPLECTIC, prior, forms[name])


def optical_regular_symbol(name, prior, params):
    """Optical symbols, divided by pi P(theta)"""
    _check_name(name)
    if not isinstance(prior, Prior) or prior.representation != OPTICAL:
        raise SymbolError('Optical symbols need a prior on theta, got {}'.format(prior))
    mw = params.mass * params.omega
    hbar = params.hbar
    forms = {
        'one': lambda X, theta: np.ones_like(X) + 0 * theta,
        'q': lambda X, theta: 2 * X * np.cos(theta),
        'p': lambda X, theta: 2 * mw * X * np.sin(theta),
        'q2': lambda X, theta: X ** 2 * (1 + 2 * np.cos(2 * theta)),
        'p2': lambda X, theta: X ** 2 * mw ** 2 * (1 - 2 * np.cos(2 * theta)),
        'qp': lambda X, theta: 2 * mw * X ** 2 * np.sin(2 * theta),
        'pq': lambda X, theta: 2 * mw * X ** 2 * np.sin(2 * theta),
        'n': lambda X, theta: mw * X ** 2 / hbar - 0.5 + 0 * theta,
    }
    numerator = forms[name]

    def func(X, theta):
        return numerator(X, theta) / (math.pi * prior.guarded(theta=theta))

    symbol = RegularSymbol(name, OPTICAL, prior, func)
    if name == 'qp':
        return symbol.shifted(0.5j * hbar)
    if name == 'pq':
        return symbol.shifted(-0.5j * hbar)
    return symbol


def regular_symbol(name, representation, prior, params):
    """The closed-form regular symbol of `name` in a symplectic or optical joint"""
    if representation == SYMPLECTIC:
        return symplectic_regular_symbol(name, prior, params)
    if representation == OPTICAL:
        return optical_regular_symbol(name, prior, params)
    raise SymbolError("No regular symbols for representation '{}'".format(representation))


def monomial_regular_symbol(k, l, prior):
    """
    Symbol of the Weyl-symmetrized moment of q^k p^l. Operator-ordered
    products differ from it by commutator terms: <qp> is this (1, 1)
    symbol plus i hbar / 2.
    """
    if int(k) != k or int(l) != l or k < 0 or l < 0:
        raise SymbolError('Monomial orders must be non-negative integers, got ({}, {})'.format(k, l))
    k, l = int(k), int(l)
    if k + l > settings.MAX_MONOMIAL_ORDER:
        raise SymbolError('Monomial order {} exceeds {}'.format(k + l, settings.MAX_MONOMIAL_ORDER))
    prior = _gaussian(prior)
    order = k + l
    scale = (-1) ** order / math.factorial(order)

    def func(X, mu, nu):
        return scale * X ** order * prior.mixed_derivative(k, l, mu, nu) / prior.guarded(mu=mu, nu=nu)

    return RegularSymbol('q^{} p^{}'.format(k, l), SYMPLECTIC, prior, func)


def alternative_regular_symbols_q2_p2(prior):
    """
    Second regular forms of q^2 and p^2. They differ from the primary
    symbols pointwise but give the same averages.
    """
    prior = _gaussian(prior)
    mu0, nu0, xi, zeta = prior.mu0, prior.nu0, prior.xi, prior.zeta

    def recentre(mu, nu):
        return np.exp(-mu0 * (2 * mu - mu0) / xi ** 2 - nu0 * (2 * nu - nu0) / zeta ** 2)

    def q2(X, mu, nu):
        return X ** 2 / (2 * xi ** 2) * (3 * mu ** 2 / xi ** 2 - nu ** 2 / zeta ** 2) * recentre(mu, nu)

    def p2(X, mu, nu):
        return X ** 2 / (2 * zeta ** 2) * (3 * nu ** 2 / zeta ** 2 - mu ** 2 / xi ** 2) * recentre(mu, nu)

    return RegularSymbol('q2', SYMPLECTIC, prior, q2), RegularSymbol('p2', SYMPLECTIC, prior, p2)
