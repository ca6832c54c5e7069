"""
Correspondence rules: operators acting on a distribution the way position,
momentum and the ladder operators act on the density matrix.

Every joint rule can be built two ways. The printed form writes the prior's
score in closed form; the derived form conjugates the tomographic rule with
the prior (see conjugation.py). Both must agree as applied operators.
"""
import math

import numpy as np

from tomojoint.jointdist.priors import GaussianPrior, GaussianSumPrior
from tomojoint.opalg.conjugation import conjugate_by_prior, score_label
from tomojoint.opalg.errors import OperatorError
from tomojoint.opalg.expr import (
    Coordinate,
    Derivative,
    Function,
    Identity,
    InverseDerivative,
    Scalar,
    polynomial_of_operator,
)
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC

COS = Function('cos theta', ('theta',), lambda theta: np.cos(theta))
SIN = Function('sin theta', ('theta',), lambda theta: np.sin(theta))

OPERATOR_NAMES = ('one', 'q', 'p', 'a', 'adag', 'n', 'q2', 'p2', 'qp')


def gaussian_score(prior, variable):
    """2 (x - x0) / w^2 for the shifted Gaussian prior"""
    center = prior.center[variable]
    width = prior.width[variable]
    return Function(score_label(prior, variable), prior.variables,
                    lambda **coordinates: 2 * (coordinates[variable] - center) / width ** 2)


def gaussian_sum_score(prior):
    """2 P^-1 sum_k Q_k (theta - f_k) / phi_k^2 P_k(theta)"""
    def score(theta):
        total = sum(c.weight * c.derivative(theta, 0) for c in prior.components)
        weighted = sum(c.weight * (theta - c.center) / c.width ** 2 * c.derivative(theta, 0)
                       for c in prior.components)
        return 2 * weighted / total
    return Function(score_label(prior, 'theta'), prior.variables, score)


def printed_score(prior):
    """The closed-form score used by the printed joint rules; None for a constant prior"""
    if prior is None or prior.is_constant:
        return None
    if isinstance(prior, GaussianPrior):
        return lambda variable: gaussian_score(prior, variable)
    if isinstance(prior, GaussianSumPrior):
        return lambda variable: gaussian_sum_score(prior)
    raise OperatorError('No printed correspondence rules for {}'.format(type(prior).__name__))


def _shifted(variable, score):
    if score is None:
        return Derivative(variable)
    return score(variable) + Derivative(variable)


def _position(rep, score):
    hbar = rep.params.hbar
    if rep.family == SYMPLECTIC:
        return (-(_shifted('mu', score) * InverseDerivative('X'))
                + Scalar(0.5j * hbar) * Coordinate('nu') * Derivative('X'))
    if rep.family == OPTICAL:
        mw = rep.params.mass * rep.params.omega
        return (SIN * InverseDerivative('X') * _shifted('theta', score) + Coordinate('X') * COS
                + Scalar(0.5j * hbar / mw) * SIN * Derivative('X'))
    return Coordinate('q') + Scalar(0.5j * hbar) * Derivative('p')


def _momentum(rep, score):
    hbar = rep.params.hbar
    if rep.family == SYMPLECTIC:
        return (-(_shifted('nu', score) * InverseDerivative('X'))
                - Scalar(0.5j * hbar) * Coordinate('mu') * Derivative('X'))
    if rep.family == OPTICAL:
        mw = rep.params.mass * rep.params.omega
        return (Scalar(mw) * (-(COS * InverseDerivative('X') * _shifted('theta', score)) + Coordinate('X') * SIN)
                - Scalar(0.5j * hbar) * COS * Derivative('X'))
    return Coordinate('p') - Scalar(0.5j * hbar) * Derivative('q')


def _build(rule, rep, derived):
    if rep.is_joint and derived:
        return conjugate_by_prior(rule(rep.tomographic(), None), rep.prior)
    return rule(rep, printed_score(rep.prior))


def position_operator(rep, derived=False):
    """[q] in the given representation"""
    return _build(_position, rep, derived)


def momentum_operator(rep, derived=False):
    """
    [p] in the given representation. The joint symplectic rule carries
    -(i hbar mu / 2) d_X, the sign the tomographic rule and the ladder
    operators require.
    """
    return _build(_momentum, rep, derived)


def _ladder(rep, score, sign):
    params = rep.params
    mw = params.mass * params.omega
    alpha = math.sqrt(mw / (2 * params.hbar))
    bracket = Derivative('mu') + Scalar(sign * 1j / mw) * Derivative('nu')
    if score is not None:
        bracket = bracket + score('mu') + Scalar(sign * 1j / mw) * score('nu')
    multiplier = Scalar(sign / mw) * Coordinate('mu') + Scalar(1j) * Coordinate('nu')
    return Scalar(alpha) * (Scalar(params.hbar / 2) * Derivative('X') * multiplier - InverseDerivative('X') * bracket)


def ladder_operators(rep, derived=False):
    """
    ([a], [a^dagger]) in a symplectic representation, as printed, or by
    conjugating the tomographic pair when `derived`.
    """
    if rep.family != SYMPLECTIC:
        raise OperatorError('Ladder operator rules are only given for symplectic representations, not {}'.format(
            rep.kind))
    if rep.is_joint and derived:
        tomographic = rep.tomographic()
        return tuple(conjugate_by_prior(_ladder(tomographic, None, sign), rep.prior) for sign in (1, -1))
    score = printed_score(rep.prior)
    return _ladder(rep, score, 1), _ladder(rep, score, -1)


def ladder_from_quadratures(rep, derived=False):
    """sqrt(m omega / 2 hbar) ([q] +- i [p] / (m omega))"""
    params = rep.params
    mw = params.mass * params.omega
    alpha = Scalar(math.sqrt(mw / (2 * params.hbar)))
    q = position_operator(rep, derived)
    p = momentum_operator(rep, derived)
    return alpha * (q + Scalar(1j / mw) * p), alpha * (q - Scalar(1j / mw) * p)


def number_operator(rep, derived=False):
    if rep.family == SYMPLECTIC:
        a, adag = ladder_operators(rep, derived)
    else:
        a, adag = ladder_from_quadratures(rep, derived)
    return adag * a


def named_operator(name, rep, derived=False):
    """Operator by CLI name: one, q, p, a, adag, n, q2, p2 or qp"""
    if name == 'one':
        return Identity()
    if name in ('q', 'q2', 'qp'):
        q = position_operator(rep, derived)
    if name in ('p', 'p2', 'qp'):
        p = momentum_operator(rep, derived)
    if name == 'q':
        return q
    if name == 'p':
        return p
    if name == 'q2':
        return q * q
    if name == 'p2':
        return p * p
    if name == 'qp':
        return q * p
    if name in ('a', 'adag'):
        if rep.family == SYMPLECTIC:
            a, adag = ladder_operators(rep, derived)
        else:
            a, adag = ladder_from_quadratures(rep, derived)
        return a if name == 'a' else adag
    if name == 'n':
        return number_operator(rep, derived)
    raise OperatorError("Unknown operator '{}' (choose from {})".format(name, ', '.join(OPERATOR_NAMES)))


def potential_operator(rep, coefficients, derived=False):
    """V([q]) for a polynomial potential, constant coefficient first"""
    return polynomial_of_operator(position_operator(rep, derived), coefficients)


def hamiltonian(rep, coefficients, derived=False):
    """[p]^2 / 2m + V([q])"""
    p = momentum_operator(rep, derived)
    return Scalar(1 / (2 * rep.params.mass)) * p * p + potential_operator(rep, coefficients, derived)
