"""
Moving an operator from a tomographic representation to a joint one:
[A]_joint = P [A]_tomogram P^-1.

Multiplications and X-derivatives commute with P. A first derivative in a
parameter picks up the score S = -(dP)/P,

    P d P^-1 = d + S,

and a second derivative becomes

    P d^2 P^-1 = d^2 + 2 S d + 2 S^2 - (d^2 P)/P.
"""
from tomojoint.opalg.errors import OperatorError
from tomojoint.opalg.expr import Derivative, Function, InverseDerivative, Product, Scalar


def score_label(prior, variable):
    return 'score {} | {}'.format(variable, prior)


def curvature_label(prior, variable):
    return 'curvature {} | {}'.format(variable, prior)


def prior_score(prior, variable):
    """Multiplication by -(d P / d variable) / P, from the prior's closed forms"""
    prior.check_variable(variable)
    return Function(score_label(prior, variable), prior.variables,
                    lambda **coordinates: -prior.log_derivative(variable, **coordinates))


def prior_curvature(prior, variable):
    """Multiplication by 2 (P'/P)^2 - P''/P"""
    prior.check_variable(variable)

    def curvature(**coordinates):
        return 2 * prior.log_derivative(variable, **coordinates) ** 2 - prior.curvature(variable, **coordinates)
    return Function(curvature_label(prior, variable), prior.variables, curvature)


def conjugated_derivative(prior, variable, order=1):
    score = prior_score(prior, variable)
    if order == 1:
        return score + Derivative(variable)
    if order == 2:
        return Derivative(variable, 2) + Scalar(2) * score * Derivative(variable) + prior_curvature(prior, variable)
    return Product((score + Derivative(variable),) * order)


def conjugate_by_prior(op, prior):
    """P op P^-1, rewritten leaf by leaf"""
    if getattr(prior, 'is_constant', False):
        return op

    def rule(leaf):
        if isinstance(leaf, Derivative) and leaf.axis in prior.variables:
            return conjugated_derivative(prior, leaf.axis, leaf.order)
        if isinstance(leaf, InverseDerivative) and leaf.axis in prior.variables:
            raise OperatorError('No closed-form conjugation for an inverse derivative in {}'.format(leaf.axis))
        return leaf
    return op.map(rule)
