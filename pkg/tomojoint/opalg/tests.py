import math

import numpy as np
from hypothesis import given, settings as hypothesis_settings, strategies as st

from tomojoint.tests.utils import (
    AxisFactory,
    CoherentFactory,
    GaussianPriorFactory,
    OscillatorParamsFactory,
    PriorComponentFactory,
    TomojointTestCase,
)
from tomojoint.gridcalc.calculus import integrate
from tomojoint.gridcalc.grid import GridFn
from tomojoint.jointdist.priors import GaussianSumPrior, UniformPrior, default_optical_prior
from tomojoint.opalg.conjugation import conjugate_by_prior, conjugated_derivative, prior_score
from tomojoint.opalg.errors import OperatorError
from tomojoint.opalg.expr import (
    Coordinate,
    Derivative,
    Function,
    Identity,
    InverseDerivative,
    Scalar,
    commutator,
    polynomial_of_operator,
)
from tomojoint.opalg.models import Representation
from tomojoint.opalg.rules import (
    hamiltonian,
    ladder_from_quadratures,
    ladder_operators,
    momentum_operator,
    named_operator,
    position_operator,
    potential_operator,
)
from tomojoint.states.wigner import wigner_analytic
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC

coefficients = st.floats(min_value=-2, max_value=2, allow_nan=False)


def symplectic_axes(X_count=61, count=31, span=3.0):
    return (AxisFactory(min=-6.0, max=6.0, count=X_count),
            AxisFactory(name='mu', min=-span, max=span, count=count),
            AxisFactory(name='nu', min=-span, max=span, count=count))


def optical_axes():
    return (AxisFactory(min=-6.0, max=6.0, count=61), AxisFactory(name='theta', min=0.0, max=math.pi, count=181))


def symplectic_gaussian(axes, X0=0.0, s=1.0, mu0=0.2, nu0=-0.3, b=1.0, c=1.2):
    return GridFn.from_function(
        axes, lambda X, mu, nu: np.exp(-(X - X0) ** 2 / s ** 2 - (mu - mu0) ** 2 / b ** 2 - (nu - nu0) ** 2 / c ** 2))


def optical_test_function(axes):
    return GridFn.from_function(axes, lambda X, theta: np.exp(-X ** 2) * (1 + 0.3 * np.cos(2 * theta)))


def relative_error(first, second):
    return float(np.max(np.abs(first.values - second.values)) / np.max(np.abs(second.values)))


class ExpressionTest(TomojointTestCase):

    def setUp(self):
        self.f = symplectic_gaussian(symplectic_axes())

    def test_identity(self):
        self.assertArrayAlmostEqual(Identity().apply(self.f), self.f, 0.0)

    def test_imaginary_scalar(self):
        result = Scalar(1j).apply(self.f)
        self.assertEqual(float(np.max(np.abs(result.values.real))), 0.0)
        self.assertArrayAlmostEqual(result.values.imag, self.f.values, 1e-15)

    def test_composition_order(self):
        # X d_X acting on X gives X, d_X X gives 1 + X d_X
        f = GridFn.from_function((AxisFactory(),), lambda X: np.exp(-X ** 2))
        first = (Coordinate('X') * Derivative('X')).apply(f)
        second = (Derivative('X') * Coordinate('X')).apply(f)
        self.assertArrayAlmostEqual(second - first, f.to_complex(), 1e-4)

    def test_derivative_undoes_inverse(self):
        X = AxisFactory(min=-6.0, max=6.0, count=241)
        f = GridFn.from_function((X,), lambda X: np.exp(-X ** 2))
        result = (Derivative('X') * InverseDerivative('X')).apply(f, accuracy=8)
        self.assertArrayAlmostEqual(result.values[8:-8], f.values[8:-8], 1e-6)

    def test_missing_axis(self):
        with self.assertRaises(OperatorError):
            Derivative('theta').apply(self.f)

    def test_structural_equality(self):
        self.assertEqual(Coordinate('X') + Derivative('mu'), Derivative('mu') + Coordinate('X'))
        self.assertNotEqual(Coordinate('X') * Derivative('mu'), Derivative('mu') * Coordinate('X'))
        self.assertEqual(hash(Scalar(2) * Derivative('nu')), hash(Scalar(2.0) * Derivative('nu')))

    @hypothesis_settings(max_examples=25, deadline=None)
    @given(coefficients, coefficients)
    def test_linearity(self, a, b):
        axes = symplectic_axes()
        g = GridFn.from_function(axes, lambda X, mu, nu: np.exp(-X ** 2 - mu ** 2) * np.cos(nu))
        rep = Representation.joint(SYMPLECTIC, OscillatorParamsFactory(), GaussianPriorFactory())
        q = position_operator(rep)
        combined = q.apply(self.f * a + g * b)
        separate = q.apply(self.f) * a + q.apply(g) * b
        self.assertArrayAlmostEqual(combined, separate, 1e-12)

    def test_rejects_bad_orders(self):
        with self.assertRaises(OperatorError):
            Derivative('X', 0)
        with self.assertRaises(OperatorError):
            InverseDerivative('X', 1.5)
        with self.assertRaises(OperatorError):
            Derivative('X') ** -1


class PolynomialTest(TomojointTestCase):

    def setUp(self):
        self.f = symplectic_gaussian(symplectic_axes())
        self.op = Coordinate('mu') + Derivative('nu')

    def test_degree_zero(self):
        self.assertArrayAlmostEqual(polynomial_of_operator(self.op, [3.0]).apply(self.f), self.f * 3, 1e-15)

    def test_square(self):
        square = polynomial_of_operator(self.op, [0.0, 0.0, 1.0]).apply(self.f)
        self.assertArrayAlmostEqual(square, self.op.apply(self.op.apply(self.f)), 1e-12)

    def test_general(self):
        result = polynomial_of_operator(self.op, [1.0, -2.0, 0.5]).apply(self.f)
        once = self.op.apply(self.f)
        expected = self.f.to_complex() - once * 2 + self.op.apply(once) * 0.5
        self.assertArrayAlmostEqual(result, expected, 1e-12)

    def test_degree_cap(self):
        polynomial_of_operator(self.op, [1.0] + [0.0] * 10)
        with self.assertRaises(OperatorError):
            polynomial_of_operator(self.op, [1.0] * 8)
        with self.assertRaises(OperatorError):
            polynomial_of_operator(self.op, [])


class RepresentationTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()

    def test_joint_needs_matching_prior(self):
        with self.assertRaises(OperatorError):
            Representation(Representation.SYMPLECTIC_JOINT, self.params)
        with self.assertRaises(OperatorError):
            Representation.joint(OPTICAL, self.params, GaussianPriorFactory())
        with self.assertRaises(OperatorError):
            Representation(Representation.WIGNER, self.params, GaussianPriorFactory())
        with self.assertRaises(OperatorError):
            Representation('husimi', self.params)

    def test_tomographic_and_uniform(self):
        rep = Representation.joint(OPTICAL, self.params, default_optical_prior())
        self.assertEqual(rep.tomographic().kind, Representation.OPTICAL_TOMOGRAM)
        self.assertEqual(rep.uniform().prior, UniformPrior(OPTICAL))
        self.assertEqual(rep.parameter_variables, ('theta',))


class ConjugationTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()

    def test_uniform_prior_changes_nothing(self):
        rep = Representation(Representation.SYMPLECTIC_TOMOGRAM, self.params)
        q = position_operator(rep)
        self.assertIs(conjugate_by_prior(q, UniformPrior(SYMPLECTIC)), q)
        uniform = rep.uniform()
        self.assertEqual(position_operator(uniform), q)
        self.assertEqual(momentum_operator(uniform, derived=True), momentum_operator(rep))

    def test_score_is_minus_log_derivative(self):
        prior = GaussianPriorFactory(mu0=0.5, xi=1.5)
        f = GridFn.from_function(symplectic_axes()[1:], lambda mu, nu: np.ones(np.broadcast(mu, nu).shape))
        score = prior_score(prior, 'mu').apply(f)
        expected = 2 * (f.coordinates('mu') - 0.5) / 1.5 ** 2 * np.ones(f.shape)
        self.assertArrayAlmostEqual(score, expected, 1e-12)

    def test_inverse_derivative_in_a_parameter(self):
        with self.assertRaises(OperatorError):
            conjugate_by_prior(InverseDerivative('mu'), GaussianPriorFactory())

    def test_second_derivative_single_peak(self):
        component = PriorComponentFactory(center=1.2, width=0.6)
        prior = GaussianSumPrior((component,))
        f, phi = component.center, component.width
        u = Function('u', ('theta',), lambda theta: theta - f)
        expected_op = (Derivative('theta', 2) + Scalar(4 / phi ** 2) * u * Derivative('theta')
                       + Scalar(4 / phi ** 4) * u * u + Scalar(2 / phi ** 2))
        g = optical_test_function(optical_axes())
        result = conjugated_derivative(prior, 'theta', 2).apply(g)
        expected = expected_op.apply(g)
        self.assertLess(relative_error(result, expected), 1e-8)

    def test_higher_orders_compose(self):
        prior = GaussianPriorFactory(nu0=0.4)
        first = conjugated_derivative(prior, 'nu')
        f = symplectic_gaussian(symplectic_axes())
        self.assertArrayAlmostEqual(conjugated_derivative(prior, 'nu', 3).apply(f),
                                    first.apply(first.apply(first.apply(f))), 1e-12)


class CorrespondenceRuleTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()
        self.symplectic = Representation.joint(
            SYMPLECTIC, self.params, GaussianPriorFactory(mu0=0.3, nu0=-0.2, xi=1.2, zeta=0.9))
        self.optical = Representation.joint(OPTICAL, self.params, default_optical_prior())
        self.f = symplectic_gaussian(symplectic_axes())
        self.g = optical_test_function(optical_axes())

    def test_printed_and_derived_agree_structurally(self):
        for rep in (self.symplectic, self.optical):
            self.assertEqual(position_operator(rep), position_operator(rep, derived=True))
            self.assertEqual(momentum_operator(rep), momentum_operator(rep, derived=True))

    def test_printed_and_derived_agree_applied(self):
        for build in (position_operator, momentum_operator):
            self.assertLess(relative_error(build(self.symplectic).apply(self.f),
                                           build(self.symplectic, derived=True).apply(self.f)), 1e-10)
            self.assertLess(relative_error(build(self.optical).apply(self.g),
                                           build(self.optical, derived=True).apply(self.g)), 1e-10)
        printed = ladder_operators(self.symplectic)
        derived = ladder_operators(self.symplectic, derived=True)
        for first, second in zip(printed, derived):
            self.assertLess(relative_error(first.apply(self.f), second.apply(self.f)), 1e-10)

    def test_ladder_matches_quadratures(self):
        for derived in (False, True):
            printed = ladder_operators(self.symplectic, derived)
            combined = ladder_from_quadratures(self.symplectic, derived)
            for first, second in zip(printed, combined):
                self.assertLess(relative_error(first.apply(self.f), second.apply(self.f)), 1e-10)

    def test_ladder_rules_are_symplectic(self):
        with self.assertRaises(OperatorError):
            ladder_operators(self.optical)
        a, adag = ladder_from_quadratures(self.optical)
        self.assertEqual(a.apply(self.g).shape, self.g.shape)

    def test_commutator_of_ladder_operators(self):
        axes = symplectic_axes(X_count=241, count=61)
        a, adag = ladder_operators(Representation.joint(SYMPLECTIC, self.params, GaussianPriorFactory()))
        bracket = commutator(a, adag)
        interior = (slice(40, -40), slice(10, -10), slice(10, -10))
        rng = np.random.RandomState(0)
        for _ in range(20):
            X0, mu0, nu0 = rng.uniform(-0.5, 0.5, size=3)
            s = rng.uniform(1.0, 1.2)
            b, c = rng.uniform(0.8, 1.5, size=2)
            f = symplectic_gaussian(axes, X0, s, mu0, nu0, b, c)
            result = bracket.apply(f, accuracy=8)
            self.assertArrayAlmostEqual(result.values[interior], f.values[interior], 1e-6)

    def test_named_operators(self):
        q = named_operator('q', self.symplectic)
        self.assertEqual(named_operator('q2', self.symplectic), q * q)
        self.assertEqual(named_operator('one', self.symplectic), Identity())
        a, adag = ladder_operators(self.symplectic)
        self.assertEqual(named_operator('n', self.symplectic), adag * a)
        with self.assertRaises(OperatorError):
            named_operator('x', self.symplectic)

    def test_hamiltonian(self):
        H = hamiltonian(self.symplectic, [0.0, 0.0, 0.5])
        p = momentum_operator(self.symplectic)
        q = position_operator(self.symplectic)
        expected = (p * p).apply(self.f) * 0.5 + (q * q).apply(self.f) * 0.5
        self.assertLess(relative_error(H.apply(self.f), expected), 1e-12)
        with self.assertRaises(OperatorError):
            potential_operator(self.symplectic, [1.0] * 8)


class WignerRuleTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()
        self.state = CoherentFactory(alpha=0.8 + 0.5j)
        axis = AxisFactory(min=-7.0, max=7.0, count=141)
        self.W = wigner_analytic(self.state, self.params, axis, axis).grid
        self.rep = Representation(Representation.WIGNER, self.params)

    def test_position_and_momentum(self):
        for name in ('q', 'p'):
            value = integrate(named_operator(name, self.rep).apply(self.W))
            self.assertClose(value, self.state.expectation(name, self.params), 1e-8)

    def test_operator_product(self):
        value = integrate(named_operator('qp', self.rep).apply(self.W))
        self.assertClose(value, self.state.expectation('qp', self.params), 1e-4)
