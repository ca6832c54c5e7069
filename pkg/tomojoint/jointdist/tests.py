import math

import numpy as np
from scipy.integrate import quad

from tomojoint.tests.utils import AxisFactory, GaussianPriorFactory, OscillatorParamsFactory, TomojointTestCase
from tomojoint.gridcalc.calculus import derivative
from tomojoint.jointdist.errors import PriorError, PriorUnderflow
from tomojoint.jointdist.joint import JointDistribution, make_joint, recover_conditional
from tomojoint.jointdist.priors import (
    GaussianPrior,
    GaussianSumPrior,
    PriorComponent,
    default_optical_prior,
    default_symplectic_prior,
    prior_eval,
    prior_log_derivative,
    prior_moment_contract,
    prior_moment_integral,
)
from tomojoint.jointdist.utils import parse_prior, prior_from_dict
from tomojoint.states.models import Coherent, Fock
from tomojoint.tomography.analytic import state_tomogram
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC


def mu_axis(**kwargs):
    kwargs.setdefault('min', -4.0)
    kwargs.setdefault('max', 4.0)
    kwargs.setdefault('count', 81)
    return AxisFactory(name='mu', **kwargs)


def nu_axis(**kwargs):
    kwargs.setdefault('min', -4.0)
    kwargs.setdefault('max', 4.0)
    kwargs.setdefault('count', 81)
    return AxisFactory(name='nu', **kwargs)


def theta_axis():
    return AxisFactory(name='theta', min=0.0, max=math.pi, count=181)


class GaussianPriorTest(TomojointTestCase):

    def test_value_at_centre(self):
        grid = prior_eval(default_symplectic_prior(), (mu_axis(), nu_axis()))
        self.assertAlmostEqual(grid.values[40, 40], 1 / math.pi)

    def test_rejects_bad_widths(self):
        with self.assertRaises(PriorError):
            GaussianPrior(xi=0)
        with self.assertRaises(PriorError):
            GaussianPrior(zeta=-1)

    def test_log_derivative_closed_form(self):
        score = prior_log_derivative(default_symplectic_prior(), 'mu', (mu_axis(), nu_axis()))
        self.assertAlmostEqual(score.values[50, 3], -2.0)

    def test_log_derivative_matches_finite_differences(self):
        prior = GaussianPriorFactory(mu0=0.5, xi=1.5)
        axes = (mu_axis(min=-3, max=3, count=241), nu_axis(min=-3, max=3, count=241))
        P = prior_eval(prior, axes)
        numeric = derivative(P, 'mu', accuracy=8).values / P.values
        closed = prior_log_derivative(prior, 'mu', axes).values
        interior = (slice(24, -24), slice(24, -24))
        self.assertArrayAlmostEqual(numeric[interior], closed[interior], 1e-6)

    def test_curvature(self):
        prior = GaussianPriorFactory(nu0=-0.5, zeta=0.75)
        nu = np.linspace(-2, 2, 9)
        expected = prior.derivative('nu', 2, mu=0.0, nu=nu) / prior.evaluate(mu=0.0, nu=nu)
        self.assertArrayAlmostEqual(prior.curvature('nu', mu=0.0, nu=nu), expected, 1e-10)

    def test_underflow(self):
        prior = GaussianPriorFactory(xi=0.05)
        with self.assertRaises(PriorUnderflow) as context:
            prior_log_derivative(prior, 'mu', (mu_axis(), nu_axis()))
        self.assertEqual(context.exception.message, 'prior underflow on grid')

    def test_unknown_variable(self):
        with self.assertRaises(PriorError):
            default_symplectic_prior().derivative('theta', 1, mu=0.0, nu=0.0)


class GaussianSumPriorTest(TomojointTestCase):

    def test_weights_must_sum_to_one(self):
        GaussianSumPrior(((0.7, 1.0, 0.5), (0.3, 2.0, 0.5)))
        with self.assertRaises(PriorError):
            GaussianSumPrior(((0.7, 1.0, 0.5), (0.4, 2.0, 0.5)))
        with self.assertRaises(PriorError):
            GaussianSumPrior(((1.2, 1.0, 0.5), (-0.2, 2.0, 0.5)))

    def test_component_validation(self):
        with self.assertRaises(PriorError):
            PriorComponent(1.0, 4.0, 0.5)
        with self.assertRaises(PriorError):
            PriorComponent(1.0, 1.0, 0.0)

    def test_normalized_and_positive(self):
        prior = default_optical_prior()
        total, _ = quad(lambda theta: float(prior.evaluate(theta=theta)), 0, math.pi, epsabs=1e-12)
        self.assertClose(total, 1.0, 1e-8)
        self.assertGreater(prior_eval(prior, (theta_axis(),)).values.min(), 0.0)

    def test_wide_component_is_nearly_uniform(self):
        prior = GaussianSumPrior(((1.0, math.pi / 2, 10.0),))
        self.assertArrayAlmostEqual(prior_eval(prior, (theta_axis(),)), 1 / math.pi, 2e-2)

    def test_single_component_log_derivative(self):
        prior = GaussianSumPrior(((1.0, 1.2, 0.8),))
        theta = theta_axis().points
        expected = -2 * (theta - 1.2) / 0.8 ** 2
        self.assertArrayAlmostEqual(prior_log_derivative(prior, 'theta', (theta_axis(),)), expected, 1e-12)

    def test_theta_outside_range(self):
        with self.assertRaises(PriorError):
            default_optical_prior().evaluate(theta=np.array([-0.5, 1.0]))


class PriorMomentTest(TomojointTestCase):

    priors = [
        GaussianPrior(0, 0, 1, 1),
        GaussianPrior(0.5, -1.0, 0.5, 2.0),
        GaussianPrior(-1.0, 1.0, 2.0, 0.75),
        GaussianPrior(1.0, 0.25, 1.5, 0.5),
    ]

    def test_known_values(self):
        prior = default_symplectic_prior()
        self.assertClose(prior_moment_integral(prior, 1, 0), -1.0, 1e-6)
        self.assertClose(prior_moment_integral(prior, 2, 1), -2.0, 1e-6)
        self.assertClose(prior_moment_integral(prior, 1, 0, powers=(0, 0)), 0.0, 1e-8)

    def test_matching_orders(self):
        for prior in self.priors:
            for k in range(4):
                for l in range(4):
                    self.assertClose(prior_moment_integral(prior, k, l), prior_moment_contract(k, l), 1e-6,
                                     msg='{} ({}, {})'.format(prior, k, l))

    def test_derivative_above_power(self):
        for prior in self.priors:
            for k, l, powers in ((1, 0, (0, 0)), (2, 0, (1, 2)), (3, 1, (2, 1)), (0, 2, (3, 1))):
                self.assertEqual(prior_moment_contract(k, l, powers), 0.0)
                self.assertLessEqual(abs(prior_moment_integral(prior, k, l, powers)), 1e-8)

    def test_order_cap(self):
        with self.assertRaises(PriorError):
            prior_moment_integral(default_symplectic_prior(), 5, 0)


class JointTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()
        self.X = AxisFactory(name='X')

    def ground_tomogram(self):
        return state_tomogram(Fock(0), SYMPLECTIC, self.params, self.X, (mu_axis(), nu_axis()))

    def test_ground_state_joint(self):
        joint = make_joint(self.ground_tomogram(), default_symplectic_prior())
        self.assertClose(joint.total(), 1.0, 1e-3)
        self.assertClose(joint.value(0.0, 1.0, 0.0), math.exp(-1) / math.pi ** 1.5, 1e-10)

    def test_bayes_round_trip(self):
        tomogram = state_tomogram(Coherent(1 / math.sqrt(2)), SYMPLECTIC, self.params, self.X,
                                  (mu_axis(), nu_axis()))
        joint = make_joint(tomogram, GaussianPriorFactory(mu0=0.5, xi=1.5))
        recovered = recover_conditional(joint)
        self.assertArrayAlmostEqual(recovered.grid, tomogram.grid, 1e-10)
        self.assertEqual(recovered.representation, SYMPLECTIC)

    def test_optical_joint(self):
        tomogram = state_tomogram(Fock(1), OPTICAL, self.params, self.X, (theta_axis(),))
        joint = make_joint(tomogram, default_optical_prior())
        self.assertClose(joint.total(), 1.0, 1e-3)
        self.assertArrayAlmostEqual(recover_conditional(joint).slice_norms(), 1.0, 1e-3)

    def test_representation_mismatch(self):
        with self.assertRaises(PriorError):
            make_joint(self.ground_tomogram(), default_optical_prior())

    def test_mass_outside_grid(self):
        with self.assertRaises(PriorError):
            make_joint(self.ground_tomogram(), GaussianPriorFactory(mu0=4.0, xi=0.5))

    def test_prior_invariance_of_mass(self):
        tomogram = self.ground_tomogram()
        priors = (GaussianPrior(0, 0, 1, 1), GaussianPrior(0.5, -0.5, 0.75, 1.0), GaussianPrior(-0.5, 0.25, 1.0, 0.6))
        for prior in priors:
            self.assertClose(make_joint(tomogram, prior).total(), 1.0, 1e-3, msg=str(prior))

    def test_recover_underflow(self):
        joint = make_joint(self.ground_tomogram(), default_symplectic_prior())
        broken = JointDistribution(SYMPLECTIC, joint.grid, GaussianPriorFactory(xi=0.05), self.params)
        with self.assertRaises(PriorUnderflow):
            recover_conditional(broken)


class ParsePriorTest(TomojointTestCase):

    def test_formats(self):
        self.assertEqual(parse_prior('p1:mu0=0.5,nu0=0,xi=1,zeta=2'), GaussianPrior(0.5, 0, 1, 2))
        self.assertEqual(parse_prior('p1:xi=2'), GaussianPrior(0, 0, 2, 1))
        self.assertEqual(parse_prior('p1-default'), default_symplectic_prior())
        self.assertEqual(parse_prior('p2-default'), default_optical_prior())
        prior = parse_prior('p2:[{"q": 0.7, "f": 1.0, "phi": 0.5}, {"q": 0.3, "f": 2.0, "phi": 0.8}]')
        self.assertEqual(len(prior.components), 2)

    def test_round_trips(self):
        for prior in (default_optical_prior(), GaussianPrior(0.5, -1, 0.5, 2)):
            self.assertEqual(parse_prior(str(prior)), prior)
            self.assertEqual(prior_from_dict(prior.to_dict()), prior)

    def test_errors(self):
        for text in ('', 'p3:x=1', 'p1:xi=a', 'p1:rho=1', 'p2:[{"q": 1}]', 'p2:not-json'):
            with self.assertRaises(PriorError):
                parse_prior(text)
