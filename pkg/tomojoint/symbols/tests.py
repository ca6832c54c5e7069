import itertools
import math

import numpy as np

from tomojoint.tests.utils import (
    AxisFactory,
    CoherentFactory,
    FockFactory,
    GaussianPriorFactory,
    OscillatorParamsFactory,
    SqueezedGaussianFactory,
    TomojointTestCase,
    state_joint,
)
from tomojoint.jointdist.joint import JointDistribution
from tomojoint.jointdist.priors import default_optical_prior, default_symplectic_prior
from tomojoint.opalg.expr import Identity
from tomojoint.opalg.models import Representation
from tomojoint.opalg.rules import momentum_operator, position_operator
from tomojoint.states.utils import state_catalog
from tomojoint.symbols.errors import SymbolError
from tomojoint.symbols.pairing import pair, pair_operator
from tomojoint.symbols.regular import (
    alternative_regular_symbols_q2_p2,
    monomial_regular_symbol,
    regular_symbol,
)
from tomojoint.symbols.singular import singular_symbol
from tomojoint.symbols.utils import build_symbol, parse_symbol_kind
from tomojoint.tomography.analytic import state_tomogram
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC

OBSERVABLES = ('q', 'p', 'q2', 'p2', 'qp', 'n')


def X_axis():
    return AxisFactory(min=-12.0, max=12.0, count=241)


def parameter_axes():
    # h = 0.25 puts 0, +-0.5, 0.75, 1 and 1.5 on grid nodes
    return (AxisFactory(name='mu', min=-4.5, max=4.5, count=37), AxisFactory(name='nu', min=-4.5, max=4.5, count=37))


def theta_axes():
    return (AxisFactory(name='theta', min=0.0, max=math.pi, count=181),)


class SymbolTestCase(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()

    def symplectic_joint(self, state, prior=None):
        prior = prior or default_symplectic_prior()
        return state_joint(state, SYMPLECTIC, prior, self.params, X_axis(), parameter_axes())

    def optical_joint(self, state, prior=None):
        prior = prior or default_optical_prior()
        return state_joint(state, OPTICAL, prior, self.params, X_axis(), theta_axes())

    def assertExpectation(self, value, oracle, tol, msg=None):
        """Relative to the oracle, absolute when it is below one"""
        if abs(value - oracle) > tol * max(1.0, abs(oracle)):
            self.fail(msg or '{} differs from {} by more than {:.0e} relative'.format(value, oracle, tol))


class SymplecticRegularSymbolTest(SymbolTestCase):

    def test_catalog(self):
        for state in state_catalog():
            joint = self.symplectic_joint(state)
            for name in OBSERVABLES:
                value = pair(regular_symbol(name, SYMPLECTIC, joint.prior, self.params), joint)
                self.assertExpectation(value, state.expectation(name, self.params), 2e-2,
                                       '<{}> in {}: {}'.format(name, state, value))

    def test_examples(self):
        coherent = self.symplectic_joint(CoherentFactory())
        self.assertClose(pair(regular_symbol('q', SYMPLECTIC, coherent.prior, self.params), coherent), 1.0, 1e-2)
        ground = self.symplectic_joint(FockFactory())
        self.assertClose(pair(regular_symbol('qp', SYMPLECTIC, ground.prior, self.params), ground), 0.5j, 1e-2)
        self.assertClose(pair(regular_symbol('n', SYMPLECTIC, ground.prior, self.params), ground), 0.0, 1e-2)
        first = self.symplectic_joint(FockFactory(n=1))
        self.assertClose(pair(regular_symbol('q', SYMPLECTIC, first.prior, self.params), first), 0.0, 1e-2)
        bright = self.symplectic_joint(CoherentFactory(alpha=1.0))
        self.assertClose(pair(regular_symbol('n', SYMPLECTIC, bright.prior, self.params), bright), 1.0, 2e-2)

    def test_commutator(self):
        for state in state_catalog():
            joint = self.symplectic_joint(state)
            qp = pair(regular_symbol('qp', SYMPLECTIC, joint.prior, self.params), joint)
            pq = pair(regular_symbol('pq', SYMPLECTIC, joint.prior, self.params), joint)
            self.assertClose(qp - pq, 1j * self.params.hbar, 3e-2)

    def test_prior_invariance(self):
        states = (CoherentFactory(alpha=(1 + 1j) / math.sqrt(2)), FockFactory(n=1))
        priors = [GaussianPriorFactory(mu0=mu0, nu0=nu0, xi=xi, zeta=zeta) for mu0, nu0, (xi, zeta) in
                  itertools.product((0.0, 0.5, -0.5), (0.0, -0.5), ((0.75, 1.5), (1.5, 0.75)))]
        for state, prior in itertools.product(states, priors):
            joint = self.symplectic_joint(state, prior)
            for name in ('q', 'p', 'q2', 'n'):
                value = pair(regular_symbol(name, SYMPLECTIC, prior, self.params), joint)
                self.assertExpectation(value, state.expectation(name, self.params), 2e-2,
                                       '<{}> in {} with {}: {}'.format(name, state, prior, value))

    def test_unknown_name(self):
        with self.assertRaises(SymbolError):
            regular_symbol('q3', SYMPLECTIC, default_symplectic_prior(), self.params)
        with self.assertRaises(SymbolError):
            regular_symbol('q', 'wigner', default_symplectic_prior(), self.params)
        with self.assertRaises(SymbolError):
            regular_symbol('q', SYMPLECTIC, default_optical_prior(), self.params)

    def test_prior_mismatch(self):
        joint = self.symplectic_joint(FockFactory())
        symbol = regular_symbol('q', SYMPLECTIC, GaussianPriorFactory(mu0=0.5), self.params)
        with self.assertRaises(SymbolError):
            pair(symbol, joint)


class MonomialSymbolTest(SymbolTestCase):

    def test_first_order_is_the_position_symbol(self):
        prior = GaussianPriorFactory(mu0=0.5, nu0=-0.5, xi=1.5)
        grid = self.symplectic_joint(FockFactory(), prior).grid
        general = monomial_regular_symbol(1, 0, prior).evaluate(grid)
        printed = regular_symbol('q', SYMPLECTIC, prior, self.params).evaluate(grid)
        self.assertArrayAlmostEqual(general, printed, 1e-10)

    def test_moments(self):
        ground = self.symplectic_joint(FockFactory())
        self.assertClose(pair(monomial_regular_symbol(2, 0, ground.prior), ground), 0.5, 2e-2)
        state = CoherentFactory(alpha=(1 + 1j) / math.sqrt(2))
        joint = self.symplectic_joint(state)
        self.assertClose(pair(monomial_regular_symbol(1, 1, joint.prior), joint), 1.0, 3e-2)
        q, p, var_q, var_p = state.moments(self.params)
        fourth = q ** 4 + 6 * q ** 2 * var_q + 3 * var_q ** 2
        self.assertExpectation(pair(monomial_regular_symbol(4, 0, joint.prior), joint), fourth, 3e-2)

    def test_order_cap(self):
        with self.assertRaises(SymbolError):
            monomial_regular_symbol(3, 2, default_symplectic_prior())
        with self.assertRaises(SymbolError):
            monomial_regular_symbol(-1, 0, default_symplectic_prior())


class AlternativeSymbolTest(SymbolTestCase):

    def test_values(self):
        ground = self.symplectic_joint(FockFactory())
        q2, _ = alternative_regular_symbols_q2_p2(ground.prior)
        self.assertClose(pair(q2, ground), 0.5, 2e-2)
        squeezed = self.symplectic_joint(SqueezedGaussianFactory())
        _, p2 = alternative_regular_symbols_q2_p2(squeezed.prior)
        self.assertClose(pair(p2, squeezed), 0.25, 2e-2)

    def test_same_functional_different_function(self):
        prior = default_symplectic_prior()
        alternative = alternative_regular_symbols_q2_p2(prior)
        primary = [regular_symbol(name, SYMPLECTIC, prior, self.params) for name in ('q2', 'p2')]
        grid = self.symplectic_joint(FockFactory()).grid
        self.assertGreater((alternative[0].evaluate(grid) - primary[0].evaluate(grid)).max_abs(), 0.1)
        for state in state_catalog():
            joint = self.symplectic_joint(state)
            for first, second in zip(alternative, primary):
                self.assertExpectation(pair(first, joint), pair(second, joint), 2e-2)

    def test_off_centre_prior(self):
        prior = GaussianPriorFactory(mu0=0.5, nu0=-0.5, xi=1.5, zeta=0.75)
        state = CoherentFactory(alpha=(1 + 1j) / math.sqrt(2))
        joint = self.symplectic_joint(state, prior)
        q2, p2 = alternative_regular_symbols_q2_p2(prior)
        self.assertExpectation(pair(q2, joint), state.expectation('q2', self.params), 2e-2)
        self.assertExpectation(pair(p2, joint), state.expectation('p2', self.params), 2e-2)


class SingularSymbolTest(SymbolTestCase):

    def test_identity(self):
        for prior in (default_symplectic_prior(), GaussianPriorFactory(mu0=0.5, nu0=-0.5, xi=0.75, zeta=1.5)):
            for state in (FockFactory(n=2), CoherentFactory()):
                joint = self.symplectic_joint(state, prior)
                self.assertClose(pair(singular_symbol('one', prior, self.params), joint), 1.0, 1e-2)

    def test_catalog(self):
        for state in state_catalog():
            joint = self.symplectic_joint(state)
            for name in OBSERVABLES:
                value = pair(singular_symbol(name, joint.prior, self.params), joint)
                regular = pair(regular_symbol(name, SYMPLECTIC, joint.prior, self.params), joint)
                self.assertExpectation(value, state.expectation(name, self.params), 2e-2,
                                       '<{}> in {}: {}'.format(name, state, value))
                self.assertExpectation(value, regular, 2e-2)

    def test_powers(self):
        joint = self.symplectic_joint(FockFactory())
        self.assertClose(pair(singular_symbol('qn', joint.prior, self.params, n=2), joint), 0.5, 2e-2)
        self.assertClose(pair(singular_symbol('pn', joint.prior, self.params, n=4), joint), 0.75, 3e-2)
        with self.assertRaises(SymbolError):
            singular_symbol('qn', joint.prior, self.params)

    def test_shifted_prior(self):
        prior = GaussianPriorFactory(mu0=0.5, nu0=-0.5, xi=1.5, zeta=0.75)
        state = CoherentFactory(alpha=(1 + 1j) / math.sqrt(2))
        joint = self.symplectic_joint(state, prior)
        for name in ('q', 'p', 'qp'):
            self.assertExpectation(pair(singular_symbol(name, prior, self.params), joint),
                                   state.expectation(name, self.params), 2e-2)

    def test_fourier_forms(self):
        state = CoherentFactory(alpha=(1 + 1j) / math.sqrt(2))
        for prior in (default_symplectic_prior(), GaussianPriorFactory(mu0=0.5, nu0=-0.5)):
            joint = self.symplectic_joint(state, prior)
            self.assertClose(pair(singular_symbol('q_fourier', prior, self.params), joint), 1.0, 2e-2)
            self.assertClose(pair(singular_symbol('p_fourier', prior, self.params), joint), 1.0, 2e-2)
            self.assertClose(pair(singular_symbol('qp_fourier', prior, self.params), joint), 1.0 + 0.5j, 2e-2)
        ground = self.symplectic_joint(FockFactory())
        self.assertClose(pair(singular_symbol('qp_fourier', ground.prior, self.params), ground), 0.5j, 2e-2)

    def test_optical_is_unsupported(self):
        with self.assertRaises(SymbolError):
            singular_symbol('q', default_optical_prior(), self.params)
        with self.assertRaises(SymbolError):
            build_symbol('singular', 'q', OPTICAL, default_optical_prior(), self.params)

    def test_support_outside_grid(self):
        axes = (AxisFactory(name='mu', min=-0.5, max=0.5, count=11),
                AxisFactory(name='nu', min=-0.5, max=0.5, count=11))
        tomogram = state_tomogram(FockFactory(), SYMPLECTIC, self.params, X_axis(), axes)
        prior = default_symplectic_prior()
        joint = JointDistribution(SYMPLECTIC, tomogram.grid, prior, self.params)
        with self.assertRaises(SymbolError):
            pair(singular_symbol('q', prior, self.params), joint)

    def test_unknown_name(self):
        with self.assertRaises(SymbolError):
            singular_symbol('a', default_symplectic_prior(), self.params)


class OpticalRegularSymbolTest(SymbolTestCase):

    def test_catalog(self):
        for state in state_catalog():
            joint = self.optical_joint(state)
            for name in ('one',) + OBSERVABLES:
                value = pair(regular_symbol(name, OPTICAL, joint.prior, self.params), joint)
                self.assertExpectation(value, state.expectation(name, self.params), 2e-2,
                                       '<{}> in {}: {}'.format(name, state, value))

    def test_representation_mismatch(self):
        joint = self.optical_joint(FockFactory())
        with self.assertRaises(SymbolError):
            pair(regular_symbol('q', SYMPLECTIC, default_symplectic_prior(), self.params), joint)


class PairOperatorTest(SymbolTestCase):

    def test_identity(self):
        self.assertClose(pair_operator(Identity(), self.symplectic_joint(FockFactory(n=1))), 1.0, 1e-2)
        self.assertClose(pair_operator(Identity(), self.optical_joint(FockFactory(n=1))), 1.0, 1e-2)

    def test_quadratures(self):
        state = CoherentFactory(alpha=(1 + 1j) / math.sqrt(2))
        for joint in (self.symplectic_joint(state), self.optical_joint(state)):
            rep = Representation.for_distribution(joint)
            self.assertClose(pair_operator(position_operator(rep), joint), 1.0, 2e-2)
            self.assertClose(pair_operator(momentum_operator(rep), joint), 1.0, 2e-2)


class SymbolParsingTest(TomojointTestCase):

    def test_kinds(self):
        self.assertEqual(parse_symbol_kind('regular'), ('regular', None))
        self.assertEqual(parse_symbol_kind('monomial:2,1'), ('monomial', (2, 1)))
        for text in ('', 'dual', 'monomial:2', 'singular:1'):
            with self.assertRaises(SymbolError):
                parse_symbol_kind(text)

    def test_build(self):
        params = OscillatorParamsFactory()
        prior = default_symplectic_prior()
        self.assertEqual(build_symbol('alt', 'p2', SYMPLECTIC, prior, params).name, 'p2')
        self.assertEqual(build_symbol('monomial', 'q', SYMPLECTIC, prior, params, (1, 1)).name, 'q^1 p^1')
        with self.assertRaises(SymbolError):
            build_symbol('alt', 'q', SYMPLECTIC, prior, params)
        self.assertTrue(np.isfinite(build_symbol('regular', 'n', OPTICAL, default_optical_prior(), params)
                                    .func(X=np.zeros(1), theta=np.ones(1))).all())
