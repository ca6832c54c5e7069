import math

import numpy as np

from tomojoint.tests.utils import (
    AxisFactory,
    CoherentFactory,
    FockFactory,
    OscillatorParamsFactory,
    SqueezedGaussianFactory,
    TomojointTestCase
)
from tomojoint.gridcalc.calculus import integrate, interpolate
from tomojoint.gridcalc.grid import GridFn
from tomojoint.states.errors import StateError
from tomojoint.states.models import Coherent, Fock, OscillatorParams, SqueezedGaussian
from tomojoint.states.utils import parse_state, state_catalog
from tomojoint.states.wavefunctions import density_matrix, trace, wavefunction
from tomojoint.states.wigner import state_wigner, wigner_analytic, wigner_from_density


def q_axis():
    return AxisFactory(name='q')


def p_axis():
    return AxisFactory(name='p')


def numeric_wigner(state, params=None):
    params = params or OscillatorParamsFactory()
    return wigner_from_density(density_matrix(state, params, q_axis()), params, p_axis())


class OscillatorParamsTest(TomojointTestCase):

    def test_positive(self):
        with self.assertRaises(StateError):
            OscillatorParams(mass=0)
        with self.assertRaises(StateError):
            OscillatorParams(hbar=-1)

    def test_ground_variances(self):
        params = OscillatorParamsFactory(mass=2.0, omega=0.5, hbar=1.0)
        self.assertEqual(params.ground_variances, (0.5, 0.5))


class StateSpecTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()

    def test_squeezed_variances(self):
        _, _, var_q, var_p = SqueezedGaussianFactory().moments(self.params)
        self.assertAlmostEqual(var_q, 1.0)
        self.assertAlmostEqual(var_p, 0.25)

    def test_coherent_mean(self):
        q, p = CoherentFactory(alpha=(1 + 1j) / math.sqrt(2)).mean(self.params)
        self.assertAlmostEqual(q, 1.0)
        self.assertAlmostEqual(p, 1.0)

    def test_expectations(self):
        self.assertAlmostEqual(CoherentFactory(alpha=1.0).expectation('n', self.params), 1.0)
        self.assertAlmostEqual(FockFactory(n=2).expectation('q2', self.params), 2.5)
        self.assertEqual(FockFactory().expectation('qp', self.params), 0.5j)
        self.assertAlmostEqual(SqueezedGaussianFactory().expectation('n', self.params), 0.5 * (1.0 + 0.25 - 1))

    def test_energy(self):
        self.assertAlmostEqual(FockFactory(n=1).energy(self.params), 1.5)
        self.assertAlmostEqual(CoherentFactory(alpha=1.0).energy(self.params), 1.5)

    def test_fock_cap(self):
        with self.assertRaises(StateError):
            Fock(13)
        with self.assertRaises(StateError):
            Fock(-1)

    def test_non_gaussian_moments(self):
        with self.assertRaises(StateError):
            FockFactory(n=1).moments(self.params)


class ParseStateTest(TomojointTestCase):

    def test_formats(self):
        self.assertEqual(parse_state('fock:n=2'), Fock(2))
        self.assertEqual(parse_state('coherent:re=0.5,im=0.0'), Coherent(0.5))
        self.assertEqual(parse_state('gauss:q=1,p=0,s=2'), SqueezedGaussian(1, 0, 2))

    def test_round_trip_through_str(self):
        for state in state_catalog():
            self.assertEqual(parse_state(str(state)), state)

    def test_errors(self):
        for text in ('', 'spin:s=1', 'fock:n=two', 'fock:n=1,x=2', 'gauss:s', 'fock:n=1.5'):
            with self.assertRaises(StateError):
                parse_state(text)


class WavefunctionTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()
        self.axis = q_axis()

    def test_ground_state_peak(self):
        psi = wavefunction(Fock(0), self.params, self.axis)
        self.assertClose(abs(interpolate(psi, [0.0])), math.pi ** -0.25, 1e-6)

    def test_coherent_zero_is_ground_state(self):
        self.assertArrayAlmostEqual(wavefunction(Coherent(0), self.params, self.axis),
                                    wavefunction(Fock(0), self.params, self.axis), 1e-12)

    def test_normalized(self):
        for state in state_catalog():
            psi = wavefunction(state, self.params, self.axis)
            norm = integrate(GridFn(psi.axes, np.abs(psi.values) ** 2))
            self.assertClose(norm, 1.0, 1e-10)

    def test_axis_must_cover_state(self):
        with self.assertRaises(StateError):
            wavefunction(Fock(3), self.params, AxisFactory(name='q', min=-2, max=2, count=41))


class DensityMatrixTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()

    def test_hermitian(self):
        rho = density_matrix(Coherent((1 + 1j) / math.sqrt(2)), self.params, q_axis())
        self.assertArrayAlmostEqual(rho.values, np.conj(rho.values.T), 0.0)
        self.assertEqual(rho.names, ('q', 'q_prime'))

    def test_trace(self):
        self.assertClose(trace(density_matrix(Fock(1), self.params, q_axis())), 1.0, 1e-8)

    def test_ground_state_origin(self):
        rho = density_matrix(Fock(0), self.params, q_axis())
        self.assertClose(rho.values[80, 80].real, 1 / math.sqrt(math.pi), 1e-6)


class WignerTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()

    def test_ground_state(self):
        W = numeric_wigner(Fock(0))
        self.assertClose(W.value(0, 0), 1 / math.pi, 1e-4)
        self.assertClose(W.normalization(), 1.0, 1e-4)

    def test_matches_closed_form(self):
        for state in (Fock(0), Coherent(1 / math.sqrt(2)), Coherent((1 + 1j) / math.sqrt(2)),
                      SqueezedGaussian(0, 0, 0.5), SqueezedGaussian(0, 0, 2)):
            exact = wigner_analytic(state, self.params, q_axis(), p_axis())
            self.assertArrayAlmostEqual(numeric_wigner(state).grid, exact.grid, 1e-4, msg=str(state))

    def test_coherent_displacement(self):
        W = numeric_wigner(Coherent(1 / math.sqrt(2)))
        self.assertClose(W.value(1.0, 0.0), 1 / math.pi, 1e-4)
        self.assertClose(W.moment(1, 0), 1.0, 1e-4)

    def test_fock_parity_at_origin(self):
        for n in range(3):
            value = numeric_wigner(Fock(n)).value(0, 0)
            self.assertClose(value, (-1) ** n / math.pi, 1e-4)

    def test_catalog_moments_and_marginals(self):
        for state in state_catalog():
            W = numeric_wigner(state)
            self.assertClose(W.normalization(), 1.0, 1e-4, msg=str(state))
            q2, p2 = state.second_moments(self.params)
            self.assertClose(W.moment(2, 0), q2, 1e-4, msg=str(state))
            self.assertClose(W.moment(0, 2), p2, 1e-4, msg=str(state))
            self.assertClose(W.moment(1, 0), state.expectation('q', self.params), 1e-4)
            self.assertClose(W.moment(0, 1), state.expectation('p', self.params), 1e-4)
            for variable in ('q', 'p'):
                marginal = W.marginal(variable)
                self.assertGreaterEqual(marginal.values.min(), -1e-6)
                self.assertClose(integrate(marginal), 1.0, 1e-4)

    def test_non_hermitian_input(self):
        rho = density_matrix(Fock(0), self.params, q_axis()) * 1j
        with self.assertRaises(StateError):
            wigner_from_density(rho, self.params, p_axis())

    def test_analytic(self):
        W = wigner_analytic(SqueezedGaussian(0, 0, 2), self.params, q_axis(), p_axis())
        self.assertClose(W.normalization(), 1.0, 1e-10)
        self.assertClose(W.moment(2, 0), 1.0, 1e-4)
        self.assertClose(W.moment(0, 2), 0.25, 1e-4)

    def test_analytic_rejects_excited_states(self):
        with self.assertRaises(StateError):
            wigner_analytic(Fock(1), self.params, q_axis(), p_axis())

    def test_state_wigner_picks_the_construction(self):
        exact = wigner_analytic(Coherent(1 / math.sqrt(2)), self.params, q_axis(), p_axis())
        self.assertArrayAlmostEqual(state_wigner(Coherent(1 / math.sqrt(2)), self.params, q_axis(), p_axis()).grid,
                                    exact.grid, 1e-14)
        W = state_wigner(Fock(2), self.params, q_axis(), p_axis())
        self.assertArrayAlmostEqual(W.grid, numeric_wigner(Fock(2)).grid, 1e-14)
        self.assertClose(W.value(0, 0), 1 / math.pi, 1e-4)
