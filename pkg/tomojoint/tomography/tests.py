import math

import numpy as np

from tomojoint.tests.utils import AxisFactory, OscillatorParamsFactory, TomojointTestCase
from tomojoint.gridcalc.calculus import integrate
from tomojoint.gridcalc.grid import GridFn
from tomojoint.states.models import Coherent, Fock, SqueezedGaussian
from tomojoint.states.wavefunctions import density_matrix
from tomojoint.states.wigner import wigner_analytic, wigner_from_density
from tomojoint.tomography.analytic import fock_tomogram, state_tomogram, tomogram_analytic
from tomojoint.tomography.errors import TomographyError
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC, Tomogram
from tomojoint.tomography.radon import optical_tomogram, symplectic_slice, symplectic_tomogram
from tomojoint.tomography.reconstruct import reconstruct_symplectic, wigner_from_symplectic


def X_axis(**kwargs):
    return AxisFactory(name='X', **kwargs)


def mu_axis():
    return AxisFactory(name='mu', min=-2.0, max=2.0, count=21)


def nu_axis():
    return AxisFactory(name='nu', min=-2.0, max=2.0, count=21)


def theta_axis(count=37):
    return AxisFactory(name='theta', min=0.0, max=math.pi, count=count)


def phase_axes():
    return AxisFactory(name='q'), AxisFactory(name='p')


def away_from_origin(tomogram, radius=0.3):
    mu, nu = tomogram.directions()
    return np.hypot(mu, nu) >= radius


class RadonTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()
        self.ground = wigner_analytic(Fock(0), self.params, *phase_axes())

    def test_ground_state_matches_closed_form(self):
        numeric = symplectic_tomogram(self.ground, X_axis(), mu_axis(), nu_axis())
        exact = tomogram_analytic(Fock(0), SYMPLECTIC, self.params, X_axis(), (mu_axis(), nu_axis()))
        mask = away_from_origin(numeric)
        self.assertArrayAlmostEqual(numeric.grid.values[:, mask], exact.grid.values[:, mask], 1e-3)
        self.assertClose(numeric.value(0.0, 1.0, 0.0), 1 / math.sqrt(math.pi), 1e-3)

    def test_gaussian_states_match_closed_form(self):
        for state in (Coherent(1 / math.sqrt(2)), SqueezedGaussian(0, 0, 2)):
            W = wigner_analytic(state, self.params, *phase_axes())
            numeric = symplectic_tomogram(W, X_axis(), mu_axis(), nu_axis())
            exact = tomogram_analytic(state, SYMPLECTIC, self.params, X_axis(), (mu_axis(), nu_axis()))
            mask = away_from_origin(numeric)
            self.assertArrayAlmostEqual(numeric.grid.values[:, mask], exact.grid.values[:, mask], 1e-3,
                                        msg=str(state))

    def test_origin_policy(self):
        tomogram = symplectic_tomogram(self.ground, X_axis(), mu_axis(), nu_axis())
        self.assertTrue(any('degenerate' in flag for flag in tomogram.flags))
        self.assertClose(integrate(GridFn(tomogram.grid.axes[:1], tomogram.grid.values[:, 10, 10])), 1.0, 1e-6)
        with self.assertRaises(TomographyError) as context:
            symplectic_tomogram(self.ground, X_axis(), mu_axis(), nu_axis(), strict=True)
        self.assertIn('undefined', context.exception.message)

    def test_position_marginal(self):
        W = wigner_from_density(density_matrix(Fock(1), self.params, AxisFactory(name='q')),
                                self.params, AxisFactory(name='p'))
        cut = symplectic_slice(W, X_axis(), 1.0, 0.0)
        self.assertArrayAlmostEqual(cut, W.marginal('q'), 1e-3)

    def test_slice_moments(self):
        state = Coherent((1 + 1j) / math.sqrt(2))
        W = wigner_analytic(state, self.params, *phase_axes())
        tomogram = symplectic_tomogram(W, X_axis(min=-12.0, max=12.0, count=241), mu_axis(), nu_axis())
        mu, nu = tomogram.directions()
        self.assertArrayAlmostEqual(tomogram.slice_norms(), 1.0, 1e-3)
        self.assertArrayAlmostEqual(tomogram.slice_moment(1), mu + nu, 1e-3)
        mask = away_from_origin(tomogram)
        # <q^2> = <p^2> = 1.5, symmetrized <qp> = 1
        expected = 1.5 * mu ** 2 + 2 * mu * nu + 1.5 * nu ** 2
        self.assertArrayAlmostEqual(tomogram.slice_moment(2).values[mask], expected[mask], 3e-3)

    def test_linear_interpolation_order(self):
        tomogram = symplectic_tomogram(self.ground, X_axis(), mu_axis(), nu_axis(), order=1)
        self.assertClose(tomogram.value(0.0, 1.0, 0.0), 1 / math.sqrt(math.pi), 2e-3)


class OpticalTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()

    def test_ground_state_is_rotation_invariant(self):
        W = wigner_analytic(Fock(0), self.params, *phase_axes())
        tomogram = optical_tomogram(W, X_axis(), theta_axis())
        self.assertEqual(tomogram.representation, OPTICAL)
        self.assertArrayAlmostEqual(tomogram.slice_norms(), 1.0, 1e-3)
        self.assertArrayAlmostEqual(tomogram.slice_moment(2), 0.5, 1e-3)
        first = tomogram.grid.values[:, :1]
        self.assertArrayAlmostEqual(tomogram.grid.values, np.broadcast_to(first, tomogram.grid.shape), 1e-3)

    def test_compatibility_with_symplectic(self):
        params = OscillatorParamsFactory(mass=2.0)
        W = wigner_analytic(Coherent(0.5 + 0.3j), params, *phase_axes())
        tomogram = optical_tomogram(W, X_axis(), theta_axis(count=13))
        for index, theta in enumerate(tomogram.parameter_axes[0].points):
            cut = symplectic_slice(W, X_axis(), math.cos(theta), math.sin(theta) / (params.mass * params.omega))
            self.assertArrayAlmostEqual(tomogram.grid.values[:, index], cut.values, 1e-6)

    def test_theta_range(self):
        W = wigner_analytic(Fock(0), self.params, *phase_axes())
        with self.assertRaises(TomographyError):
            optical_tomogram(W, X_axis(), AxisFactory(name='theta', min=0.0, max=4.0, count=11))


class AnalyticTomogramTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()

    def test_squeezed_variances(self):
        tomogram = tomogram_analytic(SqueezedGaussian(0, 0, 2), SYMPLECTIC, self.params, X_axis(),
                                     (mu_axis(), nu_axis()))
        second = tomogram.slice_moment(2)
        self.assertClose(second.values[15, 10], 1.0, 1e-6)
        self.assertClose(second.values[10, 15], 0.25, 1e-6)

    def test_slice_normalization(self):
        tomogram = tomogram_analytic(Coherent(1 / math.sqrt(2)), SYMPLECTIC, self.params,
                                     X_axis(min=-20.0, max=20.0, count=401), (mu_axis(), nu_axis()))
        mask = away_from_origin(tomogram, radius=0.5)
        self.assertArrayAlmostEqual(tomogram.slice_norms().values[mask], 1.0, 1e-10)

    def test_rejects_excited_states(self):
        with self.assertRaises(TomographyError):
            tomogram_analytic(Fock(2), SYMPLECTIC, self.params, X_axis(), (mu_axis(), nu_axis()))

    def test_fock_closed_form(self):
        ground = fock_tomogram(0, SYMPLECTIC, self.params, X_axis(), (mu_axis(), nu_axis()))
        gaussian = tomogram_analytic(Fock(0), SYMPLECTIC, self.params, X_axis(), (mu_axis(), nu_axis()))
        self.assertArrayAlmostEqual(ground.grid, gaussian.grid, 1e-12)

    def test_fock_against_radon(self):
        W = wigner_from_density(density_matrix(Fock(1), self.params, AxisFactory(name='q')),
                                self.params, AxisFactory(name='p'))
        exact = state_tomogram(Fock(1), OPTICAL, self.params, X_axis(), (theta_axis(),))
        numeric = optical_tomogram(W, X_axis(), theta_axis())
        self.assertArrayAlmostEqual(numeric.grid, exact.grid, 1e-3)

    def test_wrong_axes(self):
        with self.assertRaises(TomographyError):
            Tomogram(OPTICAL, GridFn((X_axis(), mu_axis()), np.zeros((161, 21))), self.params)


class ReconstructionTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()
        self.X = X_axis(min=-14.0, max=14.0, count=141)
        self.mu = AxisFactory(name='mu', min=-4.4, max=4.4, count=45)
        self.nu = AxisFactory(name='nu', min=-4.4, max=4.4, count=45)
        self.q = AxisFactory(name='q', min=-6.0, max=6.0, count=121)
        self.p = AxisFactory(name='p', min=-6.0, max=6.0, count=121)

    def round_trip(self, state):
        W = wigner_analytic(state, self.params, self.q, self.p)
        tomogram = symplectic_tomogram(W, self.X, self.mu, self.nu)
        return W, reconstruct_symplectic(tomogram, self.q, self.p)

    def test_ground_state(self):
        W, result = self.round_trip(Fock(0))
        central = (slice(30, 91), slice(30, 91))
        self.assertArrayAlmostEqual(result.wigner.grid.values[central], W.grid.values[central], 5e-3)
        self.assertLess(result.drift, 5e-2)
        self.assertLess(result.imaginary_residue, 1e-6)

    def test_coherent_peak(self):
        _, result = self.round_trip(Coherent(1 / math.sqrt(2)))
        values = result.wigner.grid.values
        i, j = np.unravel_index(np.argmax(values), values.shape)
        self.assertLessEqual(abs(self.q.points[i] - 1.0), self.q.spacing)
        self.assertLessEqual(abs(self.p.points[j]), self.p.spacing)

    def test_constant_tomogram_rejected(self):
        grid = GridFn((self.X, self.mu, self.nu), np.full((141, 45, 45), 1 / 28.0))
        with self.assertRaises(TomographyError):
            wigner_from_symplectic(Tomogram(SYMPLECTIC, grid, self.params), self.q, self.p)

    def test_optical_rejected(self):
        W = wigner_analytic(Fock(0), self.params, self.q, self.p)
        tomogram = optical_tomogram(W, X_axis(), theta_axis())
        with self.assertRaises(TomographyError):
            wigner_from_symplectic(tomogram, self.q, self.p)
