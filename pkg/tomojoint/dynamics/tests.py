import dataclasses
import math

import mock
import numpy as np
from scipy.integrate import trapezoid

from tomojoint.tests.utils import (
    AxisFactory,
    CoherentFactory,
    FockFactory,
    GaussianPriorFactory,
    OscillatorParamsFactory,
    PriorComponentFactory,
    TomojointTestCase,
    state_joint,
)
from tomojoint.dynamics.errors import BlowUp, DynamicsError
from tomojoint.dynamics.evolution import (
    GENERAL,
    evolution_parts,
    evolution_residual,
    evolution_rhs_optical,
    evolution_rhs_symplectic,
)
from tomojoint.dynamics.models import (
    ResidualReport,
    condition_residual,
    interior_mask,
    relative_residual,
)
from tomojoint.dynamics.potentials import PolynomialPotential
from tomojoint.dynamics.stationary import (
    printed_kinetic_symplectic,
    stationarity_condition_optical,
    stationarity_condition_parts,
    stationarity_condition_symplectic,
    stationary_residual_optical,
    stationary_residual_symplectic,
    stationary_rhs_optical,
    stationary_rhs_symplectic,
)
from tomojoint.dynamics.stepper import stability_probe, stable_time_step, step_evolution
from tomojoint.dynamics.trajectory import coherent_joint_trajectory, coherent_time_derivative
from tomojoint.gridcalc.calculus import integrate
from tomojoint.gridcalc.grid import GridFn
from tomojoint.jointdist.joint import make_joint
from tomojoint.jointdist.priors import GaussianSumPrior, default_optical_prior
from tomojoint.opalg.models import Representation
from tomojoint.tomography.analytic import state_tomogram, tomogram_analytic
from tomojoint.tomography.models import OPTICAL, SYMPLECTIC

ALPHA = 1 / math.sqrt(2)


def default_axes():
    """X[-8, 8] x 161, mu, nu [-4.5, 4.5] x 97"""
    return AxisFactory(), (AxisFactory(name='mu', min=-4.5, max=4.5, count=97),
                           AxisFactory(name='nu', min=-4.5, max=4.5, count=97))


def trajectory_axes():
    """mu = 1 and nu = 0 are nodes"""
    return AxisFactory(), (AxisFactory(name='mu', min=-4.0, max=4.0, count=65),
                           AxisFactory(name='nu', min=-4.0, max=4.0, count=65))


def stepper_axes():
    return AxisFactory(count=81), (AxisFactory(name='mu', min=-3.5, max=3.5, count=57),
                                   AxisFactory(name='nu', min=-3.5, max=3.5, count=57))


def optical_axes():
    return AxisFactory(), (AxisFactory(name='theta', min=0.0, max=math.pi, count=181),)


def single_peak_prior():
    return GaussianSumPrior((PriorComponentFactory(center=math.pi / 2, width=1.0),))


class PolynomialPotentialTest(TomojointTestCase):

    def test_harmonic(self):
        potential = PolynomialPotential.harmonic(OscillatorParamsFactory(mass=2.0, omega=3.0))
        self.assertEqual(potential.coefficients, (0.0, 0.0, 9.0))
        self.assertEqual(potential.degree, 2)
        self.assertClose(potential.evaluate(2.0), 36.0, 1e-12)

    def test_trailing_zeros_dropped(self):
        self.assertEqual(PolynomialPotential((1, 2, 0, 0)).coefficients, (1.0, 2.0))
        self.assertTrue(PolynomialPotential((0, 0)).is_free)
        self.assertTrue(PolynomialPotential.free().is_free)

    def test_degree_cap(self):
        with self.assertRaises(DynamicsError):
            PolynomialPotential((0,) * 7 + (1,))
        PolynomialPotential((0,) * 6 + (1,))

    def test_parse(self):
        self.assertEqual(PolynomialPotential.parse('0, 0, 0.5').coefficients, (0.0, 0.0, 0.5))
        with self.assertRaises(DynamicsError):
            PolynomialPotential.parse('0,x')
        with self.assertRaises(DynamicsError):
            PolynomialPotential(('a',))

    def test_str(self):
        self.assertEqual(str(PolynomialPotential((0, 0, 0.5))), 'V(q) = 0.5 q^2')
        self.assertEqual(str(PolynomialPotential.free()), 'V(q) = 0')

    def test_operator_in_wigner_representation(self):
        rep = Representation(Representation.WIGNER, OscillatorParamsFactory())
        operator = PolynomialPotential((0, 1)).operator(rep)
        self.assertEqual(operator.axes(), frozenset(['q', 'p']))


class ResidualModelsTest(TomojointTestCase):

    def test_scaled_defaults_to_relative(self):
        report = ResidualReport('condition-symplectic', 'fock:n=0', 0.01, 0.002)
        self.assertEqual(report.scaled, 0.01)
        self.assertEqual(set(report.to_dict()), {'equation', 'state', 'relative', 'scaled', 'max_abs', 'metadata'})

    def test_interior_mask(self):
        X_axis, (mu_axis, nu_axis) = trajectory_axes()
        grid = GridFn((X_axis, mu_axis, nu_axis), np.zeros((161, 65, 65)))
        mask = interior_mask(grid)
        self.assertFalse(mask[:16].any())
        self.assertFalse(mask[-16:].any())
        self.assertFalse(mask[:, :6].any())
        # the origin of the parameter plane and its unit disc are excluded
        self.assertFalse(mask[80, 32, 32])
        self.assertFalse(mask[80, 36, 32])
        self.assertTrue(mask[80, 40, 32])

    def test_optical_mask_keeps_the_middle(self):
        X_axis, (theta_axis,) = optical_axes()
        mask = interior_mask(GridFn((X_axis, theta_axis), np.zeros((161, 181))))
        self.assertTrue(mask[80, 90])
        self.assertFalse(mask[80, 0])

    def test_residual_formulas(self):
        axis = AxisFactory(count=11)
        lhs = GridFn((axis,), np.ones(11))
        rhs = GridFn((axis,), np.full(11, 0.5))
        mask = np.ones(11, dtype=bool)
        self.assertClose(relative_residual(lhs, rhs, mask), 0.5, 1e-12)
        self.assertClose(condition_residual(lhs, -rhs, mask), 0.5, 1e-12)
        zero = GridFn((axis,), np.zeros(11))
        self.assertEqual(relative_residual(zero, zero, mask), 0.0)


class CoherentTrajectoryTest(TomojointTestCase):

    def setUp(self):
        self.params = OscillatorParamsFactory()
        self.prior = GaussianPriorFactory()
        self.X_axis, self.parameter_axes = trajectory_axes()

    def trajectory(self, t, prior=None):
        return coherent_joint_trajectory(ALPHA, t, SYMPLECTIC, prior, self.params, self.X_axis,
                                         self.parameter_axes)

    def test_initial_condition(self):
        joint = self.trajectory(0.0, self.prior)
        expected = make_joint(tomogram_analytic(CoherentFactory(), SYMPLECTIC, self.params, self.X_axis,
                                                self.parameter_axes), self.prior)
        self.assertArrayAlmostEqual(joint.grid, expected.grid, 1e-14)

    def test_periodic(self):
        self.assertArrayAlmostEqual(self.trajectory(2 * math.pi, self.prior).grid,
                                    self.trajectory(0.0, self.prior).grid, 1e-10)

    def test_classical_mean(self):
        for t, expected in ((0.0, 1.0), (math.pi / 2, 0.0), (math.pi, -1.0)):
            tomogram = self.trajectory(t)
            X = self.X_axis.points
            slice_ = tomogram.grid.values[:, 40, 32]
            mean = trapezoid(X * slice_, X) / trapezoid(slice_, X)
            self.assertClose(mean, expected, 1e-10)

    def test_time_derivative_vanishes_at_turning_point(self):
        derivative = coherent_time_derivative(ALPHA, 0.0, SYMPLECTIC, None, self.params, self.X_axis,
                                              self.parameter_axes)
        # the nu = 0 slices only see q(t) = cos t, which turns around at t = 0
        self.assertLessEqual(np.max(np.abs(derivative.values[:, 40, 32])), 1e-6)
        with self.assertRaises(DynamicsError):
            coherent_time_derivative(ALPHA, 0.0, SYMPLECTIC, None, self.params, self.X_axis,
                                     self.parameter_axes, delta=0.0)


class SymplecticEvolutionTest(TomojointTestCase):

    @classmethod
    def setUpClass(cls):
        cls.params = OscillatorParamsFactory()
        cls.prior = GaussianPriorFactory()
        cls.potential = PolynomialPotential.harmonic(cls.params)
        cls.X_axis, cls.parameter_axes = trajectory_axes()
        cls.ground = state_joint(FockFactory(), SYMPLECTIC, cls.prior, cls.params, cls.X_axis,
                                 cls.parameter_axes)

    def coherent(self, t):
        return coherent_joint_trajectory(ALPHA, t, SYMPLECTIC, self.prior, self.params, self.X_axis,
                                         self.parameter_axes)

    def oracle(self, t):
        return coherent_time_derivative(ALPHA, t, SYMPLECTIC, self.prior, self.params, self.X_axis,
                                        self.parameter_axes)

    def test_ground_state_is_stationary(self):
        report = evolution_residual(self.ground, self.prior, self.potential)
        self.assertLessEqual(report.relative, 1e-2)

    def test_coherent_state_matches_trajectory(self):
        for t in (0.0, 0.3):
            report = evolution_residual(self.coherent(t), self.prior, self.potential, oracle=self.oracle(t))
            self.assertLessEqual(report.relative, 2e-2, 't={}: {}'.format(t, report.relative))

    def test_free_particle_is_drift_only(self):
        joint = self.coherent(0.3)
        drift, potential_part = evolution_parts(joint, self.prior, PolynomialPotential.free())
        self.assertEqual(potential_part.max_abs(), 0.0)
        rhs = evolution_rhs_symplectic(joint, self.prior, PolynomialPotential.free())
        self.assertArrayAlmostEqual(rhs, drift, 0.0)

    def test_general_path_reproduces_printed_drift(self):
        joint = self.coherent(0.3)
        mask = interior_mask(joint.grid)
        printed = evolution_rhs_symplectic(joint, self.prior, self.potential)
        general = evolution_rhs_symplectic(joint, self.prior, self.potential, path=GENERAL)
        self.assertLessEqual(relative_residual(printed, general, mask), 1e-2)

    def test_joint_is_prior_times_tomogram_equation(self):
        tomogram = tomogram_analytic(CoherentFactory(), SYMPLECTIC, self.params, self.X_axis,
                                     self.parameter_axes)
        joint = make_joint(tomogram, self.prior)
        joint_rhs = evolution_rhs_symplectic(joint, self.prior, self.potential)
        tomographic_rhs = evolution_rhs_symplectic(tomogram, None, self.potential)
        mask = interior_mask(joint.grid)
        prior = joint.prior_values()
        scale = np.max(np.abs(joint_rhs.values[mask]))
        self.assertLessEqual(np.max(np.abs(joint_rhs.values - prior * tomographic_rhs.values)[mask]), 1e-3 * scale)

    def test_representation_checks(self):
        with self.assertRaises(DynamicsError):
            evolution_rhs_optical(self.ground, self.prior, self.potential)
        with self.assertRaises(DynamicsError):
            evolution_rhs_symplectic(self.ground, GaussianPriorFactory(nu0=0.5), self.potential)
        with self.assertRaises(DynamicsError):
            evolution_rhs_symplectic(self.ground, self.prior, self.potential, path='sideways')

    def test_condition_is_half_the_evolution(self):
        joint = self.coherent(0.3)
        first, second = stationarity_condition_parts(joint, self.prior, self.potential)
        rhs = evolution_rhs_symplectic(joint, self.prior, self.potential)
        self.assertArrayAlmostEqual(first.values + second.values, rhs.values * 0.5, 1e-10)

    def test_condition_detects_moving_states(self):
        report = stationarity_condition_symplectic(self.coherent(0.0), self.prior, self.potential)
        self.assertGreaterEqual(report.relative, 0.1)


class SymplecticStationaryTest(TomojointTestCase):

    @classmethod
    def setUpClass(cls):
        cls.params = OscillatorParamsFactory()
        cls.prior = GaussianPriorFactory()
        cls.potential = PolynomialPotential.harmonic(cls.params)
        cls.X_axis, cls.parameter_axes = default_axes()
        cls.joints = [state_joint(FockFactory(n=n), SYMPLECTIC, cls.prior, cls.params, cls.X_axis,
                                  cls.parameter_axes) for n in range(3)]

    def test_ground_state(self):
        report = stationary_residual_symplectic(self.joints[0], self.prior, self.potential, 0.5)
        self.assertLessEqual(report.relative, 2e-2)
        self.assertEqual(report.equation, 'stationary-symplectic')

    def test_first_excited_state(self):
        report = stationary_residual_symplectic(self.joints[1], self.prior, self.potential, 1.5)
        self.assertLessEqual(report.relative, 3e-2)

    def test_wrong_energy(self):
        report = stationary_residual_symplectic(self.joints[0], self.prior, self.potential, 0.7)
        self.assertGreaterEqual(report.relative, 0.2)

    def test_energies_are_discriminated(self):
        for n, joint in enumerate(self.joints):
            energy = n + 0.5
            rhs = stationary_rhs_symplectic(joint, self.prior, self.potential)
            mask = interior_mask(joint.grid)
            self.assertLessEqual(relative_residual(joint.grid * energy, rhs, mask), 3e-2, 'n={}'.format(n))
            for offset in (-0.2, 0.2):
                report = stationary_residual_symplectic(joint, self.prior, self.potential, energy + offset)
                self.assertGreaterEqual(report.scaled, 0.15, 'n={} E={}'.format(n, energy + offset))

    def test_eigenstates_satisfy_the_condition(self):
        for n, joint in enumerate(self.joints):
            report = stationarity_condition_symplectic(joint, self.prior, self.potential)
            self.assertLessEqual(report.relative, 2e-2, 'n={}: {}'.format(n, report.relative))

    def test_printed_form_discrepancy(self):
        report = stationary_residual_symplectic(self.joints[0], self.prior, self.potential, 0.5, printed_form=True)
        self.assertLessEqual(report.metadata['printed_discrepancy'], 3e-2)
        self.assertLessEqual(report.metadata['printed_relative'], 3e-2)

        prior = GaussianPriorFactory(nu0=0.5)
        joint = state_joint(FockFactory(), SYMPLECTIC, prior, self.params, self.X_axis, self.parameter_axes)
        report = stationary_residual_symplectic(joint, prior, self.potential, 0.5, printed_form=True)
        self.assertLessEqual(report.relative, 3e-2)
        self.assertGreaterEqual(report.metadata['printed_discrepancy'], 0.1)

        rep = Representation.for_distribution(joint)
        corrected = (printed_kinetic_symplectic(rep, nu0_sign=-1) + self.potential.operator(rep)).apply(joint.grid)
        mask = interior_mask(joint.grid)
        self.assertLessEqual(relative_residual(joint.grid * 0.5, corrected.real, mask), 3e-2)

    def test_printed_form_needs_gaussian_prior(self):
        tomogram = state_tomogram(FockFactory(), SYMPLECTIC, self.params, self.X_axis, self.parameter_axes)
        with self.assertRaises(DynamicsError):
            stationary_residual_symplectic(tomogram, None, self.potential, 0.5, printed_form=True)


class OpticalDynamicsTest(TomojointTestCase):

    @classmethod
    def setUpClass(cls):
        cls.params = OscillatorParamsFactory()
        cls.potential = PolynomialPotential.harmonic(cls.params)
        cls.X_axis, cls.parameter_axes = optical_axes()
        cls.prior = default_optical_prior()
        cls.single = single_peak_prior()

    def joint(self, state, prior=None):
        return state_joint(state, OPTICAL, prior or self.prior, self.params, self.X_axis, self.parameter_axes)

    def test_ground_state_is_stationary(self):
        report = evolution_residual(self.joint(FockFactory()), self.prior, self.potential)
        self.assertLessEqual(report.relative, 2e-2)

    def test_coherent_state_matches_trajectory(self):
        for t in (0.0, 0.3):
            joint = coherent_joint_trajectory(ALPHA, t, OPTICAL, self.prior, self.params, self.X_axis,
                                              self.parameter_axes)
            oracle = coherent_time_derivative(ALPHA, t, OPTICAL, self.prior, self.params, self.X_axis,
                                              self.parameter_axes)
            report = evolution_residual(joint, self.prior, self.potential, oracle=oracle)
            self.assertLessEqual(report.relative, 3e-2, 't={}: {}'.format(t, report.relative))

    def test_joint_is_prior_times_tomogram_equation(self):
        tomogram = tomogram_analytic(CoherentFactory(alpha=0.6 + 0.4j), OPTICAL, self.params, self.X_axis,
                                     self.parameter_axes)
        joint = make_joint(tomogram, self.prior)
        joint_rhs = evolution_rhs_optical(joint, self.prior, self.potential)
        tomographic_rhs = evolution_rhs_optical(tomogram, None, self.potential)
        difference = joint_rhs.values - joint.prior_values() * tomographic_rhs.values
        self.assertLessEqual(np.max(np.abs(difference[:, 5:-5])), 1e-6)

    def test_general_path_reproduces_printed_drift(self):
        joint = self.joint(CoherentFactory(alpha=0.6 + 0.4j))
        printed = evolution_rhs_optical(joint, self.prior, self.potential)
        general = evolution_rhs_optical(joint, self.prior, self.potential, path=GENERAL)
        self.assertLessEqual(relative_residual(printed, general, interior_mask(joint.grid)), 1e-2)

    def test_single_peak_ground_state(self):
        joint = self.joint(FockFactory(), self.single)
        report = stationary_residual_optical(joint, self.single, self.potential, 0.5, single_peak=True)
        self.assertLessEqual(report.relative, 3e-2)
        self.assertEqual(report.metadata['path'], 'single-peak')

    def test_single_peak_matches_general_path(self):
        joint = self.joint(FockFactory(n=1), self.single)
        general = stationary_rhs_optical(joint, self.single, self.potential)
        single = stationary_rhs_optical(joint, self.single, self.potential, single_peak=True)
        self.assertArrayAlmostEqual(general, single, 1e-8)

    def test_two_component_excited_state(self):
        report = stationary_residual_optical(self.joint(FockFactory(n=1)), self.prior, self.potential, 1.5)
        self.assertLessEqual(report.relative, 4e-2)
        wrong = stationary_residual_optical(self.joint(FockFactory(n=1)), self.prior, self.potential, 1.7)
        self.assertGreaterEqual(wrong.scaled, 0.15)

    def test_single_peak_needs_one_component(self):
        with self.assertRaises(DynamicsError):
            stationary_residual_optical(self.joint(FockFactory()), self.prior, self.potential, 0.5,
                                        single_peak=True)

    def test_condition(self):
        stationary = stationarity_condition_optical(self.joint(FockFactory(n=2)), self.prior, self.potential)
        self.assertLessEqual(stationary.relative, 2e-2)
        moving = stationarity_condition_optical(self.joint(CoherentFactory()), self.prior, self.potential)
        self.assertGreaterEqual(moving.relative, 0.1)


class StepEvolutionTest(TomojointTestCase):

    @classmethod
    def setUpClass(cls):
        cls.params = OscillatorParamsFactory()
        cls.prior = GaussianPriorFactory()
        cls.potential = PolynomialPotential.harmonic(cls.params)
        cls.X_axis, cls.parameter_axes = stepper_axes()

    def test_ground_state_stays_put(self):
        joint = state_joint(FockFactory(), SYMPLECTIC, self.prior, self.params, self.X_axis, self.parameter_axes)
        final = step_evolution(joint, self.prior, self.potential, 0.01, 100)
        mask = interior_mask(joint.grid)
        self.assertLessEqual(relative_residual(final.grid, joint.grid, mask), 2e-2)
        self.assertClose(integrate(final.grid), 1.0, 1e-2)

    def test_coherent_state_follows_trajectory(self):
        start = coherent_joint_trajectory(ALPHA, 0.0, SYMPLECTIC, self.prior, self.params, self.X_axis,
                                          self.parameter_axes)
        final = step_evolution(start, self.prior, self.potential, 0.01, 50)
        expected = coherent_joint_trajectory(ALPHA, 0.5, SYMPLECTIC, self.prior, self.params, self.X_axis,
                                             self.parameter_axes)
        self.assertLessEqual(relative_residual(final.grid, expected.grid, interior_mask(final.grid)), 5e-2)
        self.assertClose(integrate(final.grid), 1.0, 1e-2)

    def test_large_steps_are_refused(self):
        joint = coherent_joint_trajectory(ALPHA, 0.0, SYMPLECTIC, self.prior, self.params, self.X_axis,
                                          self.parameter_axes)
        self.assertGreater(stability_probe(joint, self.prior, self.potential), 0.5)
        with self.assertRaises(DynamicsError):
            step_evolution(joint, self.prior, self.potential, 6.0, 1)

    def test_spectral_radius_matches_a_converged_power_iteration(self):
        joint = state_joint(FockFactory(), SYMPLECTIC, self.prior, self.params, self.X_axis, self.parameter_axes)
        grid = joint.grid
        vector = np.random.RandomState(7).standard_normal(grid.shape)
        reference = 0.0
        for _ in range(200):
            vector = vector / np.linalg.norm(vector)
            state = dataclasses.replace(joint, grid=grid.with_values(vector))
            vector = evolution_rhs_symplectic(state, self.prior, self.potential).values
            reference = float(np.linalg.norm(vector))
        rate = stability_probe(joint, self.prior, self.potential)
        self.assertGreater(rate, 50.0)
        self.assertLessEqual(abs(rate - reference), 0.1 * reference)

    def test_steps_inside_the_reported_bound_are_stable(self):
        joint = state_joint(FockFactory(), SYMPLECTIC, self.prior, self.params, self.X_axis, self.parameter_axes)
        dt = 0.95 * stable_time_step(joint, self.prior, self.potential)
        steps = int(math.ceil(1.0 / dt))
        final = step_evolution(joint, self.prior, self.potential, dt, steps)
        self.assertTrue(np.all(np.isfinite(final.grid.values)))
        self.assertClose(integrate(final.grid), 1.0, 1e-2)

    def test_schedule_checks(self):
        joint = state_joint(FockFactory(), SYMPLECTIC, self.prior, self.params, self.X_axis, self.parameter_axes)
        with self.assertRaises(DynamicsError):
            step_evolution(joint, self.prior, self.potential, -0.1, 10, probe=False)
        with self.assertRaises(DynamicsError):
            step_evolution(joint, self.prior, self.potential, 0.1, 100, probe=False)
        with self.assertRaises(DynamicsError):
            step_evolution(joint, self.prior, self.potential, 0.1, 2.5, probe=False)

    def test_blow_up_is_reported(self):
        joint = state_joint(FockFactory(), SYMPLECTIC, self.prior, self.params, self.X_axis, self.parameter_axes)
        broken = joint.grid.with_values(np.full(joint.grid.shape, np.nan))
        with mock.patch('tomojoint.dynamics.stepper.evolution_rhs', return_value=broken):
            with self.assertRaises(BlowUp) as raised:
                step_evolution(joint, self.prior, self.potential, 0.01, 10, probe=False)
        self.assertEqual(raised.exception.step, 1)
        self.assertClose(raised.exception.time, 0.01, 1e-15)
