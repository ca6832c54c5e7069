import os
import tempfile

import numpy as np
from hypothesis import given, settings as hypothesis_settings, strategies as st
from scipy.special import erf

from tomojoint.tests.utils import AxisFactory, TomojointTestCase
from tomojoint.gridcalc.errors import GridError
from tomojoint.gridcalc.grid import Axis, GridFn
from tomojoint.gridcalc import calculus
from tomojoint.gridcalc.io import read_grid, write_grid

coefficients = st.floats(min_value=-2, max_value=2, allow_nan=False)


def gaussian(axis, center=0.0):
    return GridFn.from_function((axis,), lambda X: np.exp(-(X - center) ** 2))


class AxisTest(TomojointTestCase):

    def test_points_and_spacing(self):
        axis = AxisFactory()
        self.assertAlmostEqual(axis.spacing, 0.1)
        self.assertEqual(len(axis.points), 161)
        self.assertAlmostEqual(axis.points[80], 0.0)

    def test_rejects_bad_axes(self):
        with self.assertRaises(GridError):
            Axis('X', 0, 1, 2)
        with self.assertRaises(GridError):
            Axis('X', 1, 1, 10)

    def test_rejects_non_uniform_points(self):
        with self.assertRaises(GridError):
            Axis.from_points('X', [0.0, 0.1, 0.3, 0.4])
        axis = Axis.from_points('X', np.linspace(-1, 1, 11))
        self.assertEqual(axis.count, 11)


class GridFnTest(TomojointTestCase):

    def test_values_shape_checked(self):
        with self.assertRaises(GridError):
            GridFn((AxisFactory(count=5),), np.zeros(4))

    def test_values_read_only(self):
        f = gaussian(AxisFactory())
        with self.assertRaises(ValueError):
            f.values[0] = 1.0

    def test_complex_promotion(self):
        f = gaussian(AxisFactory()).to_complex()
        self.assertEqual(f.scalar_kind, 'complex')
        self.assertEqual(np.max(np.abs(f.values.imag)), 0.0)

    def test_arithmetic_requires_same_grid(self):
        f = gaussian(AxisFactory())
        g = gaussian(AxisFactory(count=81))
        with self.assertRaises(GridError):
            f + g

    def test_unknown_axis(self):
        with self.assertRaises(GridError):
            gaussian(AxisFactory()).axis_index('mu')
        with self.assertRaises(GridError):
            gaussian(AxisFactory()).axis_index(3)


class DerivativeTest(TomojointTestCase):

    def setUp(self):
        self.axis = AxisFactory()

    def test_constant(self):
        f = GridFn.from_function((self.axis,), lambda X: np.ones_like(X))
        self.assertArrayAlmostEqual(calculus.derivative(f, 0), 0.0, 1e-12)

    def test_polynomial_exactness(self):
        f = GridFn.from_function((self.axis,), lambda X: X ** 2)
        expected = 2 * self.axis.points
        self.assertArrayAlmostEqual(calculus.derivative(f, 'X'), expected, 1e-10)

    def test_second_derivative(self):
        f = GridFn.from_function((self.axis,), lambda X: X ** 3)
        self.assertArrayAlmostEqual(calculus.derivative(f, 0, order=2), 6 * self.axis.points, 1e-8)

    def test_gaussian_slope(self):
        df = calculus.derivative(gaussian(self.axis), 0)
        index = self.axis.nearest_index(1.0)
        # fourth order stencil bound at h = 0.1
        self.assertClose(df.values[index], -2 * np.exp(-1), 1e-4)

    def test_gaussian_slope_high_accuracy(self):
        df = calculus.derivative(gaussian(self.axis), 0, accuracy=8)
        index = self.axis.nearest_index(1.0)
        self.assertClose(df.values[index], -2 * np.exp(-1), 1e-6)

    def test_axis_too_short(self):
        f = GridFn.from_function((AxisFactory(count=4),), lambda X: X)
        with self.assertRaises(GridError):
            calculus.derivative(f, 0)

    def test_acts_on_one_axis_of_many(self):
        axes = (AxisFactory(), AxisFactory(name='mu', min=-2, max=2, count=41))
        f = GridFn.from_function(axes, lambda X, mu: X * mu)
        df = calculus.derivative(f, 'mu')
        self.assertArrayAlmostEqual(df, f.coordinates('X') * np.ones(f.shape), 1e-10)

    def test_convergence_order(self):
        errors = []
        for count in (81, 161):
            axis = AxisFactory(count=count)
            df = calculus.derivative(gaussian(axis), 0)
            exact = -2 * axis.points * np.exp(-axis.points ** 2)
            errors.append(np.max(np.abs(df.values - exact)))
        self.assertGreaterEqual(errors[0] / errors[1], 8.0)

    @hypothesis_settings(max_examples=20, deadline=None)
    @given(coefficients, coefficients)
    def test_linearity(self, a, b):
        f = gaussian(self.axis)
        g = gaussian(self.axis, center=1.5)
        combined = calculus.derivative(a * f + b * g, 0)
        separate = a * calculus.derivative(f, 0) + b * calculus.derivative(g, 0)
        self.assertArrayAlmostEqual(combined, separate, 1e-12)


class InverseDerivativeTest(TomojointTestCase):

    def setUp(self):
        self.axis = AxisFactory()
        self.f = gaussian(self.axis)

    def test_error_function(self):
        F = calculus.inverse_derivative(self.f, 0)
        expected = np.sqrt(np.pi) / 2 * (1 + erf(self.axis.points))
        self.assertArrayAlmostEqual(F, expected, 1e-6)
        self.assertEqual(F.warnings, ())

    def test_fundamental_theorem(self):
        F = calculus.inverse_derivative(self.f, 0)
        back = calculus.derivative(F, 0)
        interior = slice(16, -16)
        # fourth order stencil bound at h = 0.1
        self.assertArrayAlmostEqual(back.values[interior], self.f.values[interior], 1e-4)

    def test_iterated(self):
        twice = calculus.inverse_derivative(calculus.inverse_derivative(self.f, 0), 0)
        self.assertArrayAlmostEqual(calculus.inverse_derivative(self.f, 0, n=2), twice, 1e-10)

    def test_second_antiderivative(self):
        # (x - x') Theta(x - x') kernel: X (1 + erf X) sqrt(pi)/2 + exp(-X^2)/2
        X = self.axis.points
        expected = np.sqrt(np.pi) / 2 * X * (1 + erf(X)) + np.exp(-X ** 2) / 2
        self.assertArrayAlmostEqual(calculus.inverse_derivative(self.f, 0, n=2), expected, 1e-5)

    def test_decay_warning(self):
        f = GridFn.from_function((self.axis,), lambda X: np.ones_like(X))
        with self.assertLogs('tomojoint.gridcalc.calculus', level='WARNING'):
            F = calculus.inverse_derivative(f, 0)
        self.assertEqual(len(F.warnings), 1)
        self.assertArrayAlmostEqual(F, self.axis.points + 8.0, 1e-10)

    def test_bad_order(self):
        with self.assertRaises(GridError):
            calculus.inverse_derivative(self.f, 0, n=0)


class IntegrateTest(TomojointTestCase):

    def setUp(self):
        self.mu = AxisFactory(name='mu', min=-4.5, max=4.5, count=97)
        self.nu = AxisFactory(name='nu', min=-4.5, max=4.5, count=97)

    def test_gaussian_plane(self):
        f = GridFn.from_function((self.mu, self.nu), lambda mu, nu: np.exp(-mu ** 2 - nu ** 2) / np.pi)
        self.assertClose(calculus.integrate(f), 1.0, 1e-6)

    def test_zero(self):
        f = GridFn((self.mu, self.nu), np.zeros((97, 97)))
        self.assertEqual(calculus.integrate(f), 0.0)

    def test_partial(self):
        f = GridFn.from_function((self.mu, self.nu), lambda mu, nu: np.exp(-mu ** 2 - nu ** 2))
        marginal = calculus.integrate(f, ['mu'])
        self.assertEqual(marginal.names, ('nu',))
        self.assertArrayAlmostEqual(marginal, np.sqrt(np.pi) * np.exp(-self.nu.points ** 2), 1e-8)

    def test_numpy_integer_axis(self):
        f = GridFn.from_function((self.mu, self.nu), lambda mu, nu: np.exp(-mu ** 2 - nu ** 2))
        index = np.argmax([0.0, 1.0])
        marginal = calculus.integrate(f, index)
        self.assertEqual(marginal.names, ('mu',))
        self.assertArrayAlmostEqual(marginal, calculus.integrate(f, 'nu'), 0.0)
        self.assertEqual(calculus.integrate(f, [np.int64(0)]).names, ('nu',))

    def test_repeated_axis(self):
        f = GridFn((self.mu, self.nu), np.zeros((97, 97)))
        with self.assertRaises(GridError):
            calculus.integrate(f, ['mu', 0])

    def test_total_derivative_vanishes(self):
        g = GridFn.from_function((self.mu,), lambda mu: mu ** 3 * np.exp(-mu ** 2))
        self.assertLessEqual(abs(calculus.integrate(calculus.derivative(g, 0))), 1e-8)

    def test_trapezoid_order(self):
        errors = []
        for count in (11, 21):
            f = GridFn.from_function((Axis('x', 0.0, 1.0, count),), lambda x: np.exp(x))
            errors.append(abs(calculus.integrate(f) - (np.e - 1)))
        self.assertGreaterEqual(errors[0] / errors[1], 3.5)


class InterpolateTest(TomojointTestCase):

    def setUp(self):
        self.axis = AxisFactory()

    def test_node(self):
        f = gaussian(self.axis)
        self.assertEqual(calculus.interpolate(f, [self.axis.points[37]]), f.values[37])

    def test_linear_function(self):
        f = GridFn.from_function((self.axis,), lambda X: 3 * X)
        for x in (-7.33, 0.05, 2.718):
            self.assertClose(calculus.interpolate(f, [x]), 3 * x, 1e-12)

    def test_gaussian(self):
        self.assertClose(calculus.interpolate(gaussian(self.axis), {'X': 0.5}), np.exp(-0.25), 1e-3)

    def test_complex(self):
        f = GridFn.from_function((self.axis,), lambda X: X + 2j * X)
        self.assertClose(calculus.interpolate(f, [0.25]), 0.25 + 0.5j, 1e-12)

    def test_outside_hull(self):
        with self.assertRaises(GridError):
            calculus.interpolate(gaussian(self.axis), [8.5])

    def test_restrict(self):
        mu = AxisFactory(name='mu', min=-1, max=1, count=21)
        f = GridFn.from_function((self.axis, mu), lambda X, mu: X + mu)
        cut = calculus.restrict(f, 'mu', 0.05)
        self.assertEqual(cut.names, ('X',))
        self.assertArrayAlmostEqual(cut, self.axis.points + 0.05, 1e-12)


class GridIOTest(TomojointTestCase):

    def test_complex_dump(self):
        axes = (AxisFactory(count=11), AxisFactory(name='mu', min=-1, max=1, count=5))
        f = GridFn.from_function(axes, lambda X, mu: X * mu + 1j * mu)
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, 'grid.csv')
            write_grid(f, path, representation='symplectic')
            with open(path) as handle:
                self.assertEqual(handle.readline().strip(), 'X,mu,re,im')
            g, header = read_grid(path)
        self.assertEqual(header['representation'], 'symplectic')
        self.assertEqual(g.axes, f.axes)
        self.assertArrayAlmostEqual(g, f, 1e-11)
