import math
import warnings

from django.test import SimpleTestCase

from hyperuniform_app.algebra import (
    IntegerMatrix, QuadraticOrder, exact_sign, fibonacci, lyapunov_spectrum, spectral_data, star,
)
from hyperuniform_app.exceptions import CoefficientOverflowError, ConfigurationError, SpectralConditioningWarning

TAU = (1 + math.sqrt(5)) / 2


class StarMapTests(SimpleTestCase):
    def setUp(self):
        self.order = QuadraticOrder.golden()

    def test_star_of_tau(self):
        self.assertEqual(star(self.order.element(0, 1)), self.order.element(1, -1))

    def test_star_fixes_integers(self):
        self.assertEqual(star(self.order.element(1)), self.order.element(1))

    def test_star_of_two_plus_three_tau(self):
        x = self.order.element(2, 3)
        self.assertEqual(star(x), self.order.element(5, -3))
        self.assertAlmostEqual(star(x).__float__(), 2 + 3 * (1 - TAU), places=12)

    def test_star_is_a_ring_homomorphism(self):
        x, y = self.order.element(3, -7), self.order.element(-2, 5)
        self.assertEqual(star(x + y), star(x) + star(y))
        self.assertEqual(star(x * y), star(x) * star(y))
        self.assertEqual(star(star(x)), x)

    def test_norm_is_product_with_conjugate(self):
        x = self.order.element(2, 3)
        product = x * star(x)
        self.assertEqual(product.b, 0)
        self.assertEqual(product.a, x.norm())

    def test_theta_is_a_unit(self):
        theta = self.order.element(0, 1)
        self.assertEqual(theta.divide_by_theta().times_theta(), theta)
        self.assertEqual(theta.divide_by_theta(), self.order.element(1))
        self.assertEqual(self.order.element(1).divide_by_theta(), self.order.element(-1, 1))


class ExactComparisonTests(SimpleTestCase):
    def test_exact_sign(self):
        self.assertEqual(exact_sign(0, 0, 5), 0)
        self.assertEqual(exact_sign(-2, 1, 5), 1)
        self.assertEqual(exact_sign(3, -1, 5), 1)
        self.assertEqual(exact_sign(2, -1, 4), 0)

    def test_ordering_matches_real_values(self):
        order = QuadraticOrder.golden()
        values = [order.element(a, b) for a in range(-4, 5) for b in range(-4, 5)]
        ordered = sorted(values, key=float)
        for x, y in zip(ordered, ordered[1:]):
            self.assertLess(x, y)

    def test_compare_with_rational(self):
        tau_minus_one = QuadraticOrder.golden().element(-1, 1)
        self.assertLess(tau_minus_one, 1)
        self.assertGreater(tau_minus_one, 0.6)

    def test_order_without_real_roots_rejected(self):
        with self.assertRaises(ConfigurationError):
            QuadraticOrder(1, -1)


class FibonacciNumberTests(SimpleTestCase):
    def test_values(self):
        self.assertEqual(fibonacci(0), 0)
        self.assertEqual(fibonacci(1), 1)
        self.assertEqual(fibonacci(10), 55)
        self.assertEqual(fibonacci(-1), 1)
        self.assertEqual(fibonacci(-2), -1)

    def test_overflow_is_reported(self):
        with self.assertRaises(CoefficientOverflowError):
            fibonacci(200)


class SpectralDataTests(SimpleTestCase):
    def test_fibonacci(self):
        data = spectral_data(IntegerMatrix(((1, 1), (1, 0))))
        self.assertAlmostEqual(data.pf_eigenvalue, TAU, places=12)
        self.assertAlmostEqual(data.moduli[1], 1 / TAU, places=12)
        self.assertAlmostEqual(float(data.right.sum()), 1.0)
        self.assertAlmostEqual(float(data.left.min()), 1.0)
        self.assertAlmostEqual(float(data.left.max()), TAU, places=10)

    def test_period_doubling(self):
        data = spectral_data(IntegerMatrix(((1, 2), (1, 0))))
        self.assertEqual(sorted(round(x.real, 10) for x in data.eigenvalues), [-1.0, 2.0])
        self.assertAlmostEqual(data.right[0], 2 / 3)

    def test_kolakoski(self):
        # a -> abc, b -> ab, c -> b
        M = IntegerMatrix(((1, 1, 0), (1, 1, 1), (1, 0, 0)))
        data = spectral_data(M)
        self.assertAlmostEqual(data.pf_eigenvalue, 2.205569, places=6)
        self.assertAlmostEqual(data.pf_eigenvalue * data.moduli[1] ** 2, abs(M.determinant), places=10)

    def test_plastic(self):
        M = IntegerMatrix(((0, 0, 1), (1, 0, 1), (0, 1, 0)))
        data = spectral_data(M)
        self.assertAlmostEqual(data.pf_eigenvalue ** 3, data.pf_eigenvalue + 1, places=10)
        self.assertAlmostEqual(data.pf_eigenvalue * data.moduli[1] ** 2, 1.0, places=10)

    def test_non_primitive_rejected(self):
        with self.assertRaises(ConfigurationError):
            spectral_data(IntegerMatrix(((1, 0), (0, 1))))

    def test_characteristic_polynomial(self):
        M = IntegerMatrix(((1, 1, 0), (1, 1, 1), (1, 0, 0)))
        self.assertEqual(M.characteristic_polynomial(), [1, -2, 0, -1])

    def test_no_warning_for_separated_spectrum(self):
        with warnings.catch_warnings():
            warnings.simplefilter('error', SpectralConditioningWarning)
            spectral_data(IntegerMatrix(((2, 1), (1, 0))))


class LyapunovSpectrumTests(SimpleTestCase):
    def test_fibonacci(self):
        spectrum = lyapunov_spectrum(IntegerMatrix(((1, 1), (1, 0))))
        self.assertEqual(len(spectrum), 2)
        self.assertAlmostEqual(spectrum[0], math.log(TAU))
        self.assertAlmostEqual(spectrum[1], -math.log(TAU))

    def test_identity(self):
        self.assertEqual(lyapunov_spectrum(IntegerMatrix.identity(2)), [0.0])

    def test_kolakoski(self):
        spectrum = lyapunov_spectrum(IntegerMatrix(((1, 1, 0), (1, 1, 1), (1, 0, 0))))
        lam = spectral_data(IntegerMatrix(((1, 1, 0), (1, 1, 1), (1, 0, 0)))).pf_eigenvalue
        self.assertEqual(len(spectrum), 2)
        self.assertAlmostEqual(spectrum[0], math.log(lam))
        self.assertAlmostEqual(spectrum[1], -0.5 * math.log(lam))

    def test_zero_eigenvalue(self):
        spectrum = lyapunov_spectrum(IntegerMatrix(((1, 1), (1, 1))))
        self.assertAlmostEqual(spectrum[0], math.log(2))
        self.assertEqual(spectrum[-1], float('-inf'))
