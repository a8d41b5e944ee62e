import io
import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from hyperuniform_app.exceptions import ConfigurationError, UnderResolvedError
from hyperuniform_app.riesz import (
    F_fourier, F_quadrature, F_scaled, distribution, eta, eta_array, f_n, gtm_exponent, theta, theta_at_zero,
    theta_modulus, theta_x2_coefficient, tm_beta, tm_bound_report, tm_bounds, tm_improved_lower,
    tm_lower_constants, tm_prefactor_exponent, tm_upper_constants,
)
from hyperuniform_app.substitution import apply, catalogue


class FactorTests(SimpleTestCase):
    def test_thue_morse_factor(self):
        x = np.linspace(0, 1, 17)
        np.testing.assert_allclose(theta(1, 1, x), 1 - np.cos(2 * np.pi * x), atol=1e-12)

    def test_value_at_zero(self):
        self.assertAlmostEqual(float(theta(2, 1, 0.0)), 1 / 3)
        self.assertEqual(theta_at_zero(2, 1), Fraction(1, 3))

    def test_cosine_and_modulus_forms_agree(self):
        x = np.linspace(0, 1, 101)
        for p, q in ((2, 1), (3, 2), (4, 1)):
            np.testing.assert_allclose(theta(p, q, x), theta_modulus(p, q, x), atol=1e-12)

    def test_small_x_coefficient(self):
        self.assertEqual(theta_x2_coefficient(1, 1), 2)
        x = 1e-4
        expected = float(theta_at_zero(3, 1)) + float(theta_x2_coefficient(3, 1)) * (math.pi * x) ** 2
        self.assertAlmostEqual(float(theta(3, 1, x)), expected, places=10)

    def test_empty_product(self):
        np.testing.assert_array_equal(f_n(1, 1, np.array([0.1, 0.7]), 0), [1.0, 1.0])

    def test_invalid_parameters(self):
        with self.assertRaises(ConfigurationError):
            theta(0, 1, 0.5)


class FourierSeriesTests(SimpleTestCase):
    def test_coefficients(self):
        self.assertEqual(eta(0), 1)
        self.assertEqual(eta(1), Fraction(-1, 3))
        self.assertEqual(eta(2), Fraction(-1, 3))
        np.testing.assert_allclose(eta_array(64), [float(eta(m)) for m in range(64)])

    def test_coefficients_match_word_correlations(self):
        rule = catalogue('thue-morse')
        codes = rule.encode('a')
        for _ in range(16):
            codes = apply(rule, codes)
        self.assertEqual(len(codes), 2 ** 16)
        signs = np.where(codes == 0, 1.0, -1.0)
        for m in range(65):
            counted = float(signs[:len(signs) - m] @ signs[m:]) / (len(signs) - m)
            self.assertAlmostEqual(counted, float(eta(m)), delta=1e-2, msg=f"m = {m}")

    def test_end_points(self):
        self.assertAlmostEqual(F_fourier(1.0, 4096)[0], 1.0, places=9)
        self.assertAlmostEqual(F_fourier(0.5, 4096)[0], 0.5, places=9)
        self.assertEqual(F_fourier(0.0, 16)[0], 0.0)

    def test_inside_bracket(self):
        for n in (2, 3, 4):
            value, _ = F_fourier(2.0 ** -n, 2 ** 18)
            bounds = tm_bounds(n)
            self.assertLessEqual(bounds.lower, value)
            self.assertLessEqual(value, bounds.upper)

    def test_range_check(self):
        with self.assertRaises(ConfigurationError):
            F_fourier(1.5, 10)


class QuadratureTests(SimpleTestCase):
    def test_total_mass(self):
        self.assertAlmostEqual(F_quadrature(1, 1, 1.0, 6), 1.0, places=6)
        self.assertAlmostEqual(F_quadrature(2, 1, 1.0, 4), 1.0, places=6)

    def test_under_resolved_grid(self):
        with self.assertRaises(UnderResolvedError) as raised:
            F_quadrature(1, 1, 0.5, 10, grid=100)
        self.assertEqual(raised.exception.required, 8 * 2 ** 10)

    def test_distribution_is_monotone(self):
        samples = distribution(1, 1, [0.1, 0.25, 0.5, 0.75, 1.0], 8)
        self.assertTrue(samples.is_monotone())
        handle = io.StringIO()
        samples.write_csv(handle)
        self.assertEqual(handle.getvalue().splitlines()[0], 'k,F,method,n_trunc')

    def test_fourier_method_is_thue_morse_only(self):
        with self.assertRaises(ConfigurationError):
            distribution(2, 1, [0.5], 4, method='fourier')


class ScaledEvaluationTests(SimpleTestCase):
    def test_agrees_with_fourier_series(self):
        log_value, J = F_scaled(1, 1, 3)
        self.assertGreater(J, 10)
        self.assertAlmostEqual(math.exp(log_value) / F_fourier(1 / 8, 2 ** 18)[0], 1.0, delta=0.01)

    def test_inside_bracket(self):
        for n in (4, 8, 12):
            log_value, _ = F_scaled(1, 1, n)
            bounds = tm_bounds(n)
            self.assertLessEqual(bounds.log_lower, log_value)
            self.assertLessEqual(log_value, bounds.log_upper)

    def test_gtm_ratio(self):
        # F(b**-(n+1)) / F(b**-n) -> theta(0) / b
        first, _ = F_scaled(3, 1, 5)
        second, _ = F_scaled(3, 1, 6)
        self.assertAlmostEqual(math.exp(second - first), 1 / 4, delta=0.01)


class ThueMorseBoundTests(SimpleTestCase):
    def test_bracket_is_ordered(self):
        for n in range(1, 20):
            bounds = tm_bounds(n)
            self.assertLess(bounds.log_lower, bounds.log_upper)

    def test_first_bracket(self):
        bounds = tm_bounds(1)
        self.assertAlmostEqual(bounds.upper, 1.0)
        self.assertAlmostEqual(bounds.lower, 0.5)

    def test_upper_constant(self):
        self.assertAlmostEqual(tm_upper_constants().limit, 0.3067, delta=0.0005)

    def test_lower_constant(self):
        self.assertAlmostEqual(tm_lower_constants().limit, 0.7567, delta=0.002)

    def test_beta(self):
        self.assertAlmostEqual(tm_beta(100_000), 0.3099, delta=0.0002)

    def test_improved_lower_bound(self):
        beta = tm_beta(100_000)
        for n in (4, 8):
            self.assertGreaterEqual(tm_improved_lower(n, beta=beta), tm_bounds(n).log_lower)

    def test_prefactor_exponent_lies_between_the_bounds(self):
        # upper bound has s = 0, lower bound s = 2
        s = tm_prefactor_exponent()
        self.assertGreater(s, 0.0)
        self.assertLess(s, 2.0)

    def test_report(self):
        report = tm_bound_report(10)
        self.assertEqual(report['n'], 10)
        self.assertLessEqual(report['lower'], report['F_est'])
        self.assertLessEqual(report['F_est'], report['upper'])


class GeneralisedExponentTests(SimpleTestCase):
    def test_values(self):
        self.assertAlmostEqual(gtm_exponent(2, 1), 2.0)
        self.assertAlmostEqual(gtm_exponent(3, 1), 1.0)
        self.assertAlmostEqual(gtm_exponent(5, 1), 0.4527, delta=0.001)
        self.assertEqual(gtm_exponent(1, 1), math.inf)
