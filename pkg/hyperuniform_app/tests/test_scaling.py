import io
import math

import numpy as np
from django.test import SimpleTestCase

from hyperuniform_app import producers
from hyperuniform_app.exceptions import ConfigurationError, NumericalError, ScanError
from hyperuniform_app.scaling import (
    ScanResult, fit_log_quadratic, fit_power, read_scan_csv, report, scan,
)

TAU = (1 + math.sqrt(5)) / 2


def power_law(prefactor, exponent):
    def evaluate(k):
        return prefactor * k ** exponent
    return evaluate


class ScanTests(SimpleTestCase):
    def test_constant_producer(self):
        result = scan(lambda k: 3.0, 1.0, 2.0, 5)
        np.testing.assert_allclose(result.Z, 3.0)
        np.testing.assert_allclose(result.k, [1, 0.5, 0.25, 0.125, 0.0625])

    def test_tuple_values_are_accepted(self):
        result = scan(lambda k: (k, 1e-20), 1.0, 2.0, 4)
        np.testing.assert_allclose(result.Z, result.k)

    def test_fibonacci_scan_is_decreasing(self):
        result = scan(producers.get_producer('fibonacci'), 0.4, TAU, 10)
        self.assertEqual(len(result), 10)
        self.assertTrue(np.all(np.diff(result.log_z) < 0))

    def test_thue_morse_scan_stays_in_log_space(self):
        result = scan(producers.get_producer('thue-morse'), 0.5, 2.0, 12)
        self.assertTrue(np.all(np.isfinite(result.log_z)))
        self.assertLess(result.log_z[-1], -80)
        self.assertGreater(result.log_z[-1], -98)

    def test_validation(self):
        with self.assertRaises(ConfigurationError):
            scan(lambda k: k, 1.0, 1.0, 5)
        with self.assertRaises(ConfigurationError):
            scan(lambda k: k, 1.0, 2.0, 2)
        with self.assertRaises(ConfigurationError):
            scan(lambda k: k, 0.0, 2.0, 5)

    def test_failures_are_collected(self):
        def flaky(k):
            if k < 0.2:
                raise NumericalError("too small")
            return k

        with self.assertRaises(ScanError) as raised:
            scan(flaky, 1.0, 2.0, 5, name='flaky')
        self.assertEqual(len(raised.exception.failures), 2)
        self.assertTrue(np.all(np.isfinite(raised.exception.partial.log_z[:3])))

    def test_csv_round_trip(self):
        result = scan(power_law(2.0, 3.0), 0.5, 2.0, 6)
        handle = io.StringIO()
        result.write_csv(handle)
        handle.seek(0)
        restored = read_scan_csv(handle)
        np.testing.assert_allclose(restored.log_z, result.log_z)
        self.assertAlmostEqual(restored.ratio, 2.0)

    def test_malformed_csv_names_the_line(self):
        handle = io.StringIO("k,Z\n0.1,0.01\n0.05,abc\n")
        with self.assertRaisesMessage(ConfigurationError, 'line 3'):
            read_scan_csv(handle)

    def test_csv_without_columns(self):
        with self.assertRaisesMessage(ConfigurationError, 'line 1'):
            read_scan_csv(io.StringIO("x,y\n1,2\n"))


class PowerFitTests(SimpleTestCase):
    def test_exact_power_law(self):
        fit = fit_power(scan(power_law(7.0, 4.0), 0.5, 2.0, 8), drop=0)
        self.assertAlmostEqual(fit.exponent, 4.0, places=10)
        self.assertAlmostEqual(fit.log_prefactor, math.log(7.0), places=9)
        self.assertLess(fit.max_residual, 1e-9)
        self.assertTrue(fit.within_decade)

    def test_rescaling_leaves_the_exponent(self):
        first = fit_power(scan(power_law(1.0, 2.5), 0.5, 3.0, 8))
        second = fit_power(scan(power_law(1e6, 2.5), 0.5, 3.0, 8))
        self.assertAlmostEqual(first.exponent, second.exponent, places=10)
        self.assertAlmostEqual(second.log_prefactor - first.log_prefactor, math.log(1e6), places=8)

    def test_labels(self):
        result = scan(power_law(1.0, 1.7), 0.5, 2.0, 8)
        self.assertFalse(fit_power(result, predicted=1.5, tol=0.05).passed)
        self.assertTrue(fit_power(result, predicted=1.5, tol=0.05, label='upper-bound-only').passed)
        self.assertFalse(fit_power(result, predicted=2.0, tol=0.05, label='upper-bound-only').passed)
        self.assertIsNone(fit_power(result).passed)

    def test_spread_against_prediction(self):
        fit = fit_power(scan(power_law(1.0, 3.0), 0.5, 2.0, 10), predicted=2.0, drop=0)
        self.assertAlmostEqual(fit.spread, 9 * math.log(2.0))
        self.assertFalse(fit.within_decade)

    def test_needs_four_samples(self):
        with self.assertRaises(ConfigurationError):
            fit_power(scan(power_law(1.0, 2.0), 0.5, 2.0, 5))

    def test_zero_samples_rejected(self):
        with self.assertRaises(ConfigurationError):
            fit_power(scan(lambda k: 0.0, 0.5, 2.0, 8))


class LogQuadraticFitTests(SimpleTestCase):
    def test_exact_log_quadratic(self):
        log_k = -np.arange(8) * math.log(2) - math.log(4)
        log_z = -log_k ** 2 / math.log(2)
        data = ScanResult('synthetic', 2.0, 0.25, 8, log_k, log_z)
        fit = fit_log_quadratic(data, predicted=-1 / math.log(2))
        self.assertAlmostEqual(fit.A, -1 / math.log(2), places=8)
        self.assertAlmostEqual(fit.B, 0.0, places=7)
        self.assertTrue(fit.passed)

    def test_power_law_has_no_curvature(self):
        fit = fit_log_quadratic(scan(power_law(5.0, 2.0), 0.5, 2.0, 8))
        self.assertLess(abs(fit.A), 1e-8)
        self.assertAlmostEqual(fit.B, 2.0, places=6)

    def test_thue_morse_curvature(self):
        producer = producers.get_producer('thue-morse')
        fit = producers.fit_producer(producer)
        self.assertAlmostEqual(fit.A, -1 / math.log(2), delta=0.05)
        self.assertTrue(fit.passed)

    def test_needs_five_samples(self):
        with self.assertRaises(ConfigurationError):
            fit_log_quadratic(scan(power_law(1.0, 2.0), 0.5, 2.0, 4))


class ReportTests(SimpleTestCase):
    def test_empty_report(self):
        with self.assertRaises(ConfigurationError):
            report()

    def test_rows_and_table(self):
        result = scan(power_law(1.0, 2.0), 0.5, 2.0, 8)
        summary = report(fit_power(result, 2.0, 0.1), fit_power(result, 3.0, 0.1))
        self.assertFalse(summary.all_passed)
        self.assertEqual([row['passed'] for row in summary.rows], [True, False])
        self.assertIn('FAIL', summary.as_table())
        handle = io.StringIO()
        summary.write_csv(handle)
        self.assertTrue(handle.getvalue().startswith('system,model,measured,predicted'))


class CatalogueFitTests(SimpleTestCase):
    def test_fibonacci(self):
        fit = producers.fit_producer(producers.get_producer('fibonacci'))
        self.assertAlmostEqual(fit.exponent, 4.0, delta=0.1)
        self.assertTrue(fit.passed)
        self.assertTrue(fit.within_decade)

    def test_generic_window_is_slower(self):
        fit = producers.fit_producer(producers.get_producer('fibonacci-generic'))
        self.assertEqual(fit.label, 'upper-bound-only')
        self.assertLess(fit.exponent, 3.0)

    def test_generalised_thue_morse(self):
        fit = producers.fit_producer(producers.get_producer('gtm(3,1)'))
        self.assertAlmostEqual(fit.exponent, 1.0, delta=0.05)

    def test_cocycle_entry(self):
        fit = producers.fit_producer(producers.get_producer('period-doubling'))
        self.assertEqual(fit.label, 'cocycle')
        self.assertTrue(fit.passed)

    def test_stochastic_entries(self):
        summary = producers.fit_catalogue(['poisson', 'markov', 'rmt(2)', 'random-tiling'])
        self.assertTrue(summary.all_passed, summary.as_table())
        self.assertEqual(len(summary.rows), 4)

    def test_unknown_entry(self):
        with self.assertRaisesMessage(ConfigurationError, 'fibonacci'):
            producers.get_producer('penrose')

    def test_empty_selection(self):
        with self.assertRaises(ConfigurationError):
            producers.fit_catalogue([])
