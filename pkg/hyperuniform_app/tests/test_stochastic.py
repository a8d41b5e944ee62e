import io
import math

import numpy as np
from django.test import SimpleTestCase

from hyperuniform_app.exceptions import ConfigurationError, UnderResolvedError
from hyperuniform_app.stochastic import (
    AnalyticModel, WeightedRealisation, bragg_intensity, density, empirical_diffraction, empirical_Z, make_rng,
    markov_expansion, periodogram, random_tiling_coefficients, rmt_density, rmt_expansion, sample,
    write_analytic_csv, z_analytic,
)
from hyperuniform_app.substitution import catalogue, patch_of_radius

TAU = (1 + math.sqrt(5)) / 2


class AnalyticDistributionTests(SimpleTestCase):
    def test_poisson(self):
        self.assertEqual(z_analytic(AnalyticModel.poisson(), 0.37), 0.37)

    def test_lattice(self):
        model = AnalyticModel.lattice()
        self.assertEqual(z_analytic(model, 0.5), 0.0)
        self.assertEqual(z_analytic(model, 2.5), 2.0)

    def test_bernoulli(self):
        model = AnalyticModel.bernoulli(0.3)
        self.assertAlmostEqual(z_analytic(model, 0.4), 0.3 * 0.7 * 0.4)
        self.assertAlmostEqual(z_analytic(model, 1.5), 0.3 * 0.7 * 1.5 + 0.09)
        signed = AnalyticModel.bernoulli(0.3, weighting='pm')
        self.assertAlmostEqual(z_analytic(signed, 1.5), 4 * 0.3 * 0.7 * 1.5 + 0.16)

    def test_markov_without_memory(self):
        model = AnalyticModel.markov(0.3, 0.7)
        self.assertAlmostEqual(model.r, 0.0)
        self.assertAlmostEqual(z_analytic(model, 0.25), 0.7 * 0.3 * 0.25, places=12)

    def test_markov_expansion(self):
        k = 1e-2
        exact = z_analytic(AnalyticModel.markov(0.25, 0.25), k)
        self.assertAlmostEqual(markov_expansion(0.25, 0.25, k) / exact, 1.0, delta=1e-7)

    def test_markov_bragg_part(self):
        model = AnalyticModel.markov(0.25, 0.25)
        self.assertAlmostEqual(model.rho, 0.5)
        below, above = z_analytic(model, 0.999999), z_analytic(model, 1.000001)
        self.assertAlmostEqual(above - below, 0.25, places=4)

    def test_markov_needs_mixing(self):
        with self.assertRaises(ConfigurationError):
            AnalyticModel.markov(1.0, 1.0)

    def test_rmt_values(self):
        self.assertAlmostEqual(z_analytic(AnalyticModel.rmt(2), 0.1), 0.005, places=12)
        self.assertEqual(rmt_density(2, 0.5), 0.5)
        self.assertEqual(rmt_density(4, 1.0), math.inf)
        self.assertEqual(rmt_density(1, 3.0), 2 - 3 * math.log(7 / 5))

    def test_rmt_expansions(self):
        for beta in (1, 2, 4):
            exact = z_analytic(AnalyticModel.rmt(beta), 1e-2)
            self.assertAlmostEqual(exact, rmt_expansion(beta, 1e-2), delta=1e-8)

    def test_rmt_across_singularity(self):
        value = z_analytic(AnalyticModel.rmt(4), 1.5)
        self.assertTrue(math.isfinite(value))
        self.assertGreater(value, z_analytic(AnalyticModel.rmt(4), 0.9))

    def test_rmt_beta_checked(self):
        with self.assertRaises(ConfigurationError):
            AnalyticModel.rmt(3)

    def test_random_tiling_equal_lengths(self):
        self.assertEqual(z_analytic(AnalyticModel.random_tiling(1.0, 1.0, 0.5), 0.2), 0.0)

    def test_random_tiling_slope(self):
        model = AnalyticModel.random_tiling(1.0, TAU, 0.5)
        c1, c3 = random_tiling_coefficients(1.0, TAU, 0.5)
        self.assertTrue(math.isfinite(c3))
        self.assertAlmostEqual(z_analytic(model, 1e-4) / 1e-4 / c1, 1.0, delta=1e-3)
        h = 1e-6
        quotient = (z_analytic(model, 0.1 + h) - z_analytic(model, 0.1 - h)) / (2 * h)
        self.assertAlmostEqual(quotient / density(model, 0.1), 1.0, delta=1e-3)

    def test_rudin_shapiro_is_homometric_with_poisson(self):
        for p in (0.0, 0.5, 1.0):
            self.assertEqual(z_analytic(AnalyticModel.rudin_shapiro(p), 0.3), 0.3)

    def test_k_must_be_positive(self):
        with self.assertRaises(ConfigurationError):
            z_analytic(AnalyticModel.poisson(), 0)

    def test_csv(self):
        handle = io.StringIO()
        write_analytic_csv(AnalyticModel.poisson(), [0.1, 0.2], handle)
        self.assertEqual(handle.getvalue().splitlines()[0], 'k,Z,model')


class SamplingTests(SimpleTestCase):
    def test_poisson_count(self):
        real = sample(AnalyticModel.poisson(), 10_000, seed=7)
        self.assertLess(abs(len(real) - 20_000), 4 * math.sqrt(20_000))
        self.assertTrue(np.all(np.diff(real.positions) >= 0))

    def test_deterministic(self):
        first = sample(AnalyticModel.poisson(), 1000, seed=7)
        second = sample(AnalyticModel.poisson(), 1000, seed=7)
        np.testing.assert_array_equal(first.positions, second.positions)
        other = sample(AnalyticModel.poisson(), 1000, seed=7, stream=1)
        self.assertFalse(np.array_equal(first.positions, other.positions))

    def test_full_bernoulli_occupies_every_site(self):
        real = sample(AnalyticModel.bernoulli(1.0), 100.5, seed=1)
        np.testing.assert_array_equal(real.positions, np.arange(-100, 101))

    def test_markov_occupation(self):
        model = AnalyticModel.markov(0.25, 0.5)
        real = sample(model, 100_000, seed=3)
        self.assertAlmostEqual(len(real) / 200_001, model.rho, delta=0.01)

    def test_random_tiling_gaps(self):
        real = sample(AnalyticModel.random_tiling(1.0, TAU, 0.5), 500, seed=2)
        gaps = np.unique(np.round(np.diff(real.positions), 9))
        np.testing.assert_allclose(gaps, [1.0, TAU], rtol=1e-9)
        self.assertIn(0.0, real.positions.tolist())

    def test_random_matrix_models_have_no_sampler(self):
        with self.assertRaises(ConfigurationError):
            sample(AnalyticModel.rmt(2), 10)

    def test_negative_seed(self):
        with self.assertRaises(ConfigurationError):
            make_rng(-1)

    def test_csv(self):
        handle = io.StringIO()
        sample(AnalyticModel.lattice(), 2, seed=0).write_csv(handle)
        self.assertEqual(handle.getvalue().splitlines(), ['position,weight', '-2,1', '-1,1', '0,1', '1,1', '2,1'])


class PeriodogramTests(SimpleTestCase):
    def test_single_point(self):
        real = WeightedRealisation(np.array([0.0]), np.array([1.0]), 0.5)
        for _k, value in empirical_diffraction(real, [0.0, 0.3, 1.7]):
            self.assertAlmostEqual(value, 1.0)

    def test_lattice_central_peak(self):
        real = sample(AnalyticModel.lattice(), 50, seed=0)
        [(_k, value)] = empirical_diffraction(real, [0.0])
        self.assertAlmostEqual(value, 101 ** 2 / 100)

    def test_bragg_heights(self):
        self.assertAlmostEqual(bragg_intensity(sample(AnalyticModel.lattice(), 1000), 1.0), 1.0, delta=0.01)
        gas = sample(AnalyticModel.bernoulli(0.5), 10_000, seed=4)
        self.assertAlmostEqual(bragg_intensity(gas, 1.0), 0.25, delta=0.01)

    def test_rudin_shapiro_average_is_flat(self):
        real = sample(AnalyticModel.rudin_shapiro(0.0), 2 ** 15)
        grid = periodogram(real, 0.5)
        self.assertAlmostEqual(float(np.mean(grid.intensity[1:])), 1.0, delta=0.05)

    def test_off_lattice_grid(self):
        real = sample(AnalyticModel.poisson(), 1000, seed=5)
        grid = periodogram(real, 0.25)
        self.assertAlmostEqual(grid.spacing, 1 / 2000)
        self.assertAlmostEqual(grid.k[-1], 0.25)
        handle = io.StringIO()
        grid.write_csv(handle)
        self.assertEqual(handle.getvalue().splitlines()[0], 'k,intensity')

    def test_patch_realisation(self):
        patch = patch_of_radius(catalogue('fibonacci'), 200)
        real = WeightedRealisation.from_patch(patch)
        self.assertEqual(len(real), len(patch))
        self.assertFalse(real.on_lattice)


class EmpiricalDistributionTests(SimpleTestCase):
    def test_poisson(self):
        real = sample(AnalyticModel.poisson(), 100_000, seed=11)
        estimate = empirical_Z(real, 0.2)
        self.assertAlmostEqual(estimate.value, 0.2, delta=0.01)
        self.assertLess(estimate.stderr, 0.005)

    def test_bernoullised_rudin_shapiro(self):
        real = sample(AnalyticModel.rudin_shapiro(0.5), 100_000, seed=12)
        self.assertAlmostEqual(empirical_Z(real, 0.2).value, 0.2, delta=0.01)

    def test_homometry_of_rudin_shapiro(self):
        for p in (0.0, 0.5):
            estimate = empirical_Z(sample(AnalyticModel.rudin_shapiro(p), 100_000, seed=13), 0.2)
            self.assertLess(abs(estimate.value - 0.2), 3 * estimate.stderr + 0.01)

    def test_markov_against_quadrature(self):
        model = AnalyticModel.markov(0.25, 0.25)
        estimate = empirical_Z(sample(model, 100_000, seed=14), 0.3)
        self.assertLess(abs(estimate.value - z_analytic(model, 0.3)), 4 * estimate.stderr)

    def test_bins_must_resolve_the_grid(self):
        real = sample(AnalyticModel.poisson(), 1000, seed=1)
        with self.assertRaises(UnderResolvedError) as raised:
            empirical_Z(real, 0.2, bins=10)
        self.assertEqual(raised.exception.required, 400)
        self.assertEqual(empirical_Z(real, 0.2, bins=400).k, 0.2)
