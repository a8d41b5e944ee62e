import io
import math

import numpy as np
from django.test import SimpleTestCase

from hyperuniform_app.exceptions import ConfigurationError
from hyperuniform_app.stochastic import make_rng
from hyperuniform_app.substitution import (
    CATALOGUE, bernoullise, catalogue, fixed_point_word, geometric_patch, inflate_patch, legal_words,
    patch_of_radius, rudin_shapiro_weights,
)

TAU = (1 + math.sqrt(5)) / 2


def brute_force_rudin_shapiro(n):
    """Sign (-1)**(number of adjacent 11 pairs in binary m)."""
    return [(-1) ** bin(m & (m >> 1)).count('1') for m in range(n)]


class CatalogueTests(SimpleTestCase):
    def test_fibonacci_rule(self):
        rule = catalogue('fibonacci')
        self.assertEqual(rule.images, ('ab', 'a'))
        self.assertAlmostEqual(rule.pf_eigenvalue, TAU)

    def test_noble_rule(self):
        rule = catalogue('noble', p=2)
        self.assertEqual(rule.matrix.rows, ((2, 1), (1, 0)))
        self.assertAlmostEqual(rule.pf_eigenvalue, 1 + math.sqrt(2))

    def test_gtm_one_one_is_thue_morse(self):
        rule = catalogue('gtm', 1, 1)
        self.assertEqual(rule.name, 'thue-morse')
        self.assertEqual(rule.images, ('ab', 'ba'))

    def test_every_entry_builds(self):
        for name in CATALOGUE:
            rule = catalogue(name, p=2, q=1)
            self.assertTrue(rule.matrix.is_primitive(), name)

    def test_unknown_name(self):
        with self.assertRaisesMessage(ConfigurationError, 'fibonacci'):
            catalogue('penrose')

    def test_missing_parameter(self):
        with self.assertRaises(ConfigurationError):
            catalogue('noble')


class FixedPointWordTests(SimpleTestCase):
    def test_zero_iterations_returns_seed(self):
        word = fixed_point_word(catalogue('fibonacci'), 'a|a', 0)
        self.assertEqual(str(word), 'a|a')

    def test_fibonacci_growth(self):
        rule = catalogue('fibonacci')
        word = fixed_point_word(rule, 'a|a', 1)
        self.assertEqual(str(word), 'aba|aba')
        counts = word.letter_counts()
        self.assertEqual(counts.tolist(), [4, 2])
        word = fixed_point_word(rule, 'a|a', 5)
        self.assertEqual(len(word), 2 * 144)

    def test_period_doubling_frequencies(self):
        word = fixed_point_word(catalogue('period-doubling'), 'a|a', 8)
        counts = word.letter_counts()
        self.assertAlmostEqual(counts[0] / counts.sum(), 2 / 3, places=3)

    def test_illegal_seed_names_word(self):
        with self.assertRaisesMessage(ConfigurationError, "'bb'"):
            fixed_point_word(catalogue('fibonacci'), 'b|b', 1)

    def test_legal_words_of_fibonacci(self):
        self.assertEqual(legal_words(catalogue('fibonacci')), frozenset({'aa', 'ab', 'ba'}))


class GeometricPatchTests(SimpleTestCase):
    def test_fibonacci_gaps(self):
        patch = geometric_patch(fixed_point_word(catalogue('fibonacci'), 'a|a', 4))
        self.assertTrue(patch.is_exact)
        self.assertEqual(patch.exact_gaps(), {(0, 1), (1, 0)})
        gaps = np.unique(np.round(patch.gaps(), 9))
        np.testing.assert_allclose(gaps, [1.0, TAU], rtol=1e-9)

    def test_origin_and_neighbours(self):
        patch = geometric_patch(fixed_point_word(catalogue('fibonacci'), 'a|a', 1))
        np.testing.assert_allclose(patch.positions, [-2 * TAU - 1, -TAU - 1, -TAU, 0, TAU, TAU + 1], rtol=1e-12)

    def test_seed_patch_contains_origin(self):
        rule = catalogue('fibonacci')
        word = fixed_point_word(rule, 'a|a', 0)
        patch = geometric_patch(word)
        self.assertIn(0.0, patch.positions.tolist())

    def test_non_positive_length_rejected(self):
        word = fixed_point_word(catalogue('period-doubling'), 'a|a', 1)
        with self.assertRaises(ConfigurationError):
            geometric_patch(word, lengths=(1.0, 0.0))

    def test_patch_of_radius_covers_window(self):
        patch = patch_of_radius(catalogue('period-doubling'), 50)
        self.assertEqual(patch.radius, 50)
        self.assertTrue(np.all(np.abs(patch.positions) <= 50))
        self.assertGreater(len(patch), 90)

    def test_inflation_keeps_the_point_set_self_similar(self):
        rule = catalogue('fibonacci')
        small = geometric_patch(fixed_point_word(rule, 'a|a', 2))
        big = geometric_patch(fixed_point_word(rule, 'a|a', 3))
        inflated = inflate_patch(rule, inflate_patch(rule, small))
        R = min(inflated.radius, big.radius)
        self.assertEqual(
            inflated.restrict(R).coefficient_set(),
            big.restrict(R).coefficient_set(),
        )

    def test_csv_columns(self):
        patch = geometric_patch(fixed_point_word(catalogue('fibonacci'), 'a|a', 1))
        handle = io.StringIO()
        patch.write_csv(handle)
        lines = handle.getvalue().splitlines()
        self.assertEqual(lines[0], 'position,type,a,b')
        self.assertEqual(len(lines), len(patch) + 1)


class RudinShapiroTests(SimpleTestCase):
    def test_first_weights(self):
        self.assertEqual(rudin_shapiro_weights(1).tolist(), [1])
        self.assertEqual(rudin_shapiro_weights(4).tolist(), [1, 1, 1, -1])

    def test_against_binary_rule(self):
        self.assertEqual(rudin_shapiro_weights(1000).tolist(), brute_force_rudin_shapiro(1000))


class BernoulliseTests(SimpleTestCase):
    def setUp(self):
        self.weights = rudin_shapiro_weights(100_000)

    def test_no_flips(self):
        np.testing.assert_array_equal(bernoullise(self.weights, 0.0, make_rng(1)), self.weights)

    def test_all_flipped(self):
        np.testing.assert_array_equal(bernoullise(self.weights, 1.0, make_rng(1)), -self.weights)

    def test_flip_rate(self):
        flipped = bernoullise(self.weights, 0.5, make_rng(3))
        rate = np.mean(flipped != self.weights)
        sigma = math.sqrt(0.25 / len(self.weights))
        self.assertLess(abs(rate - 0.5), 4 * sigma)

    def test_probability_range(self):
        with self.assertRaises(ConfigurationError):
            bernoullise(self.weights, 1.5, make_rng(1))
