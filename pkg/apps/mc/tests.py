import math

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, override_settings, tag

from apps.exact.engines import brute_force_distribution
from apps.exact.formulas import exact_offdiag_marginal
from apps.exact.statistics import distribution_stats
from apps.limits.densities import DensityKind, DensityQuery, limit_density
from apps.permcore.exceptions import ResourceLimitError
from apps.permcore.schema import ShuffleKind

from .estimators import (
    UNIFORM, Estimate, Statistic, convergence_report, estimate_marginal_row, estimate_statistic,
    scaled_index,
)

CARD = ShuffleKind.CARD_TRANSPOSITION
POS = ShuffleKind.POSITION_TRANSPOSITION
SEED = 271828182


class MarginalRowTests(SimpleTestCase):
    def test_two_cards(self):
        row = estimate_marginal_row(CARD, 2, 1, 20000, SEED)
        for estimate in row:
            self.assertLess(abs(estimate.value - 0.5), 4 * estimate.stderr)
            self.assertEqual(estimate.samples, 20000)
            self.assertEqual(estimate.seed, SEED)

    def test_single_card(self):
        row = estimate_marginal_row(CARD, 1, 1, 10, SEED)
        self.assertEqual(row, [Estimate(1.0, 0.0, 10, SEED)])

    def test_row_is_a_probability_vector(self):
        row = estimate_marginal_row(POS, 9, 4, 3000, SEED)
        values = [estimate.value for estimate in row]
        self.assertTrue(all(value >= 0 for value in values))
        self.assertEqual(sum(round(value * 3000) for value in values), 3000)
        self.assertAlmostEqual(math.fsum(values), 1.0, places=14)

    def test_matches_closed_form_at_one_hundred_cards(self):
        n, j = 100, 50
        row = estimate_marginal_row(CARD, n, j, 20000, SEED, threads=4)
        for a, estimate in enumerate(row, start=1):
            if a == j:
                continue
            exact = exact_offdiag_marginal(CARD, n, j, a)
            sigma = math.sqrt(exact * (1 - exact) / estimate.samples)
            with self.subTest(a=a):
                self.assertLessEqual(abs(estimate.value - exact), 5 * sigma + 1e-12)

    def test_domain(self):
        with self.assertRaises(ValidationError):
            estimate_marginal_row(CARD, 5, 6, 10, SEED)
        with self.assertRaises(ValidationError):
            estimate_marginal_row(CARD, 5, 1, 0, SEED)
        with self.assertRaises(ValidationError):
            estimate_marginal_row('riffle', 5, 1, 10, SEED)

    def test_work_guard(self):
        with override_settings(SHUFFLE_LAB={'MC_MAX_WORK': 1000}):
            with self.assertRaises(ResourceLimitError):
                estimate_marginal_row(CARD, 100, 1, 11, SEED)


class ReproducibilityTests(SimpleTestCase):
    def test_worker_count_does_not_change_estimates(self):
        with override_settings(SHUFFLE_LAB={'MC_BLOCK': 64}):
            runs = [estimate_statistic(POS, 12, 'derangement', 1000, SEED, threads=t) for t in (1, 4, 16)]
            rows = [estimate_marginal_row(CARD, 12, 3, 1000, SEED, threads=t) for t in (1, 4, 16)]
        self.assertEqual(runs[0], runs[1])
        self.assertEqual(runs[0], runs[2])
        self.assertEqual(rows[0], rows[1])
        self.assertEqual(rows[0], rows[2])

    def test_block_size_does_not_change_estimates(self):
        reference = estimate_statistic(CARD, 8, 'mean_fixed_points', 700, SEED)
        with override_settings(SHUFFLE_LAB={'MC_BLOCK': 33}):
            self.assertEqual(estimate_statistic(CARD, 8, 'mean_fixed_points', 700, SEED, threads=3), reference)

    def test_seed_changes_estimates(self):
        first = estimate_marginal_row(POS, 12, 6, 1000, SEED)
        second = estimate_marginal_row(POS, 12, 6, 1000, SEED + 1)
        self.assertNotEqual(first, second)


class StatisticTests(SimpleTestCase):
    def test_statistics_match_exact_engine(self):
        samples = 20000
        for kind in (CARD, POS):
            summary = distribution_stats(brute_force_distribution(kind, 5))
            with self.subTest(kind=kind.value):
                derangement = estimate_statistic(kind, 5, Statistic.DERANGEMENT, samples, SEED)
                self.assertLess(abs(derangement.value - float(summary.derangement_prob)), 5 * derangement.stderr)
                identity = estimate_statistic(kind, 5, Statistic.PROB_IDENTITY, samples, SEED)
                self.assertLess(abs(identity.value - float(summary.prob_identity)), 5 * identity.stderr)

    def test_mean_fixed_points_of_uniform_law(self):
        estimate = estimate_statistic(UNIFORM, 20, 'mean_fixed_points', 20000, SEED)
        self.assertLess(abs(estimate.value - 1.0), 4 * estimate.stderr)

    def test_unknown_statistic(self):
        with self.assertRaises(ValidationError):
            estimate_statistic(CARD, 5, 'cycles', 10, SEED)

    @tag('slow')
    def test_derangements_at_five_hundred_cards(self):
        position = estimate_statistic(POS, 500, 'derangement', 10 ** 6, SEED, threads=4)
        self.assertAlmostEqual(position.value, 0.436, delta=0.005)
        uniform = estimate_statistic(UNIFORM, 500, 'derangement', 10 ** 6, SEED, threads=4)
        self.assertAlmostEqual(uniform.value, math.exp(-1), delta=0.005)

    @tag('slow')
    def test_small_decks_at_a_million_samples(self):
        for n in range(2, 8):
            summary = distribution_stats(brute_force_distribution(POS, n))
            estimate = estimate_statistic(POS, n, 'prob_identity', 10 ** 6, SEED, threads=4)
            with self.subTest(n=n):
                self.assertLess(abs(estimate.value - float(summary.prob_identity)), 4 * estimate.stderr)

    @tag('slow')
    def test_reproducible_at_scale(self):
        runs = [estimate_statistic(POS, 500, 'derangement', 10 ** 5, SEED, threads=t) for t in (1, 4, 16)]
        self.assertEqual(runs[0], runs[1])
        self.assertEqual(runs[0], runs[2])


class ConvergenceReportTests(SimpleTestCase):
    def test_exact_mode_error_decreases(self):
        frame = convergence_report(CARD, 0.25, 0.75, (250, 500, 1000, 2000))
        self.assertEqual(list(frame.columns), ['n', 'finite', 'limit', 'abs_error'])
        errors = frame['abs_error'].tolist()
        self.assertTrue(all(later < earlier for earlier, later in zip(errors, errors[1:])), errors)

    def test_position_kind_at_two_thousand_cards(self):
        frame = convergence_report(POS, 0.75, 0.25, (2000,))
        expected = limit_density(DensityQuery(DensityKind.F_POS, 0.75, 0.25))
        self.assertEqual(frame['limit'].iloc[0], expected)
        self.assertLessEqual(frame['abs_error'].iloc[0], 0.05)

    def test_two_cards(self):
        for kind in (CARD, POS):
            frame = convergence_report(kind, 0.0, 1.0, (2,))
            self.assertAlmostEqual(frame['finite'].iloc[0], 1.0, places=14)

    def test_monte_carlo_mode(self):
        frame = convergence_report(CARD, 0.2, 0.6, (50,), mode='mc', samples=5000, seed=SEED)
        exact = convergence_report(CARD, 0.2, 0.6, (50,))
        self.assertLess(abs(frame['finite'].iloc[0] - exact['finite'].iloc[0]), 0.5)

    def test_rejections(self):
        with self.assertRaises(ValidationError):
            convergence_report(CARD, 0.5, 0.5, (10,))
        with self.assertRaises(ValidationError):
            convergence_report(CARD, 0.5, 0.53, (10,))
        with self.assertRaises(ValidationError):
            convergence_report(CARD, 0.2, 0.6, (20, 10))
        with self.assertRaises(ValidationError):
            convergence_report(ShuffleKind.CARD_INSERTION, 0.2, 0.6, (10,))
        with self.assertRaises(ValidationError):
            convergence_report(CARD, 0.2, 0.6, (10,), mode='mc')

    def test_scaled_index(self):
        self.assertEqual(scaled_index(0.0, 10), 1)
        self.assertEqual(scaled_index(1.0, 10), 10)
        self.assertEqual(scaled_index(0.25, 10), 3)
        self.assertEqual(scaled_index(0.5, 2000), 1000)
        np.testing.assert_array_equal([scaled_index(b, 4) for b in (0.1, 0.4, 0.6, 0.9)], [1, 2, 2, 4])
