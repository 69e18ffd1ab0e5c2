import math
from fractions import Fraction

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, override_settings, tag
from rest_framework.test import APISimpleTestCase

from apps.permcore.batch import lex_permutations
from apps.permcore.exceptions import ResourceLimitError
from apps.permcore.schema import Permutation, ShuffleKind
from apps.permcore.shuffles import identity, right_cycle

from .engines import brute_force_distribution, evolve_distribution, marginal_of, position_marginal_of
from .formulas import (
    binomial_tail, catalan, cited_lower_bound, exact_marginal_matrix, exact_offdiag_fraction,
    exact_offdiag_marginal, insertion_bounds,
)
from .statistics import distribution_stats, identity_asymptotic_ratio, tv_to_uniform
from .tables import DistributionTable, MarginalMatrix

CARD = ShuffleKind.CARD_TRANSPOSITION
POS = ShuffleKind.POSITION_TRANSPOSITION
INSERTION = ShuffleKind.CARD_INSERTION


def perm(*slots):
    return Permutation(slots)


def point_mass(p: Permutation) -> DistributionTable:
    return DistributionTable.from_counts({p: 1}, denominator=1)


def uniform_table(n: int) -> DistributionTable:
    perms = lex_permutations(n)
    return DistributionTable(n, perms, np.ones(len(perms)), math.factorial(n))


class BinomialTailTests(SimpleTestCase):
    def test_known_entries(self):
        self.assertAlmostEqual(binomial_tail(10, 0.1, 1, 'upper'), 1 - 0.9 ** 10, places=14)
        self.assertAlmostEqual(binomial_tail(4, 0.5, 2, 'upper'), 11 / 16, places=14)
        self.assertEqual(binomial_tail(5, 0.3, 5, 'lower'), 1.0)

    def test_degenerate_thresholds(self):
        self.assertEqual(binomial_tail(7, 0.2, 0, 'upper'), 1.0)
        self.assertEqual(binomial_tail(7, 0.2, -3, 'upper'), 1.0)
        self.assertEqual(binomial_tail(7, 0.2, -1, 'lower'), 0.0)
        self.assertEqual(binomial_tail(0, 0.2, 0, 'lower'), 1.0)

    def test_domain(self):
        with self.assertRaises(ValidationError):
            binomial_tail(-1, 0.5, 1)
        with self.assertRaises(ValidationError):
            binomial_tail(3, 1.5, 1)
        with self.assertRaises(ValidationError):
            binomial_tail(3, 0.5, 1, 'middle')


class FormulaTests(SimpleTestCase):
    def test_two_cards(self):
        self.assertAlmostEqual(exact_offdiag_marginal(CARD, 2, 1, 2), 0.5, places=15)
        self.assertAlmostEqual(exact_offdiag_marginal(CARD, 2, 2, 1), 0.5, places=15)

    def test_diagonal_is_rejected(self):
        with self.assertRaises(ValidationError):
            exact_offdiag_marginal(CARD, 1, 1, 1)
        with self.assertRaises(ValidationError):
            exact_offdiag_marginal(POS, 5, 3, 3)

    def test_domain(self):
        with self.assertRaises(ValidationError):
            exact_offdiag_marginal(CARD, 4, 5, 1)
        with self.assertRaises(ValidationError):
            exact_offdiag_marginal(INSERTION, 4, 1, 2)
        with self.assertRaises(ValidationError):
            exact_offdiag_marginal(CARD, 4, 1, 2, method='guess')

    def test_three_cards_exact(self):
        self.assertEqual(exact_offdiag_fraction(CARD, 3, 1, 2), Fraction(10, 27))
        # the position kind exchanges the roles of card and position
        self.assertEqual(exact_offdiag_fraction(POS, 3, 2, 1), Fraction(10, 27))

    def test_methods_agree(self):
        for kind in (CARD, POS):
            for n in (5, 9, 23):
                for j in range(1, n + 1):
                    for a in range(1, n + 1):
                        if j == a:
                            continue
                        hockey = exact_offdiag_marginal(kind, n, j, a)
                        with self.subTest(kind=kind.value, n=n, j=j, a=a):
                            self.assertAlmostEqual(exact_offdiag_marginal(kind, n, j, a, 'tails'), hockey, delta=1e-12)
                            if n < 23:
                                self.assertAlmostEqual(exact_offdiag_marginal(kind, n, j, a, 'direct'), hockey, delta=1e-12)

    def test_catalan(self):
        self.assertEqual([catalan(n) for n in (1, 2, 3, 4, 5)], [1, 2, 5, 14, 42])
        with self.assertRaises(ResourceLimitError):
            catalan(36)
        with self.assertRaises(ValidationError):
            catalan(0)

    def test_bounds(self):
        self.assertEqual(cited_lower_bound(3), Fraction(4, 27))
        self.assertEqual(insertion_bounds(3), (Fraction(4, 27), Fraction(5, 27)))


class MarginalMatrixTests(SimpleTestCase):
    def test_small_matrices(self):
        np.testing.assert_allclose(exact_marginal_matrix(CARD, 2).entries, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
        for kind in (CARD, POS):
            np.testing.assert_array_equal(exact_marginal_matrix(kind, 1).entries, [[1.0]])

    def test_doubly_stochastic(self):
        for kind in (CARD, POS):
            for n in (3, 10, 60):
                with self.subTest(kind=kind.value, n=n):
                    matrix = exact_marginal_matrix(kind, n)
                    self.assertTrue(matrix.is_doubly_stochastic())

    def test_position_kind_is_the_transpose(self):
        card = exact_marginal_matrix(CARD, 12)
        pos = exact_marginal_matrix(POS, 12)
        off = ~np.eye(12, dtype=bool)
        np.testing.assert_allclose(pos.entries[off], card.transpose().entries[off], atol=1e-15)

    def test_insertion_has_no_closed_form(self):
        with self.assertRaises(ValidationError):
            exact_marginal_matrix(INSERTION, 4)

    def test_csv_header(self):
        text = exact_marginal_matrix(CARD, 2).to_csv()
        self.assertEqual(text.splitlines()[0], 'j\\a,1,2')
        self.assertEqual(text.splitlines()[1], '1,0.5,0.5')

    def test_shape_check(self):
        with self.assertRaises(ValidationError):
            MarginalMatrix(3, np.eye(2))
        with self.assertRaises(ValidationError):
            MarginalMatrix(2, [[1.0, 0.5], [0.0, 0.5]]).check_doubly_stochastic()


class DistributionTableTests(SimpleTestCase):
    def test_counts_must_sum_to_denominator(self):
        with self.assertRaises(ValidationError):
            DistributionTable.from_counts({perm(1, 2): 1, perm(2, 1): 2})

    def test_duplicates_are_rejected(self):
        with self.assertRaises(ValidationError):
            DistributionTable(2, [[1, 2], [1, 2]], [2, 2])

    def test_rows_must_be_permutations(self):
        with self.assertRaises(ValidationError):
            DistributionTable(2, [[1, 1], [2, 1]], [2, 2])

    def test_text_format(self):
        table = brute_force_distribution(CARD, 3)
        text = table.to_text()
        self.assertEqual(text.splitlines()[0], '1,2,3\t4\t27')
        self.assertEqual(DistributionTable.from_text(text), table)

    def test_from_text_errors(self):
        with self.assertRaises(ValidationError):
            DistributionTable.from_text('1,2\t2\n')
        with self.assertRaises(ValidationError):
            DistributionTable.from_text('1,2\t2\t4\n2,1\t2\t5\n')

    def test_lookup(self):
        table = brute_force_distribution(POS, 3)
        self.assertEqual(table.probability(right_cycle(3)), Fraction(4, 27))
        self.assertEqual(point_mass(perm(2, 1)).count(perm(1, 2)), 0)


class BruteForceTests(SimpleTestCase):
    def test_two_cards(self):
        for kind in (CARD, POS):
            table = brute_force_distribution(kind, 2)
            self.assertEqual(table.as_dict(), {perm(1, 2): 2, perm(2, 1): 2})
            self.assertEqual(table.denominator, 4)

    def test_single_card(self):
        for kind in ShuffleKind:
            table = brute_force_distribution(kind, 1)
            self.assertEqual(table.as_dict(), {perm(1): 1})
            self.assertEqual(table.denominator, 1)

    def test_guard(self):
        with self.assertRaises(ResourceLimitError):
            brute_force_distribution(CARD, 9)

    def test_result_does_not_depend_on_blocks_or_threads(self):
        reference = brute_force_distribution(POS, 6, threads=1)
        with override_settings(SHUFFLE_LAB={'BRUTE_FORCE_BLOCK': 997}):
            self.assertEqual(brute_force_distribution(POS, 6, threads=4), reference)


class EvolutionTests(SimpleTestCase):
    def test_matches_brute_force(self):
        for kind in ShuffleKind:
            for n in range(1, 8):
                with self.subTest(kind=kind.value, n=n):
                    self.assertEqual(evolve_distribution(kind, n), brute_force_distribution(kind, n))

    def test_single_card(self):
        self.assertEqual(evolve_distribution(CARD, 1).as_dict(), {perm(1): 1})

    def test_insertion_keeps_colliding_mass(self):
        expected = {
            perm(1, 2, 3): 5, perm(1, 3, 2): 5, perm(2, 1, 3): 4,
            perm(2, 3, 1): 4, perm(3, 1, 2): 5, perm(3, 2, 1): 4,
        }
        self.assertEqual(evolve_distribution(INSERTION, 3).as_dict(), expected)
        self.assertEqual(brute_force_distribution(INSERTION, 3).as_dict(), expected)

    def test_guard(self):
        with self.assertRaises(ResourceLimitError):
            evolve_distribution(POS, 12)


class OracleTests(SimpleTestCase):
    def test_closed_form_matches_brute_force(self):
        for kind in (CARD, POS):
            for n in range(2, 8):
                with self.subTest(kind=kind.value, n=n):
                    oracle = marginal_of(brute_force_distribution(kind, n))
                    np.testing.assert_allclose(exact_marginal_matrix(kind, n).entries, oracle.entries,
                                               rtol=0, atol=1e-12)

    def test_exact_fractions_match_counts(self):
        for kind in (CARD, POS):
            n = 5
            table = brute_force_distribution(kind, n)
            hits = np.rint(marginal_of(table).entries * n ** n).astype(int)
            for j in range(1, n + 1):
                for a in range(1, n + 1):
                    if j != a:
                        with self.subTest(kind=kind.value, j=j, a=a):
                            self.assertEqual(exact_offdiag_fraction(kind, n, j, a), Fraction(int(hits[j - 1, a - 1]), n ** n))

    def test_transpose_relation(self):
        for kind in ShuffleKind:
            table = brute_force_distribution(kind, 5)
            np.testing.assert_array_equal(position_marginal_of(table).entries, marginal_of(table).transpose().entries)
            self.assertTrue(marginal_of(table).is_doubly_stochastic())


class MarginalOfTests(SimpleTestCase):
    def test_point_mass_at_identity(self):
        np.testing.assert_array_equal(marginal_of(point_mass(identity(4))).entries, np.eye(4))

    def test_uniform(self):
        np.testing.assert_allclose(marginal_of(uniform_table(3)).entries, np.full((3, 3), 1 / 3))

    def test_two_cards(self):
        np.testing.assert_array_equal(marginal_of(brute_force_distribution(CARD, 2)).entries, np.full((2, 2), 0.5))


class StatisticsTests(SimpleTestCase):
    def test_tv_to_uniform(self):
        self.assertEqual(tv_to_uniform(brute_force_distribution(CARD, 1)), 0.0)
        self.assertAlmostEqual(tv_to_uniform(brute_force_distribution(CARD, 2)), 0.0, places=15)
        self.assertAlmostEqual(tv_to_uniform(point_mass(perm(2, 3, 1))), 5 / 6, places=15)
        self.assertAlmostEqual(tv_to_uniform(uniform_table(4)), 0.0, places=15)

    def test_position_kind_three_cards(self):
        summary = distribution_stats(evolve_distribution(POS, 3))
        self.assertEqual(summary.min_prob, Fraction(4, 27))
        self.assertEqual(summary.argmin, perm(3, 1, 2))
        self.assertNotEqual(summary.argmax, identity(3))
        self.assertLessEqual(summary.min_prob, summary.prob_identity)
        self.assertLessEqual(summary.prob_identity, summary.max_prob)

    def test_card_kind_two_cards(self):
        summary = distribution_stats(brute_force_distribution(CARD, 2))
        self.assertEqual(summary.prob_identity, Fraction(1, 2))
        self.assertEqual(summary.derangement_prob, Fraction(1, 2))
        self.assertEqual(summary.argmax, identity(2))

    def test_argmin_prefers_the_right_cycle_among_ties(self):
        summary = distribution_stats(evolve_distribution(POS, 4))
        self.assertEqual(summary.min_prob, cited_lower_bound(4))
        self.assertEqual(summary.argmin, right_cycle(4))

    def test_argmin_ties_without_the_right_cycle_go_lex_first(self):
        counts = {Permutation(tuple(int(c) for c in p)): 2 for p in lex_permutations(3)}
        counts[perm(2, 1, 3)] = counts[perm(1, 3, 2)] = 1
        summary = distribution_stats(DistributionTable.from_counts(counts, denominator=10))
        self.assertEqual(summary.min_prob, Fraction(1, 10))
        self.assertEqual(summary.argmin, perm(1, 3, 2))

    def test_table_size_limit(self):
        with self.assertRaises(ValidationError):
            DistributionTable.from_text('\t'.join([','.join(str(c) for c in range(1, 17)), '1', '1']) + '\n')
        with self.assertRaises(ValidationError):
            DistributionTable(16, np.arange(1, 17)[None, :], [1], 1)

    def test_missing_permutations_have_probability_zero(self):
        summary = distribution_stats(point_mass(perm(2, 3, 1)))
        self.assertEqual(summary.min_prob, 0)
        self.assertEqual(summary.argmin, identity(3))
        self.assertEqual(summary.max_prob, 1)
        self.assertEqual(summary.derangement_prob, 1)
        self.assertAlmostEqual(summary.tv_to_uniform, 5 / 6, places=15)

    def test_summary_rows(self):
        summary = distribution_stats(brute_force_distribution(CARD, 2))
        self.assertEqual(summary.to_dict()['prob_identity'], {'exact': '1/2', 'value': 0.5})


def _check_lower_bound(test, n):
    table = evolve_distribution(POS, n)
    bound = cited_lower_bound(n)
    test.assertEqual(table.support_size, math.factorial(n))
    attained = []
    for p, count in table.items():
        probability = Fraction(count, table.denominator)
        test.assertGreaterEqual(probability, bound)
        if probability == bound:
            attained.append(p)
    test.assertIn(right_cycle(n), attained)
    return attained


def _check_insertion_bounds(test, n):
    table = evolve_distribution(INSERTION, n)
    low, high = insertion_bounds(n)
    test.assertEqual(table.support_size, math.factorial(n))
    probabilities = [Fraction(count, table.denominator) for _, count in table.items()]
    test.assertGreaterEqual(min(probabilities), low)
    test.assertLessEqual(max(probabilities), high)


def _check_asymptotic_trend(test, sizes):
    """The ratio to the asymptotic form stays above 1 and falls along odd n and along even n"""
    ratios = {n: identity_asymptotic_ratio(evolve_distribution(POS, n)) for n in sizes}
    for parity in (0, 1):
        sequence = [ratios[n] for n in sorted(ratios) if n % 2 == parity]
        with test.subTest(parity=parity):
            test.assertTrue(all(ratio > 1 for ratio in sequence), sequence)
            test.assertTrue(all(later <= earlier for earlier, later in zip(sequence, sequence[1:])), sequence)


class CitedFactsTests(SimpleTestCase):
    def test_position_lower_bound(self):
        for n in range(3, 8):
            with self.subTest(n=n):
                attained = _check_lower_bound(self, n)
                if n >= 5:
                    self.assertEqual(attained, [right_cycle(n)])

    def test_lower_bound_ties_on_small_decks(self):
        self.assertEqual(_check_lower_bound(self, 3), [perm(1, 2, 3), perm(3, 1, 2), perm(3, 2, 1)])
        self.assertEqual(_check_lower_bound(self, 4), [perm(4, 1, 2, 3), perm(4, 2, 3, 1)])

    def test_insertion_bounds(self):
        for n in range(3, 8):
            with self.subTest(n=n):
                _check_insertion_bounds(self, n)

    def test_identity_is_not_most_likely(self):
        for n in range(3, 10):
            with self.subTest(n=n):
                self.assertNotEqual(distribution_stats(evolve_distribution(POS, n)).argmax, identity(n))

    def test_identity_asymptotic_trend(self):
        _check_asymptotic_trend(self, range(3, 10))

    @tag('slow')
    def test_bounds_at_eight_cards(self):
        self.assertEqual(_check_lower_bound(self, 8), [right_cycle(8)])
        _check_insertion_bounds(self, 8)
        brute = brute_force_distribution(POS, 8)
        self.assertEqual(brute.probability(right_cycle(8)), cited_lower_bound(8))

    @tag('slow')
    def test_identity_is_not_most_likely_at_ten_cards(self):
        self.assertNotEqual(distribution_stats(evolve_distribution(POS, 10)).argmax, identity(10))

    @tag('slow')
    def test_identity_asymptotic_trend_to_eleven_cards(self):
        _check_asymptotic_trend(self, range(3, 12))


class MarginalApiTests(APISimpleTestCase):
    def test_matrix(self):
        response = self.client.get('/api/exact/marginal/', {'kind': 'card', 'n': 2})
        self.assertEqual(response.status_code, 200)
        np.testing.assert_allclose(response.json()['entries'], [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)

    def test_single_entry(self):
        response = self.client.get('/api/exact/marginal/', {'kind': 'pos', 'n': 3, 'j': 2, 'a': 1})
        self.assertEqual(response.status_code, 200)
        self.assertAlmostEqual(response.json()['probability'], 10 / 27, places=14)

    def test_diagonal_entry_is_a_bad_request(self):
        response = self.client.get('/api/exact/marginal/', {'kind': 'card', 'n': 3, 'j': 2, 'a': 2})
        self.assertEqual(response.status_code, 400)
        self.assertEqual(response.json()['status'], 'error')

    def test_invalid_query(self):
        self.assertEqual(self.client.get('/api/exact/marginal/', {'kind': 'riffle', 'n': 3}).status_code, 400)
        self.assertEqual(self.client.get('/api/exact/marginal/', {'kind': 'card', 'n': 3, 'j': 1}).status_code, 400)

    def test_large_matrix_is_refused(self):
        response = self.client.get('/api/exact/marginal/', {'kind': 'card', 'n': 5000})
        self.assertEqual(response.status_code, 413)

    def test_large_single_entry_is_refused(self):
        for method in ('hockey', 'direct'):
            response = self.client.get('/api/exact/marginal/', {'kind': 'card', 'n': 300, 'j': 1, 'a': 2, 'method': method})
            self.assertEqual(response.status_code, 413)
            self.assertEqual(response.json()['status'], 'error')
