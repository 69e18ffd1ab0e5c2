import itertools
import math

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, tag

from apps.exact.engines import brute_force_distribution

from .batch import decode_keys, encode_keys, lex_permutations, run_shuffle_batch
from .conf import lab_setting
from .schema import ChoiceSequence, Permutation, ShuffleKind
from .shuffles import apply_step, fixed_points, identity, invert, right_cycle, run_shuffle
from .streams import choice_sequence, draw_choice_block, draw_uniform_block, sample, sample_block

KINDS = list(ShuffleKind)
CARD = ShuffleKind.CARD_TRANSPOSITION
POS = ShuffleKind.POSITION_TRANSPOSITION
INSERTION = ShuffleKind.CARD_INSERTION


def perm(*slots):
    return Permutation(slots)


class PermutationTests(SimpleTestCase):
    def test_identity(self):
        self.assertEqual(identity(3), perm(1, 2, 3))
        self.assertEqual(identity(1), perm(1))
        self.assertEqual(invert(identity(5)), identity(5))

    def test_identity_rejects_empty_deck(self):
        with self.assertRaises(ValidationError):
            identity(0)

    def test_invert(self):
        self.assertEqual(invert(perm(2, 3, 1)), perm(3, 1, 2))
        self.assertEqual(invert(perm(2, 1, 3)), perm(2, 1, 3))

    def test_invert_is_an_involution(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            p = Permutation(tuple(rng.permutation(9) + 1))
            with self.subTest(p=p.to_text()):
                self.assertEqual(invert(invert(p)), p)

    def test_fixed_points(self):
        self.assertEqual(fixed_points(identity(3)), 3)
        self.assertEqual(fixed_points(perm(2, 1, 3)), 1)
        self.assertEqual(fixed_points(perm(2, 3, 1)), 0)

    def test_rejects_non_bijection(self):
        with self.assertRaises(ValidationError):
            perm(1, 1, 3)
        with self.assertRaises(ValidationError):
            Permutation.from_text("1,x")

    def test_text_format(self):
        self.assertEqual(Permutation.from_text("2,3,1"), perm(2, 3, 1))
        self.assertEqual(perm(2, 3, 1).to_text(), "2,3,1")
        self.assertEqual(ChoiceSequence.from_text("1,1").choices, (1, 1))

    def test_right_cycle(self):
        self.assertEqual(right_cycle(3), perm(3, 1, 2))
        self.assertEqual(right_cycle(1), perm(1))

    def test_kind_parsing(self):
        self.assertIs(ShuffleKind.parse("card"), CARD)
        self.assertIs(ShuffleKind.parse("POS"), POS)
        with self.assertRaises(ValidationError):
            ShuffleKind.parse("riffle")


class ApplyStepTests(SimpleTestCase):
    def test_card_kind_swaps_cards(self):
        self.assertEqual(apply_step(CARD, perm(1, 2), 1, 2), perm(2, 1))
        self.assertEqual(apply_step(CARD, perm(2, 1, 3), 2, 3), perm(3, 1, 2))

    def test_position_kind_swaps_positions(self):
        self.assertEqual(apply_step(POS, perm(2, 1, 3), 1, 3), perm(3, 1, 2))

    def test_insertion_places_card_at_position(self):
        self.assertEqual(apply_step(INSERTION, perm(1, 2, 3), 1, 3), perm(2, 3, 1))
        self.assertEqual(apply_step(INSERTION, perm(2, 3, 1), 1, 1), perm(1, 2, 3))
        self.assertEqual(apply_step(INSERTION, perm(3, 1, 2), 2, 2), perm(3, 2, 1))

    def test_no_op_picks(self):
        state = perm(3, 1, 2)
        self.assertEqual(apply_step(CARD, state, 2, 2), state)
        self.assertEqual(apply_step(POS, state, 2, 2), state)

    def test_out_of_range(self):
        with self.assertRaises(ValidationError):
            apply_step(CARD, identity(3), 4, 1)
        with self.assertRaises(ValidationError):
            apply_step(POS, identity(3), 1, 0)

    def test_transpositions_are_involutions_in_k(self):
        rng = np.random.default_rng(11)
        for kind in (CARD, POS):
            for _ in range(30):
                state = Permutation(tuple(rng.permutation(6) + 1))
                j, k = (int(v) for v in rng.integers(1, 7, size=2))
                with self.subTest(kind=kind.value, state=state.to_text(), j=j, k=k):
                    once = apply_step(kind, state, j, k)
                    self.assertEqual(apply_step(kind, once, j, k), state)


class RunShuffleTests(SimpleTestCase):
    def test_card_kind_known_decks(self):
        self.assertEqual(run_shuffle(CARD, 2, ChoiceSequence((1, 2))), perm(1, 2))
        self.assertEqual(run_shuffle(CARD, 2, ChoiceSequence((1, 1))), perm(2, 1))

    def test_single_card(self):
        for kind in KINDS:
            self.assertEqual(run_shuffle(kind, 1, ChoiceSequence((1,))), perm(1))

    def test_length_mismatch(self):
        with self.assertRaises(ValidationError):
            run_shuffle(CARD, 3, ChoiceSequence((1, 2)))

    def test_all_no_op_choices_give_identity(self):
        for kind in (CARD, POS):
            choices = ChoiceSequence(tuple(range(1, 8)))
            self.assertEqual(run_shuffle(kind, 7, choices), identity(7))

    def test_arbitrary_start(self):
        start = perm(2, 1, 3)
        result = run_shuffle(POS, 3, ChoiceSequence((3, 2, 3)), start=start)
        self.assertEqual(result, perm(3, 1, 2))

    def test_outputs_are_bijections(self):
        rng = np.random.default_rng(3)
        for kind in KINDS:
            for n in (2, 5, 9):
                choices = ChoiceSequence(tuple(int(k) for k in rng.integers(1, n + 1, size=n)))
                with self.subTest(kind=kind.value, choices=choices.to_text()):
                    result = run_shuffle(kind, n, choices)
                    self.assertEqual(sorted(result.slots), list(range(1, n + 1)))


class BatchTests(SimpleTestCase):
    def test_batch_matches_single_deck_semantics(self):
        rng = np.random.default_rng(5)
        for kind in KINDS:
            for n in (1, 2, 4, 7):
                choices = rng.integers(1, n + 1, size=(40, n))
                decks = run_shuffle_batch(kind, choices)
                for row, picks in zip(decks, choices):
                    expected = run_shuffle(kind, n, ChoiceSequence(tuple(int(k) for k in picks)))
                    with self.subTest(kind=kind.value, picks=picks.tolist()):
                        self.assertEqual(tuple(int(c) for c in row), expected.slots)

    def test_keys_follow_lexicographic_order(self):
        perms = lex_permutations(4)
        expected = list(itertools.permutations(range(1, 5)))
        self.assertEqual([tuple(int(c) for c in row) for row in perms], expected)
        keys = encode_keys(perms)
        self.assertTrue(np.all(np.diff(keys) > 0))
        np.testing.assert_array_equal(decode_keys(keys, 4), perms)


class StreamTests(SimpleTestCase):
    def test_sampling_is_deterministic(self):
        for kind in KINDS:
            self.assertEqual(sample(kind, 12, 99), sample(kind, 12, 99))
        self.assertNotEqual(choice_sequence(99, 12), choice_sequence(100, 12))

    def test_single_card_sample(self):
        self.assertEqual(sample(CARD, 1, 12345), perm(1))

    def test_sample_is_run_shuffle_of_stream_choices(self):
        choices = choice_sequence(42, 6, stream=3)
        self.assertEqual(sample(POS, 6, 42, stream=3), run_shuffle(POS, 6, choices))

    def test_block_rows_are_independent_streams(self):
        block = draw_choice_block(8, 10, 5, 6)
        np.testing.assert_array_equal(block[2], draw_choice_block(8, 12, 1, 6)[0])
        decks = sample_block(CARD, 6, 8, 10, 5)
        self.assertEqual(tuple(int(c) for c in decks[4]), sample(CARD, 6, 8, stream=14).slots)

    def test_uniform_rows_are_permutations(self):
        block = draw_uniform_block(1, 0, 10, 7)
        for row in block:
            self.assertEqual(sorted(row.tolist()), list(range(1, 8)))

    def test_card_kind_two_cards_is_fair(self):
        samples = 20000
        decks = sample_block(CARD, 2, 2024, 0, samples)
        swapped = int(np.sum(decks[:, 0] == 2))
        sigma = (0.25 / samples) ** 0.5
        self.assertLess(abs(swapped / samples - 0.5), 4 * sigma)

    def test_seed_range(self):
        with self.assertRaises(ValidationError):
            sample(CARD, 3, -1)
        with self.assertRaises(ValidationError):
            sample(CARD, 0, 1)


def sampled_law_z_scores(kind, n, samples, seed):
    """Per-permutation z-scores of sampled decks against the exact law, plus sampled decks outside its support"""
    table = brute_force_distribution(kind, n)
    keys, hits = np.unique(encode_keys(sample_block(kind, n, seed, 0, samples)), return_counts=True)
    observed = dict(zip(keys.tolist(), hits.tolist()))
    scores = []
    for key, count in zip(table.keys.tolist(), table.counts.tolist()):
        p = count / table.denominator
        scores.append((observed.pop(key, 0) - samples * p) / math.sqrt(samples * p * (1 - p)))
    return np.array(scores), observed


class SampledLawTests(SimpleTestCase):
    def check_law(self, n, samples, bound):
        for kind in KINDS:
            with self.subTest(kind=kind.value):
                scores, outside = sampled_law_z_scores(kind, n, samples, 31337)
                self.assertEqual(outside, {})
                self.assertLess(np.abs(scores).max(), bound)

    def test_four_cards(self):
        self.check_law(4, 20000, 4.5)

    @tag('slow')
    def test_five_cards_at_a_million_samples(self):
        self.check_law(5, 10 ** 6, 4)


class SettingsTests(SimpleTestCase):
    def test_defaults_are_available(self):
        self.assertEqual(lab_setting('BRUTE_FORCE_MAX_N'), 8)
        self.assertEqual(lab_setting('EVOLVE_MAX_N'), 11)
        with self.assertRaises(KeyError):
            lab_setting('NOPE')
