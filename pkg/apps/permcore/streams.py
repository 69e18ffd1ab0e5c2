"""Keyed random streams.

Stream i of seed s is a Philox counter-based generator keyed by s whose
counter starts with i in its top word, so every stream can be produced on
its own and parallel runs reproduce regardless of how work is split.
"""
import numpy as np
from django.core.exceptions import ValidationError

from .batch import run_shuffle_batch
from .schema import ChoiceSequence, Permutation, ShuffleKind
from .shuffles import check_size, run_shuffle

SEED_BITS = 64


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 1 << SEED_BITS:
        raise ValidationError(f"Seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def stream_generator(seed: int, stream: int) -> np.random.Generator:
    counter = np.array([0, 0, 0, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=_check_seed(seed), counter=counter))


def draw_choices(seed: int, stream: int, n: int) -> np.ndarray:
    return stream_generator(seed, stream).integers(1, n + 1, size=n)


def draw_choice_block(seed: int, first_stream: int, count: int, n: int) -> np.ndarray:
    """Choices for streams ``first_stream .. first_stream + count - 1`` as rows"""
    block = np.empty((count, n), dtype=np.int64)
    for offset in range(count):
        block[offset] = draw_choices(seed, first_stream + offset, n)
    return block


def draw_uniform_block(seed: int, first_stream: int, count: int, n: int) -> np.ndarray:
    """Uniform random decks (Fisher-Yates via ``Generator.permutation``), one stream per row"""
    block = np.empty((count, n), dtype=np.int16)
    for offset in range(count):
        block[offset] = stream_generator(seed, first_stream + offset).permutation(n) + 1
    return block


def choice_sequence(seed: int, n: int, stream: int = 0) -> ChoiceSequence:
    check_size(n)
    return ChoiceSequence(tuple(int(k) for k in draw_choices(seed, stream, n)))


def sample(kind: ShuffleKind, n: int, seed: int, stream: int = 0) -> Permutation:
    """One seeded shuffle; identical (kind, n, seed, stream) always gives the same deck"""
    kind = ShuffleKind.parse(kind)
    return run_shuffle(kind, n, choice_sequence(seed, n, stream))


def sample_block(kind: ShuffleKind, n: int, seed: int, first_stream: int, count: int) -> np.ndarray:
    return run_shuffle_batch(kind, draw_choice_block(seed, first_stream, count, n))
