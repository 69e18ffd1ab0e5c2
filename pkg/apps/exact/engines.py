"""Exact engines over S_n: brute-force enumeration and distribution evolution.

Both return a ``DistributionTable`` of integer counts over n**n, so their
results can be compared for exact equality.
"""
import logging
from multiprocessing.pool import ThreadPool
from typing import Optional, Tuple

import numpy as np

from apps.permcore.batch import (
    apply_step_batch, decode_keys, encode_keys, inverse_rows, key_weights,
    lex_keys, lex_permutations, run_shuffle_batch,
)
from apps.permcore.conf import lab_setting
from apps.permcore.exceptions import ResourceLimitError
from apps.permcore.schema import ShuffleKind
from apps.permcore.shuffles import check_size

from .tables import DistributionTable, MarginalMatrix

logger = logging.getLogger(__name__)

EVOLVE_CHUNK = 1 << 20


def _guard(n: int, limit_name: str, engine: str) -> None:
    check_size(n)
    limit = lab_setting(limit_name)
    if n > limit:
        logger.warning("Rejected %s for n=%d (limit %d)", engine, n, limit)
        raise ResourceLimitError(f"{engine} is limited to n <= {limit}, got n={n}")


def choice_block(n: int, start: int, stop: int) -> np.ndarray:
    """Choice sequences ``start..stop-1`` in odometer order; step 1 is the slowest digit"""
    index = np.arange(start, stop, dtype=np.int64)
    return (index[:, None] // key_weights(n)[None, :]) % n + 1


def _count_block(kind: ShuffleKind, n: int, start: int, stop: int) -> Tuple[np.ndarray, np.ndarray]:
    decks = run_shuffle_batch(kind, choice_block(n, start, stop))
    return np.unique(encode_keys(decks), return_counts=True)


def brute_force_distribution(kind, n: int, threads: Optional[int] = None) -> DistributionTable:
    """Run the shuffle on every one of the n**n choice sequences and count the outcomes"""
    kind = ShuffleKind.parse(kind)
    _guard(n, 'BRUTE_FORCE_MAX_N', 'Brute force')
    threads = threads or lab_setting('THREADS')
    total = n ** n
    block = lab_setting('BRUTE_FORCE_BLOCK')
    bounds = [(start, min(start + block, total)) for start in range(0, total, block)]
    logger.info("Brute force kind=%s n=%d: %d sequences in %d blocks on %d threads",
                kind.value, n, total, len(bounds), threads)

    with ThreadPool(threads) as pool:
        parts = pool.starmap(_count_block, [(kind, n, start, stop) for start, stop in bounds])

    keys = np.concatenate([part_keys for part_keys, _ in parts])
    counts = np.concatenate([part_counts for _, part_counts in parts]).astype(np.int64)
    merged, inverse = np.unique(keys, return_inverse=True)
    totals = np.zeros(len(merged), dtype=np.int64)
    np.add.at(totals, inverse.reshape(-1), counts)
    return DistributionTable(n, decode_keys(merged, n), totals, total)


def _moved_keys(kind: ShuffleKind, decks: np.ndarray, where: np.ndarray, keys: np.ndarray,
                j: int, k: int) -> np.ndarray:
    weights = key_weights(decks.shape[1])
    if kind is ShuffleKind.POSITION_TRANSPOSITION:
        delta = decks[:, k - 1].astype(np.int64) - decks[:, j - 1]
        return keys + delta * (weights[j - 1] - weights[k - 1])
    if kind is ShuffleKind.CARD_TRANSPOSITION:
        spread = weights[where[:, j - 1].astype(np.intp) - 1] - weights[where[:, k - 1].astype(np.intp) - 1]
        return keys + (k - j) * spread
    moved, moved_where = decks.copy(), where.copy()
    apply_step_batch(kind, moved, moved_where, j, k)
    return encode_keys(moved)


def evolve_distribution(kind, n: int) -> DistributionTable:
    """Push the law of the deck through steps 1..n, each step spreading mass over the n picks.

    Counts live on all of S_n in lexicographic order; after step j they sum
    to n**j, so the final table is exact over n**n.
    """
    kind = ShuffleKind.parse(kind)
    _guard(n, 'EVOLVE_MAX_N', 'Distribution evolution')
    perms = lex_permutations(n)
    keys_all = lex_keys(perms)
    counts = np.zeros(len(perms), dtype=np.int64)
    counts[0] = 1
    logger.info("Evolving kind=%s n=%d over %d states", kind.value, n, len(perms))

    for j in range(1, n + 1):
        support = np.flatnonzero(counts)
        spread = np.zeros_like(counts)
        for start in range(0, len(support), EVOLVE_CHUNK):
            rows = support[start:start + EVOLVE_CHUNK]
            decks = perms[rows].astype(np.int16)
            where = inverse_rows(decks)
            keys, mass = keys_all[rows], counts[rows]
            for k in range(1, n + 1):
                # insertion with a fixed pick is many-to-one, so targets may repeat
                targets = np.searchsorted(keys_all, _moved_keys(kind, decks, where, keys, j, k))
                np.add.at(spread, targets, mass)
        counts = spread
        logger.debug("Step %d: %d states in support", j, int(np.count_nonzero(counts)))

    support = np.flatnonzero(counts)
    return DistributionTable(n, perms[support], counts[support], n ** n)


def marginal_of(table: DistributionTable) -> MarginalMatrix:
    """P(card j ends in position a), read from the inverse of every row"""
    n = table.n
    where = inverse_rows(table.perms).astype(np.intp)
    hits = np.zeros((n, n), dtype=np.int64)
    cards = np.broadcast_to(np.arange(n), where.shape)
    np.add.at(hits, (cards.reshape(-1), where.reshape(-1) - 1), np.repeat(table.counts, n))
    return MarginalMatrix(n, hits / table.denominator)


def position_marginal_of(table: DistributionTable) -> MarginalMatrix:
    """``entries[a - 1, j - 1]`` = P(position a holds card j), counted from the slots"""
    n = table.n
    hits = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        np.add.at(hits[a], table.perms[:, a].astype(np.intp) - 1, table.counts)
    return MarginalMatrix(n, hits / table.denominator)
