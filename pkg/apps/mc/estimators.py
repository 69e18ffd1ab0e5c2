"""Seeded Monte Carlo estimates for deck sizes beyond the exact engines.

Sample i always uses random stream i, and workers only ever add integer
counters over disjoint stream ranges, so an estimate depends on
``(kind, n, samples, seed)`` alone and never on the number of threads.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from multiprocessing.pool import ThreadPool
from typing import Callable, List, Optional, Sequence

import numpy as np
import pandas as pd
from django.core.exceptions import ValidationError

from apps.exact.formulas import exact_offdiag_marginal
from apps.limits.densities import DensityKind, DensityQuery, limit_density
from apps.permcore.conf import lab_setting
from apps.permcore.exceptions import ResourceLimitError
from apps.permcore.schema import ShuffleKind
from apps.permcore.shuffles import check_size
from apps.permcore.streams import draw_uniform_block, sample_block

logger = logging.getLogger(__name__)

UNIFORM = 'uniform'
EXCLUSION_BAND = 0.05
MODES = ('exact', 'mc')


class Statistic(str, Enum):
    DERANGEMENT = 'derangement'
    MEAN_FIXED_POINTS = 'mean_fixed_points'
    PROB_IDENTITY = 'prob_identity'

    @classmethod
    def parse(cls, value) -> 'Statistic':
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ', '.join(stat.value for stat in cls)
            raise ValidationError(f"Unknown statistic {value!r}; expected one of {choices}")


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    samples: int
    seed: int


def proportion(hits: int, samples: int, seed: int) -> Estimate:
    p = hits / samples
    return Estimate(p, math.sqrt(p * (1.0 - p) / samples), samples, seed)


def _sampler(kind) -> Callable:
    """Block sampler ``(n, seed, first_stream, count) -> decks`` for a shuffle kind or the uniform law"""
    if str(getattr(kind, 'value', kind)).lower() == UNIFORM:
        return lambda n, seed, first, count: draw_uniform_block(seed, first, count, n)
    kind = ShuffleKind.parse(kind)
    return lambda n, seed, first, count: sample_block(kind, n, seed, first, count)


def _check_run(n: int, samples: int, seed: int) -> None:
    check_size(n)
    if samples < 1:
        raise ValidationError(f"Need at least one sample, got {samples}")
    if seed is None or seed < 0:
        raise ValidationError(f"Seed must be a non-negative integer, got {seed}")
    limit = lab_setting('MC_MAX_WORK')
    if samples * n > limit:
        logger.warning("Rejected Monte Carlo run: %d samples x n=%d exceeds %d", samples, n, limit)
        raise ResourceLimitError(f"samples x n must not exceed {limit}, got {samples * n}")


def accumulate(kind, n: int, samples: int, seed: int, count_block: Callable,
               threads: Optional[int] = None) -> np.ndarray:
    """Sum the integer counters ``count_block(decks)`` over all sampled decks"""
    _check_run(n, samples, seed)
    draw = _sampler(kind)
    block = lab_setting('MC_BLOCK')
    threads = threads or lab_setting('THREADS')
    ranges = [(first, min(block, samples - first)) for first in range(0, samples, block)]
    logger.info("Sampling kind=%s n=%d: %d samples in %d blocks on %d threads",
                getattr(kind, 'value', kind), n, samples, len(ranges), threads)

    def work(bounds):
        first, count = bounds
        return np.asarray(count_block(draw(n, seed, first, count)), dtype=np.int64)

    with ThreadPool(threads) as pool:
        parts = pool.map(work, ranges)
    return np.sum(parts, axis=0)


def estimate_marginal_row(kind, n: int, j: int, samples: int, seed: int,
                          threads: Optional[int] = None) -> List[Estimate]:
    """Entry a estimates P(card j ends in position a)"""
    if not 1 <= j <= n:
        raise ValidationError(f"Card {j} must lie in 1..{n}")

    def count_block(decks):
        positions = np.argmax(decks == j, axis=1)
        return np.bincount(positions, minlength=n)

    hits = accumulate(kind, n, samples, seed, count_block, threads)
    return [proportion(int(h), samples, seed) for h in hits]


def estimate_statistic(kind, n: int, stat, samples: int, seed: int,
                       threads: Optional[int] = None) -> Estimate:
    stat = Statistic.parse(stat)
    positions = np.arange(1, n + 1)

    def count_block(decks):
        fixed = np.sum(decks == positions, axis=1, dtype=np.int64)
        return [np.sum(fixed == 0), np.sum(fixed == n), fixed.sum(), np.sum(fixed * fixed)]

    deranged, identities, total, squares = (int(v) for v in accumulate(kind, n, samples, seed, count_block, threads))
    if stat is Statistic.DERANGEMENT:
        return proportion(deranged, samples, seed)
    if stat is Statistic.PROB_IDENTITY:
        return proportion(identities, samples, seed)

    mean = total / samples
    variance = (squares - total * total / samples) / (samples - 1) if samples > 1 else 0.0
    return Estimate(mean, math.sqrt(max(variance, 0.0) / samples), samples, seed)


def scaled_index(fraction: float, n: int) -> int:
    """round(fraction * n), halves rounded up, clamped to 1..n"""
    return min(max(int(math.floor(fraction * n + 0.5)), 1), n)


def limit_for(kind: ShuffleKind, b: float, x: float) -> float:
    which = DensityKind.F_CARD if kind is ShuffleKind.CARD_TRANSPOSITION else DensityKind.F_POS
    return limit_density(DensityQuery(which, b, x))


def _exact_entry(kind: ShuffleKind, n: int, j: int, a: int) -> float:
    if j != a:
        return exact_offdiag_marginal(kind, n, j, a)
    # diagonal as the complement of its row
    return 1.0 - math.fsum(exact_offdiag_marginal(kind, n, j, other) for other in range(1, n + 1) if other != j)


def convergence_report(kind, b: float, x: float, n_list: Sequence[int], mode: str = 'exact',
                       samples: Optional[int] = None, seed: Optional[int] = None,
                       threads: Optional[int] = None) -> pd.DataFrame:
    """Rows ``n, finite, limit, abs_error`` comparing n times the finite-n marginal with its limit"""
    kind = ShuffleKind.parse(kind)
    if kind is ShuffleKind.CARD_INSERTION:
        raise ValidationError("Limiting densities exist for the transposition kinds only")
    if mode not in MODES:
        raise ValidationError(f"Unknown mode {mode!r}; expected exact or mc")
    if abs(x - b) < EXCLUSION_BAND:
        raise ValidationError(f"Need |x - b| >= {EXCLUSION_BAND}, got b={b}, x={x}")
    n_list = [int(n) for n in n_list]
    if not n_list or any(later <= earlier for earlier, later in zip(n_list, n_list[1:])):
        raise ValidationError("n_list must be non-empty and strictly ascending")
    if mode == 'mc' and samples is None:
        raise ValidationError("Monte Carlo mode needs a sample count")

    limit = limit_for(kind, b, x)
    rows = []
    for n in n_list:
        check_size(n)
        j, a = scaled_index(b, n), scaled_index(x, n)
        if mode == 'exact':
            finite = n * _exact_entry(kind, n, j, a)
        else:
            finite = n * estimate_marginal_row(kind, n, j, samples, seed, threads)[a - 1].value
        rows.append((n, finite, limit, abs(finite - limit)))
    return pd.DataFrame(rows, columns=['n', 'finite', 'limit', 'abs_error'])
