"""Result types of the exact engines and their file formats."""
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Optional, Tuple

import numpy as np
import pandas as pd
from django.core.exceptions import ValidationError

from apps.permcore.batch import DECK_DTYPE, encode_keys
from apps.permcore.schema import Permutation, parse_one_line

CSV_OPTIONS = {'index': False, 'float_format': '%.17g', 'lineterminator': '\n'}
# largest n whose base-n deck keys fit in int64
KEY_MAX_N = 15


@dataclass(eq=False)
class DistributionTable:
    """Exact law on S_n as integer counts over ``denominator`` (n**n for a shuffle).

    Rows are kept in lexicographic order of one-line notation and only
    permutations with a positive count are stored.
    """
    n: int
    perms: np.ndarray
    counts: np.ndarray
    denominator: Optional[int] = None
    keys: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.check_key_range()
        self.perms = np.asarray(self.perms, dtype=DECK_DTYPE).reshape(-1, self.n)
        self.counts = np.asarray(self.counts, dtype=np.int64).reshape(-1)
        if self.denominator is None:
            self.denominator = self.n ** self.n
        self.denominator = int(self.denominator)
        if len(self.perms) != len(self.counts):
            raise ValidationError("Every permutation row needs exactly one count")

        keep = self.counts > 0
        self.perms, self.counts = self.perms[keep], self.counts[keep]
        keys = encode_keys(self.perms)
        order = np.argsort(keys, kind="stable")
        self.perms, self.counts, self.keys = self.perms[order], self.counts[order], keys[order]
        self.validate()

    def check_key_range(self) -> None:
        if not 1 <= self.n <= KEY_MAX_N:
            raise ValidationError(f"Tables support 1 <= n <= {KEY_MAX_N}, got n={self.n}")

    def validate(self) -> None:
        self.check_key_range()
        if np.any(self.counts < 0):
            raise ValidationError("Counts must be non-negative")
        expected = np.arange(1, self.n + 1)
        if not np.all(np.sort(self.perms, axis=1) == expected):
            raise ValidationError("Every row must be a permutation of 1..n")
        if len(self.perms) > 1 and not np.all(np.diff(self.keys) > 0):
            raise ValidationError("A permutation appears more than once")
        total = int(self.counts.sum())
        if total != self.denominator:
            raise ValidationError(f"Counts sum to {total}, expected {self.denominator}")

    @property
    def support_size(self) -> int:
        return len(self.counts)

    def count(self, p: Permutation) -> int:
        if p.n != self.n:
            raise ValidationError(f"{p} is not in S_{self.n}")
        key = encode_keys(np.asarray([p.slots]))[0]
        index = int(np.searchsorted(self.keys, key))
        if index < len(self.counts) and self.keys[index] == key:
            return int(self.counts[index])
        return 0

    def probability(self, p: Permutation) -> Fraction:
        return Fraction(self.count(p), self.denominator)

    def items(self) -> Iterator[Tuple[Permutation, int]]:
        for row, count in zip(self.perms, self.counts):
            yield Permutation(tuple(row.tolist())), int(count)

    def as_dict(self) -> Dict[Permutation, int]:
        return dict(self.items())

    def __eq__(self, other):
        if not isinstance(other, DistributionTable):
            return NotImplemented
        return (
            self.n == other.n
            and self.denominator == other.denominator
            and np.array_equal(self.perms, other.perms)
            and np.array_equal(self.counts, other.counts)
        )

    def to_text(self) -> str:
        """One ``one-line<TAB>count<TAB>denominator`` line per permutation"""
        return ''.join(
            f"{p.to_text()}\t{count}\t{self.denominator}\n" for p, count in self.items()
        )

    @classmethod
    def from_text(cls, text: str) -> 'DistributionTable':
        rows, counts, denominators = [], [], set()
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            parts = line.split('\t')
            if len(parts) != 3:
                raise ValidationError(f"Line {number}: expected three tab-separated fields")
            rows.append(parse_one_line(parts[0]))
            counts.append(int(parts[1]))
            denominators.add(int(parts[2]))
        if not rows or len(denominators) != 1:
            raise ValidationError("A table needs at least one line and a single denominator")
        return cls(len(rows[0]), np.asarray(rows), np.asarray(counts), denominators.pop())

    @classmethod
    def from_counts(cls, counts: Mapping[Permutation, int],
                    denominator: Optional[int] = None) -> 'DistributionTable':
        perms = list(counts)
        if not perms:
            raise ValidationError("A table needs at least one permutation")
        n = perms[0].n
        return cls(n, np.asarray([p.slots for p in perms]),
                   np.asarray([counts[p] for p in perms]), denominator)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'permutation': [p.to_text() for p, _ in self.items()],
            'count': self.counts,
            'denominator': self.denominator,
        })


@dataclass(eq=False)
class MarginalMatrix:
    """``entries[j - 1, a - 1]`` = P(card j ends in position a)"""
    n: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.float64)
        if self.entries.shape != (self.n, self.n):
            raise ValidationError(f"Expected a {self.n}x{self.n} matrix, got {self.entries.shape}")

    def entry(self, j: int, a: int) -> float:
        return float(self.entries[j - 1, a - 1])

    def row(self, j: int) -> np.ndarray:
        return self.entries[j - 1].copy()

    def transpose(self) -> 'MarginalMatrix':
        return MarginalMatrix(self.n, self.entries.T.copy())

    def stochastic_defect(self) -> float:
        """Largest deviation of a row or column sum from 1"""
        rows = np.abs(self.entries.sum(axis=1) - 1.0)
        columns = np.abs(self.entries.sum(axis=0) - 1.0)
        return float(max(rows.max(), columns.max()))

    def is_doubly_stochastic(self, tolerance: float = 1e-10) -> bool:
        in_range = np.all(self.entries >= -tolerance) and np.all(self.entries <= 1 + tolerance)
        return bool(in_range) and self.stochastic_defect() <= tolerance

    def check_doubly_stochastic(self, tolerance: float = 1e-10) -> None:
        if not self.is_doubly_stochastic(tolerance):
            raise ValidationError(
                f"Matrix is not doubly stochastic (defect {self.stochastic_defect():.3e})"
            )

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.entries, columns=[str(a) for a in range(1, self.n + 1)])
        frame.insert(0, 'j\\a', range(1, self.n + 1))
        return frame

    def to_csv(self) -> str:
        buffer = io.StringIO()
        self.to_frame().to_csv(buffer, **CSV_OPTIONS)
        return buffer.getvalue()


@dataclass(frozen=True)
class StatsSummary:
    prob_identity: Fraction
    min_prob: Fraction
    argmin: Permutation
    max_prob: Fraction
    argmax: Permutation
    derangement_prob: Fraction
    tv_to_uniform: float

    def rows(self):
        """(statistic, exact value, float value) triples in a fixed order"""
        return [
            ('prob_identity', str(self.prob_identity), float(self.prob_identity)),
            ('min_prob', str(self.min_prob), float(self.min_prob)),
            ('argmin', self.argmin.to_text(), None),
            ('max_prob', str(self.max_prob), float(self.max_prob)),
            ('argmax', self.argmax.to_text(), None),
            ('derangement_prob', str(self.derangement_prob), float(self.derangement_prob)),
            ('tv_to_uniform', None, self.tv_to_uniform),
        ]

    def to_dict(self) -> Dict:
        return {name: {'exact': exact, 'value': value} for name, exact, value in self.rows()}
