"""Closed forms for the single-card marginals of the cyclic transposition shuffles.

For the card kind with j != a, q = 1/n and r = 1 - q, the probability that
card j ends in position a is

    q r^(n-j) + q r^(n-1) [j < a]
      + sum_{m=(j-a)+ + 1}^{n-a} C(n-a, m) q^(m+1) r^(n-m-1)
      + sum_{m=1}^{(j-a)+} q^(m+1) r^(n-m-1) sum_{s=j+1}^{n} C(s-1-a, m-1)

and the position kind is the same expression with j and a exchanged.
"""
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

import numpy as np
from django.core.exceptions import ValidationError
from scipy import stats

from apps.permcore.exceptions import ResourceLimitError
from apps.permcore.schema import ShuffleKind
from apps.permcore.shuffles import check_size

from .tables import MarginalMatrix

logger = logging.getLogger(__name__)

METHODS = ('hockey', 'direct', 'tails')
CATALAN_MAX_N = 35


def binomial_tail(N: int, q: float, k: int, side: str = 'upper') -> float:
    """P(Bin(N, q) >= k) for ``side='upper'``, P(Bin(N, q) <= k) for ``side='lower'``"""
    if N < 0:
        raise ValidationError(f"Binomial size must be non-negative, got {N}")
    if not 0.0 <= q <= 1.0:
        raise ValidationError(f"Binomial probability must lie in [0, 1], got {q}")
    if side == 'upper':
        if k <= 0:
            return 1.0
        return float(stats.binom.sf(k - 1, N, q))
    if side == 'lower':
        if k < 0:
            return 0.0
        return float(stats.binom.cdf(k, N, q))
    raise ValidationError(f"Tail side must be 'upper' or 'lower', got {side!r}")


@lru_cache(maxsize=64)
def _term_prefix(n: int, N: int) -> np.ndarray:
    """Prefix sums of C(N, m) q^(m+1) r^(n-m-1) over m = 1..N; entry 0 is the empty sum"""
    terms = np.zeros(N + 1)
    term = (1.0 / n) * (1.0 - 1.0 / n) ** (n - 1)
    for m in range(N):
        term *= (N - m) / ((m + 1) * (n - 1))
        terms[m + 1] = term
    return np.cumsum(terms)


def _check_offdiag(kind, n: int, j: int, a: int) -> ShuffleKind:
    kind = ShuffleKind.parse(kind)
    if kind is ShuffleKind.CARD_INSERTION:
        raise ValidationError("The closed-form marginal covers the transposition kinds only")
    check_size(n)
    if not (1 <= j <= n and 1 <= a <= n):
        raise ValidationError(f"Card {j} and position {a} must both lie in 1..{n}")
    if j == a:
        raise ValidationError("The off-diagonal formula needs j != a")
    return kind


def _card_hockey(n: int, j: int, a: int) -> float:
    q = 1.0 / n
    r = 1.0 - q
    d = max(j - a, 0)
    first = q * r ** (n - j)
    second = q * r ** (n - 1) if j < a else 0.0
    # hockey stick: sum_{s=j+1}^{n} C(s-1-a, m-1) = C(n-a, m) - C(j-a, m)
    rest = _term_prefix(n, n - a)[n - a] - _term_prefix(n, d)[d]
    return math.fsum([first, second, float(rest)])


def _card_tails(n: int, j: int, a: int) -> float:
    q = 1.0 / n
    r = 1.0 - q
    d = max(j - a, 0)
    terms = [q * r ** (n - j)]
    if j < a:
        terms.append(q * r ** (n - 1))
    terms.append(q * r ** (a - 1) * binomial_tail(n - a, q, d + 1, 'upper'))
    for s in range(j + 1, n + 1):
        if d == 0:
            break
        terms.append(q * q * r ** (n - s + a - 1) * binomial_tail(s - 1 - a, q, d - 1, 'lower'))
    return math.fsum(terms)


def _card_fraction(n: int, j: int, a: int) -> Fraction:
    q = Fraction(1, n)
    r = 1 - q
    d = max(j - a, 0)
    total = q * r ** (n - j)
    if j < a:
        total += q * r ** (n - 1)
    for m in range(d + 1, n - a + 1):
        total += r ** (n - m - 1) * q ** (m + 1) * math.comb(n - a, m)
    for m in range(1, d + 1):
        inner = sum(math.comb(s - 1 - a, m - 1) for s in range(j + 1, n + 1))
        total += r ** (n - m - 1) * q ** (m + 1) * inner
    return total


def exact_offdiag_fraction(kind, n: int, j: int, a: int) -> Fraction:
    """The off-diagonal marginal as an exact rational with denominator dividing n**n"""
    kind = _check_offdiag(kind, n, j, a)
    if kind is ShuffleKind.POSITION_TRANSPOSITION:
        j, a = a, j
    return _card_fraction(n, j, a)


def exact_offdiag_marginal(kind, n: int, j: int, a: int, method: str = 'hockey') -> float:
    """P(card j ends in position a) for j != a, starting from the identity"""
    kind = _check_offdiag(kind, n, j, a)
    if method not in METHODS:
        raise ValidationError(f"Unknown method {method!r}; expected one of {', '.join(METHODS)}")
    if kind is ShuffleKind.POSITION_TRANSPOSITION:
        j, a = a, j
    if method == 'direct':
        return float(_card_fraction(n, j, a))
    if method == 'tails':
        return _card_tails(n, j, a)
    return _card_hockey(n, j, a)


def exact_marginal_matrix(kind, n: int, method: str = 'hockey') -> MarginalMatrix:
    """Full marginal matrix; each diagonal entry is the complement of its row"""
    kind = ShuffleKind.parse(kind)
    check_size(n)
    logger.info("Closed-form marginal matrix kind=%s n=%d method=%s", kind.value, n, method)
    entries = np.zeros((n, n))
    for j in range(1, n + 1):
        row = [exact_offdiag_marginal(kind, n, j, a, method) for a in range(1, n + 1) if a != j]
        entries[j - 1, [a - 1 for a in range(1, n + 1) if a != j]] = row
        entries[j - 1, j - 1] = 1.0 - math.fsum(row)
    matrix = MarginalMatrix(n, entries)
    matrix.check_doubly_stochastic()
    return matrix


def catalan(n: int) -> int:
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"Catalan index must be a positive integer, got {n!r}")
    if n > CATALAN_MAX_N:
        raise ResourceLimitError(f"Catalan number C_{n} does not fit a 64-bit integer")
    return math.comb(2 * n, n) // (n + 1)


def cited_lower_bound(n: int) -> Fraction:
    """2^(n-1)/n^n, the smallest probability of the position shuffle (at the right-cycle)"""
    check_size(n)
    return Fraction(2 ** (n - 1), n ** n)


def insertion_bounds(n: int) -> Tuple[Fraction, Fraction]:
    """Sharp bounds on every probability of the insertion shuffle"""
    return cited_lower_bound(n), Fraction(catalan(n), n ** n)


def identity_asymptotic(n: int) -> float:
    """Asymptotic form of n^n times the position-shuffle probability of the identity"""
    check_size(n)
    log_value = 0.5 * n * math.log(n) - 0.5 * n + math.sqrt(n) - 0.25 - 0.5 * math.log(2.0)
    return math.exp(log_value)
