import math
from fractions import Fraction

import numpy as np

from apps.permcore.batch import decode_keys, encode_keys, lex_keys, lex_permutations
from apps.permcore.schema import Permutation
from apps.permcore.shuffles import identity, right_cycle

from .formulas import identity_asymptotic
from .tables import DistributionTable, StatsSummary


def tv_to_uniform(table: DistributionTable) -> float:
    """Half the L1 distance to the uniform law, counting every permutation outside the support"""
    uniform = 1.0 / math.factorial(table.n)
    missing = math.factorial(table.n) - table.support_size
    gaps = np.abs(table.counts / table.denominator - uniform)
    return 0.5 * math.fsum(np.append(gaps, missing * uniform))


def _first_missing(table: DistributionTable) -> Permutation:
    """Lexicographically smallest permutation the table gives probability zero"""
    keys = lex_keys(lex_permutations(table.n))
    absent = keys[~np.isin(keys, table.keys, assume_unique=True)]
    return Permutation(tuple(decode_keys(absent[:1], table.n)[0].tolist()))


def _argmin_row(table: DistributionTable) -> int:
    """Row of the least likely permutation: the right-cycle when it ties for the minimum, else lex first"""
    lowest = np.flatnonzero(table.counts == table.counts.min())
    cycle_key = encode_keys(np.asarray([right_cycle(table.n).slots]))[0]
    preferred = lowest[table.keys[lowest] == cycle_key]
    return int(preferred[0]) if len(preferred) else int(lowest[0])


def distribution_stats(table: DistributionTable) -> StatsSummary:
    n, denominator = table.n, table.denominator
    if table.support_size < math.factorial(n):
        min_prob, argmin = Fraction(0), _first_missing(table)
    else:
        low = _argmin_row(table)
        min_prob = Fraction(int(table.counts[low]), denominator)
        argmin = Permutation(tuple(table.perms[low].tolist()))
    high = int(np.argmax(table.counts))

    deranged = np.all(table.perms != np.arange(1, n + 1), axis=1)
    return StatsSummary(
        prob_identity=table.probability(identity(n)),
        min_prob=min_prob,
        argmin=argmin,
        max_prob=Fraction(int(table.counts[high]), denominator),
        argmax=Permutation(tuple(table.perms[high].tolist())),
        derangement_prob=Fraction(int(table.counts[deranged].sum()), denominator),
        tv_to_uniform=tv_to_uniform(table),
    )


def identity_asymptotic_ratio(table: DistributionTable) -> float:
    """n^n times the probability of the identity, over its asymptotic form"""
    scaled = table.probability(identity(table.n)) * table.n ** table.n
    return float(scaled) / identity_asymptotic(table.n)
