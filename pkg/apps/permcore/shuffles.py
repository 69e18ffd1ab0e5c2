"""Exact step semantics of the three shuffle kinds on a single deck.

Cards and positions are numbered from 1. Step j of every kind consumes one
uniform pick k from 1..n, including the no-op pick ("possibly itself").
"""
from typing import Optional

from django.core.exceptions import ValidationError

from .schema import ChoiceSequence, Permutation, ShuffleKind


def check_size(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"Deck size must be a positive integer, got {n!r}")


def identity(n: int) -> Permutation:
    check_size(n)
    return Permutation(tuple(range(1, n + 1)))


def right_cycle(n: int) -> Permutation:
    """Every card moved one position to the right, the last card to the front"""
    check_size(n)
    return Permutation((n,) + tuple(range(1, n)))


def invert(p: Permutation) -> Permutation:
    positions = [0] * p.n
    for position, card in enumerate(p.slots, start=1):
        positions[card - 1] = position
    return Permutation(tuple(positions))


def fixed_points(p: Permutation) -> int:
    return sum(1 for position, card in enumerate(p.slots, start=1) if position == card)


def apply_step(kind: ShuffleKind, state: Permutation, j: int, k: int) -> Permutation:
    """Apply step j with pick k and return the new deck"""
    kind = ShuffleKind.parse(kind)
    n = state.n
    if not 1 <= j <= n or not 1 <= k <= n:
        raise ValidationError(f"Step {j} and pick {k} must both lie in 1..{n}")

    slots = list(state.slots)
    if kind is ShuffleKind.POSITION_TRANSPOSITION:
        slots[j - 1], slots[k - 1] = slots[k - 1], slots[j - 1]
    elif kind is ShuffleKind.CARD_TRANSPOSITION:
        pj, pk = slots.index(j), slots.index(k)
        slots[pj], slots[pk] = k, j
    else:
        # card j leaves its slot and is reinserted so that it sits in position k
        slots.remove(j)
        slots.insert(k - 1, j)
    return Permutation(tuple(slots))


def run_shuffle(kind: ShuffleKind, n: int, choices: ChoiceSequence,
                start: Optional[Permutation] = None) -> Permutation:
    """Fold steps 1..n over the deck, starting from the identity unless told otherwise"""
    check_size(n)
    if choices.n != n:
        raise ValidationError(f"Choice sequence has {choices.n} picks for a deck of {n}")
    state = identity(n) if start is None else start
    if state.n != n:
        raise ValidationError(f"Start deck has {state.n} cards, expected {n}")
    for j, k in enumerate(choices.choices, start=1):
        state = apply_step(kind, state, j, k)
    return state
