"""Vectorized shuffle steps over many decks at once.

A batch is an ``(m, n)`` integer array of one-line decks (values 1..n) plus
the matching inverse array ``where`` (``where[r, c - 1]`` is the position of
card c in deck r). Both are updated in place, one step for every row.
"""
import numpy as np

from .schema import ShuffleKind

DECK_DTYPE = np.int16


def identity_batch(m: int, n: int):
    decks = np.tile(np.arange(1, n + 1, dtype=DECK_DTYPE), (m, 1))
    return decks, decks.copy()


def inverse_rows(decks: np.ndarray) -> np.ndarray:
    m, n = decks.shape
    where = np.empty_like(decks)
    positions = np.broadcast_to(np.arange(1, n + 1, dtype=decks.dtype), (m, n))
    np.put_along_axis(where, decks.astype(np.intp) - 1, positions, axis=1)
    return where


def apply_step_batch(kind: ShuffleKind, decks: np.ndarray, where: np.ndarray, j: int, picks) -> None:
    """Apply step j to every row; ``picks`` is a scalar or one pick per row"""
    m, n = decks.shape
    rows = np.arange(m)
    ks = np.broadcast_to(np.asarray(picks, dtype=np.intp), (m,))

    if kind is ShuffleKind.POSITION_TRANSPOSITION:
        at_j = decks[:, j - 1].copy()
        at_k = decks[rows, ks - 1]
        decks[:, j - 1] = at_k
        decks[rows, ks - 1] = at_j
        where[rows, at_j.astype(np.intp) - 1] = ks
        where[rows, at_k.astype(np.intp) - 1] = j
    elif kind is ShuffleKind.CARD_TRANSPOSITION:
        pj = where[:, j - 1].astype(np.intp)
        pk = where[rows, ks - 1].astype(np.intp)
        decks[rows, pj - 1] = ks
        decks[rows, pk - 1] = j
        where[:, j - 1] = pk
        where[rows, ks - 1] = pj
    else:
        if n == 1:
            return
        rest = decks[decks != j].reshape(m, n - 1)
        columns = np.arange(n)
        target = (ks - 1)[:, None]
        source = np.minimum(columns[None, :] - (columns[None, :] > target), n - 2)
        moved = np.take_along_axis(rest, source, axis=1)
        moved[columns[None, :] == target] = j
        decks[:] = moved
        where[:] = inverse_rows(decks)


def run_shuffle_batch(kind: ShuffleKind, choices: np.ndarray) -> np.ndarray:
    """Run one full pass for every row of ``choices`` (shape ``(m, n)``) from the identity"""
    kind = ShuffleKind.parse(kind)
    m, n = choices.shape
    decks, where = identity_batch(m, n)
    for j in range(1, n + 1):
        apply_step_batch(kind, decks, where, j, choices[:, j - 1])
    return decks


def key_weights(n: int) -> np.ndarray:
    """Place values of the base-n key; position 1 is the most significant digit"""
    return n ** np.arange(n - 1, -1, -1, dtype=np.int64)


def encode_keys(decks: np.ndarray) -> np.ndarray:
    """Integer keys whose numeric order is the lexicographic order of the decks"""
    n = decks.shape[1]
    return (decks.astype(np.int64) - 1) @ key_weights(n)


def decode_keys(keys: np.ndarray, n: int) -> np.ndarray:
    digits = (np.asarray(keys, dtype=np.int64)[:, None] // key_weights(n)[None, :]) % n
    return (digits + 1).astype(DECK_DTYPE)


def lex_permutations(n: int) -> np.ndarray:
    """All of S_n as an ``(n!, n)`` array in lexicographic order"""
    block = np.zeros((1, 0), dtype=np.int8)
    for size in range(1, n + 1):
        parts = []
        for first in range(1, size + 1):
            head = np.full((len(block), 1), first, dtype=np.int8)
            parts.append(np.hstack([head, block + (block >= first)]))
        block = np.vstack(parts).astype(np.int8)
    return block


def lex_keys(perms: np.ndarray, chunk: int = 1 << 20) -> np.ndarray:
    """``encode_keys`` in row chunks, for tables too large for one int64 copy"""
    keys = np.empty(len(perms), dtype=np.int64)
    for start in range(0, len(perms), chunk):
        keys[start:start + chunk] = encode_keys(perms[start:start + chunk])
    return keys
