"""Tuple permutations of {0..n} used for corner bijections."""

from __future__ import annotations

from typing import Sequence, Tuple


def identity(n_items: int) -> Tuple[int, ...]:
    return tuple(range(n_items))


def invert(p: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def compose(p: Sequence[int], q: Sequence[int]) -> Tuple[int, ...]:
    """p after q: returns the map i -> p[q[i]]."""
    return tuple(p[x] for x in q)


def sign(p: Sequence[int]) -> int:
    """Parity of a permutation, +1 or -1, by cycle counting."""
    seen = [False] * len(p)
    s = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def is_perm(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))
