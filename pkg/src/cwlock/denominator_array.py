"""Coordinates in the denominator-first array.

The array concatenates rows U(a) = (1/a, 2/a, ..., (a-1)/a) for a = 2, 3, ...
without reducing any entry. Row a starts at flat index (a-2)(a-1)/2.
Nothing is materialized; every function here is index arithmetic.
"""
from __future__ import annotations

from math import isqrt
from typing import NamedTuple

from cwlock.errors import ArithmeticOverflowError, DomainError

INDEX_LIMIT = 1 << 63


class ArrayPosition(NamedTuple):
    index: int
    row: int
    offset: int


def _tri(m: int) -> int:
    return m * (m + 1) // 2


def i0(a: int) -> int:
    """Flat index of 1/a, the first entry of row a."""
    if a < 2:
        raise DomainError(f"rows start at a=2, got {a}")
    v = (a - 2) * (a - 1) // 2
    if v >= INDEX_LIMIT:
        raise ArithmeticOverflowError(f"i0({a}) exceeds the 63-bit index range")
    return v


def position_of_index(i: int) -> ArrayPosition:
    if i < 0:
        raise DomainError(f"index must be >= 0, got {i}")
    # i0(a) = tri(a-2); find the largest m with tri(m) <= i
    m = (isqrt(8 * i + 1) - 1) // 2
    while _tri(m) > i:
        m -= 1
    while _tri(m + 1) <= i:
        m += 1
    return ArrayPosition(i, m + 2, i - _tri(m))


def entry(i: int) -> tuple[int, int]:
    """The unreduced pair (numerator, denominator) at flat index i."""
    _, row, offset = position_of_index(i)
    return offset + 1, row


def mirror_window(n: int) -> tuple[int, int]:
    """Index interval [i0(n) - (n-2), i0(n) + (n-2)] centred on row n's start."""
    c = i0(n)
    return c - (n - 2), c + (n - 2)
