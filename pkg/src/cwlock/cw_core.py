"""Exact arithmetic for the Calkin-Wilf tree.

Nodes are addressed three ways: by a root-to-node word over {L, R}, by the
0-based breadth-first index k, and by the fraction stored at the node.
A left step maps a/b to a/(a+b), a right step maps a/b to (a+b)/b.

The breadth-first fraction at index k is fusc(k+1)/fusc(k+2), where fusc is
Stern's diatomic sequence.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from cwlock.errors import ArithmeticOverflowError, DomainError, OutOfRangeError

MAX_WORD_LEN = 62
U64_LIMIT = 1 << 64
MAX_RANK = (1 << 63) - 2


def _checked(x: int) -> int:
    if x >= U64_LIMIT:
        raise ArithmeticOverflowError(f"value {x} does not fit in 64 bits")
    return x


@dataclass(frozen=True)
class LRWord:
    """A path from the root, packed into an integer.

    The first step from the root is the most significant of the `length`
    low bits; L is 0 and R is 1.
    """

    bits: int = 0
    length: int = 0

    def __post_init__(self):
        if not 0 <= self.length <= MAX_WORD_LEN:
            raise OutOfRangeError(f"word length {self.length} outside [0, {MAX_WORD_LEN}]")
        if not 0 <= self.bits < (1 << self.length):
            raise DomainError(f"bits {self.bits:#x} do not fit in {self.length} letters")

    @classmethod
    def from_string(cls, s: str) -> LRWord:
        if s in ("", "ε"):
            return cls()
        s = s.upper()
        if set(s) - {"L", "R"}:
            raise DomainError(f"not a word over {{L,R}}: {s!r}")
        return cls(int(s.replace("L", "0").replace("R", "1"), 2), len(s))

    def letters(self) -> str:
        if self.length == 0:
            return ""
        return format(self.bits, f"0{self.length}b").replace("0", "L").replace("1", "R")

    def __len__(self):
        return self.length

    def __iter__(self):
        return iter(self.letters())

    def __str__(self):
        return self.letters() or "ε"


class Mat2(NamedTuple):
    """Row-major 2x2 matrix ((a, b), (c, d)) with nonnegative entries."""

    a: int
    b: int
    c: int
    d: int

    def __matmul__(self, other: Mat2) -> Mat2:
        return Mat2(
            _checked(self.a * other.a + self.b * other.c),
            _checked(self.a * other.b + self.b * other.d),
            _checked(self.c * other.a + self.d * other.c),
            _checked(self.c * other.b + self.d * other.d),
        )

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def lower_left(self) -> int:
        return self.c

    def apply(self, x: int, y: int) -> tuple[int, int]:
        return _checked(self.a * x + self.b * y), _checked(self.c * x + self.d * y)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.a, self.b), (self.c, self.d)


IDENTITY = Mat2(1, 0, 0, 1)
L_MAT = Mat2(1, 0, 1, 1)
R_MAT = Mat2(1, 1, 0, 1)


class Fraction(NamedTuple):
    num: int
    den: int

    def __str__(self):
        return f"{self.num}/{self.den}"


@dataclass(frozen=True)
class Convention:
    """How breadth-first positions are numbered when reported.

    The canonical numbering puts the root 1/1 at index 0. ``origin=1``
    drops the root from the count, so 1/2 sits at index 0. With
    ``include_root=False`` the root is not the zeroth node: positions are
    ordinals and the root is node 1. A reported index equals the canonical
    one plus ``shift``.
    """

    origin: int = 0
    include_root: bool = True

    def __post_init__(self):
        if self.origin not in (0, 1):
            raise DomainError(f"origin must be 0 or 1, got {self.origin}")

    @property
    def shift(self) -> int:
        return (0 if self.include_root else 1) - self.origin

    def to_reported(self, k: int) -> int:
        return k + self.shift

    def to_canonical(self, k: int) -> int:
        return k - self.shift

    @property
    def label(self) -> str:
        return f"origin={self.origin} include_root={int(self.include_root)}"

    def as_dict(self) -> dict:
        return {"origin": self.origin, "include_root": int(self.include_root)}


CANONICAL = Convention(0, True)
ROOT_EXCLUDED = Convention(1, True)
ROOT_AT_ONE = Convention(0, False)
STANDARD_CONVENTIONS = (CANONICAL, ROOT_EXCLUDED, ROOT_AT_ONE)


def word_matrix(w: LRWord) -> Mat2:
    """Product of generator matrices, last step leftmost.

    With this order ``word_matrix(w).apply(1, 1)`` is the node's fraction.
    """
    m = IDENTITY
    for letter in w:
        m = (L_MAT if letter == "L" else R_MAT) @ m
    return m


def fraction_at_word(w: LRWord) -> Fraction:
    num, den = 1, 1
    for letter in w:
        if letter == "L":
            den = _checked(num + den)
        else:
            num = _checked(num + den)
    return Fraction(num, den)


def bf_rank(w: LRWord) -> int:
    return (1 << w.length) - 1 + w.bits


def word_at_rank(k: int) -> LRWord:
    if k < 0 or k > MAX_RANK:
        raise OutOfRangeError(f"breadth-first index {k} outside [0, {MAX_RANK}]")
    length = (k + 1).bit_length() - 1
    return LRWord((k + 1) - (1 << length), length)


def fusc(m: int) -> int:
    """Stern's diatomic sequence s(m), one pass over the bits of m."""
    if m < 0:
        raise DomainError(f"fusc is defined for m >= 0, got {m}")
    # invariant: s(original m) = a*s(m) + b*s(m+1)
    a, b = 1, 0
    while m:
        if m & 1:
            b = _checked(a + b)
        else:
            a = _checked(a + b)
        m >>= 1
    return b


def cw_fraction(k: int) -> Fraction:
    if k < 0:
        raise DomainError(f"breadth-first index must be >= 0, got {k}")
    return Fraction(fusc(k + 1), fusc(k + 2))


def denominator_at(k: int) -> int:
    if k < 0:
        raise DomainError(f"breadth-first index must be >= 0, got {k}")
    return fusc(k + 2)
