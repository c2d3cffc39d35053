"""First appearance of each denominator in the breadth-first Calkin-Wilf stream.

``pi_bruteforce`` walks the tree with an explicit queue and is kept as the
reference. ``pi`` and ``build_pi_table`` scan indices in chunks, evaluating
fusc(k+2) for a whole chunk at once with numpy, and merge per-chunk minima.
"""
from __future__ import annotations

import logging
import os
import re
import warnings
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from cwlock.cw_core import CANONICAL, Convention, denominator_at
from cwlock.errors import (
    CapExceededError,
    DomainError,
    MalformedTableError,
    NotFoundWithinCapError,
    TableCoverageError,
)

log = logging.getLogger(__name__)

D_MIN = 2
DEFAULT_INDEX_CAP = 1 << 40
# fusc(k) < 2**63 for every k < 2**62, so int64 chunks cannot overflow below this
MAX_INDEX_CAP = 1 << 62
BRUTEFORCE_MAX_DEPTH = 25

HEADER_RE = re.compile(r"# pi-table v1 origin=([01]) include_root=([01])")
COLUMNS = "d,pi"


class ConventionMismatchWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ScanConfig:
    index_cap: int = DEFAULT_INDEX_CAP
    chunk: int = 1 << 16
    workers: int = 1

    def __post_init__(self):
        if not 1 <= self.index_cap <= MAX_INDEX_CAP:
            raise DomainError(f"index_cap must lie in [1, 2**62], got {self.index_cap}")
        if self.chunk < 1:
            raise DomainError(f"chunk must be >= 1, got {self.chunk}")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class PiTable:
    """pi(d) for every d in [2, d_max], stored under ``convention``.

    ``scan_high_water`` is the canonical index at which a sequential scan
    would have stopped, i.e. the largest canonical first appearance.
    """

    d_max: int
    values: tuple[int, ...]
    convention: Convention = CANONICAL
    scan_high_water: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.d_max < D_MIN:
            raise DomainError(f"d_max must be >= {D_MIN}, got {self.d_max}")
        if len(self.values) != self.d_max - D_MIN + 1:
            raise DomainError(
                f"expected {self.d_max - D_MIN + 1} values for d in [2, {self.d_max}], "
                f"got {len(self.values)}"
            )

    @property
    def d_min(self) -> int:
        return D_MIN

    def covers(self, d: int) -> bool:
        return D_MIN <= d <= self.d_max

    def require(self, ds: Iterable[int]) -> None:
        missing = sorted({d for d in ds if not self.covers(d)})
        if missing:
            raise TableCoverageError(missing)

    def __getitem__(self, d: int) -> int:
        if not self.covers(d):
            raise TableCoverageError([d])
        return self.values[d - D_MIN]

    def __len__(self):
        return len(self.values)

    def items(self):
        return zip(range(D_MIN, self.d_max + 1), self.values)

    def as_dict(self) -> dict[int, int]:
        return dict(self.items())

    def with_convention(self, convention: Convention) -> PiTable:
        delta = convention.shift - self.convention.shift
        if delta == 0 and convention == self.convention:
            return self
        return PiTable(
            self.d_max,
            tuple(v + delta for v in self.values),
            convention,
            self.scan_high_water,
        )

    def is_consistent(self) -> bool:
        """Every entry indexes a node whose denominator is its d."""
        shift = self.convention.shift
        return all(denominator_at(v - shift) == d for d, v in self.items())


def pi_bruteforce(d: int, depth_cap: int = BRUTEFORCE_MAX_DEPTH) -> int:
    """Canonical pi(d) from an explicit queue-based BFS of the tree."""
    if d < D_MIN:
        raise DomainError(f"pi is defined for d >= 2, got {d}")
    if not 0 <= depth_cap <= BRUTEFORCE_MAX_DEPTH:
        raise DomainError(f"depth_cap must lie in [0, {BRUTEFORCE_MAX_DEPTH}], got {depth_cap}")
    end = (1 << (depth_cap + 1)) - 1  # one past the last index at depth_cap
    last_parent = (1 << depth_cap) - 1
    queue = deque([(1, 1)])
    k = 0
    while k < end:
        num, den = queue.popleft()
        if den == d:
            return k
        if k < last_parent:
            queue.append((num, num + den))
            queue.append((num + den, den))
        k += 1
    raise NotFoundWithinCapError(f"denominator {d} not found up to depth {depth_cap}")


def fusc_array(m: np.ndarray) -> np.ndarray:
    """Elementwise fusc over a nonnegative int64 array."""
    m = np.array(m, dtype=np.int64)
    a = np.ones_like(m)
    b = np.zeros_like(m)
    if m.size == 0:
        return b
    # after an element's bits run out only `a` keeps changing, which is harmless
    for _ in range(int(m.max()).bit_length()):
        odd = (m & 1).astype(bool)
        s = a + b
        b = np.where(odd, s, b)
        a = np.where(odd, a, s)
        m >>= 1
    return b


def _scan_chunk(start: int, stop: int, d_lo: int, d_hi: int):
    ks = np.arange(start, stop, dtype=np.int64)
    dens = fusc_array(ks + 2)
    sel = (dens >= d_lo) & (dens <= d_hi)
    vals, pos = np.unique(dens[sel], return_index=True)
    return vals, ks[sel][pos]


def _scan(
    d_lo: int,
    d_hi: int,
    cfg: ScanConfig,
    progress: Optional[Callable[[int, int], None]] = None,
) -> np.ndarray:
    """Canonical first index of every denominator in [d_lo, d_hi].

    Work proceeds in rounds of ``cfg.workers`` consecutive chunks; the scan
    stops after the first round that completes the set, so the result does
    not depend on chunk size or worker count.
    """
    first = np.full(d_hi - d_lo + 1, -1, dtype=np.int64)
    remaining = first.size
    start = 0
    pool = ThreadPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        while remaining:
            if start >= cfg.index_cap:
                missing = (np.flatnonzero(first < 0) + d_lo).tolist()
                raise CapExceededError(missing, cfg.index_cap - 1)
            stop = min(start + cfg.chunk * cfg.workers, cfg.index_cap)
            spans = [(s, min(s + cfg.chunk, stop)) for s in range(start, stop, cfg.chunk)]
            if pool is None:
                results = [_scan_chunk(s, e, d_lo, d_hi) for s, e in spans]
            else:
                results = list(pool.map(lambda se: _scan_chunk(se[0], se[1], d_lo, d_hi), spans))
            for vals, ks in results:
                slot = vals - d_lo
                cur = first[slot]
                upd = (cur < 0) | (ks < cur)
                first[slot[upd]] = ks[upd]
            remaining = int(np.count_nonzero(first < 0))
            start = stop
            if progress is not None:
                progress(start, remaining)
    finally:
        if pool is not None:
            pool.shutdown()
    return first


def pi(d: int, cfg: Optional[ScanConfig] = None, convention: Convention = CANONICAL) -> int:
    """First breadth-first index whose denominator is d."""
    if d < D_MIN:
        raise DomainError(f"pi is defined for d >= 2, got {d}")
    k = int(_scan(d, d, cfg or ScanConfig())[0])
    return convention.to_reported(k)


def build_pi_table(
    d_max: int,
    cfg: Optional[ScanConfig] = None,
    convention: Convention = CANONICAL,
    progress: Optional[Callable[[int, int], None]] = None,
) -> PiTable:
    if d_max < D_MIN:
        raise DomainError(f"d_max must be >= {D_MIN}, got {d_max}")
    cfg = cfg or ScanConfig()
    first = _scan(D_MIN, d_max, cfg, progress)
    high_water = int(first.max())
    log.debug("pi-table to d_max=%d complete at index %d", d_max, high_water)
    table = PiTable(d_max, tuple(int(v) for v in first), CANONICAL, high_water)
    return table.with_convention(convention)


def format_table(t: PiTable) -> str:
    lines = [
        f"# pi-table v1 origin={t.convention.origin} include_root={int(t.convention.include_root)}",
        COLUMNS,
    ]
    lines.extend(f"{d},{v}" for d, v in t.items())
    return "\n".join(lines) + "\n"


def save_table(t: PiTable, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_table(t))


def parse_table(text: str, expected: Optional[Convention] = None) -> PiTable:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedTableError("empty file", line=1)
    m = HEADER_RE.fullmatch(lines[0])
    if m is None:
        raise MalformedTableError(f"bad header {lines[0]!r}", line=1)
    convention = Convention(int(m.group(1)), m.group(2) == "1")
    if len(lines) < 2 or lines[1] != COLUMNS:
        raise MalformedTableError(f"expected column line {COLUMNS!r}", line=2)
    if len(lines) < 3:
        raise MalformedTableError("no data rows", line=3)

    values = []
    for lineno, line in enumerate(lines[2:], start=3):
        parts = line.split(",")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise MalformedTableError(f"expected '<d>,<pi>', got {line!r}", line=lineno)
        d, v = int(parts[0]), int(parts[1])
        want = D_MIN + len(values)
        if d != want:
            raise MalformedTableError(
                f"denominators must run 2, 3, 4, ... without gaps; expected {want}, got {d}",
                line=lineno,
            )
        values.append(v)

    if expected is not None and expected != convention:
        warnings.warn(
            f"table uses {convention.label}, expected {expected.label}",
            ConventionMismatchWarning,
            stacklevel=3,
        )
    high_water = max(values) - convention.shift
    return PiTable(D_MIN + len(values) - 1, tuple(values), convention, high_water)


def load_table(path: str | os.PathLike, expected: Optional[Convention] = None) -> PiTable:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    return parse_table(text, expected)
