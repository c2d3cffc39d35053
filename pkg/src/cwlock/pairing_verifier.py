"""Level-by-level evaluation of the locking and pairing statements.

For a level n and 0 <= i <= n-2 the deviations are

    F+(i) = pi(n+i) - (i0(n) + i)
    F-(i) = (i0(n) - i) - pi(n-i)

and i is a pairing witness when both vanish. Nothing here assumes the
statements hold; every outcome, including failure, is data in the report.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional, Sequence

from cwlock import __version__
from cwlock.cw_core import CANONICAL, STANDARD_CONVENTIONS, Convention, LRWord, word_at_rank, word_matrix
from cwlock.denominator_array import i0, mirror_window
from cwlock.errors import DomainError
from cwlock.first_appearance import PiTable, ScanConfig, build_pi_table

CSV_COLUMNS = (
    "n",
    "i0",
    "locks",
    "witness_count",
    "first_witness",
    "max_step_plus",
    "max_step_minus",
)


def _check_level(n: int) -> None:
    if n < 2:
        raise DomainError(f"levels start at n=2, got {n}")


def _level_denominators(n: int) -> range:
    return range(2, 2 * n - 1)


@dataclass(frozen=True)
class FProfile:
    n: int
    f_plus: tuple[int, ...]
    f_minus: tuple[int, ...]

    @property
    def c_values(self) -> tuple[int, ...]:
        return tuple(p - m for p, m in zip(self.f_plus, self.f_minus))


@dataclass(frozen=True)
class LemmaCheck:
    monotone_plus: bool
    monotone_minus: bool
    max_step_plus: int
    max_step_minus: int
    two_sided_plus: bool
    two_sided_minus: bool

    def as_dict(self) -> dict:
        return {
            "monotone_plus": self.monotone_plus,
            "monotone_minus": self.monotone_minus,
            "max_step_plus": self.max_step_plus,
            "max_step_minus": self.max_step_minus,
            "two_sided_plus": self.two_sided_plus,
            "two_sided_minus": self.two_sided_minus,
        }


@dataclass(frozen=True)
class IvtTrace:
    i1: Optional[int]
    i2: Optional[int]
    c_values: tuple[int, ...]


@dataclass(frozen=True)
class MinimalWord:
    d: int
    rank: int
    word: LRWord
    lower_left: int
    canonical_den: int

    @property
    def lower_left_matches(self) -> bool:
        return self.lower_left == self.d

    @property
    def canonical_matches(self) -> bool:
        return self.canonical_den == self.d


@dataclass(frozen=True)
class LevelReport:
    n: int
    i0: int
    window: tuple[int, int]
    witnesses: tuple[int, ...]
    locks_n: bool
    lemma: LemmaCheck
    ivt: IvtTrace

    @property
    def theorem_holds(self) -> bool:
        return bool(self.witnesses)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "i0": self.i0,
            "window": list(self.window),
            "witnesses": list(self.witnesses),
            "locks_n": self.locks_n,
            "lemma": self.lemma.as_dict(),
            "ivt": {"i1": self.ivt.i1, "i2": self.ivt.i2},
        }

    def csv_row(self) -> list:
        return [
            self.n,
            self.i0,
            int(self.locks_n),
            len(self.witnesses),
            self.witnesses[0] if self.witnesses else "",
            self.lemma.max_step_plus,
            self.lemma.max_step_minus,
        ]


@dataclass(frozen=True)
class VerificationRun:
    n_range: tuple[int, int]
    convention: Convention
    reports: tuple[LevelReport, ...]
    tool_version: str = __version__

    @property
    def holds(self) -> int:
        return sum(r.theorem_holds for r in self.reports)

    @property
    def fails(self) -> int:
        return len(self.reports) - self.holds

    @property
    def failing_levels(self) -> list[int]:
        return [r.n for r in self.reports if not r.theorem_holds]

    @property
    def running_max_step(self) -> tuple[int, int]:
        """Largest single-step increase of F+ and F- over the whole range."""
        return (
            max(r.lemma.max_step_plus for r in self.reports),
            max(r.lemma.max_step_minus for r in self.reports),
        )

    def as_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "convention": self.convention.as_dict(),
            "n_lo": self.n_range[0],
            "n_hi": self.n_range[1],
            "summary": {"levels": len(self.reports), "holds": self.holds, "fails": self.fails},
            "reports": [r.as_dict() for r in self.reports],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# tool_version={self.tool_version} {self.convention.label}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.reports:
            w.writerow(r.csv_row())
        return buf.getvalue()


def f_profile(n: int, table: PiTable) -> FProfile:
    _check_level(n)
    table.require(_level_denominators(n))
    c = i0(n)
    plus = tuple(table[n + i] - (c + i) for i in range(n - 1))
    minus = tuple((c - i) - table[n - i] for i in range(n - 1))
    return FProfile(n, plus, minus)


def locks(a: int, table: PiTable) -> bool:
    """Row a locks when its first appearance sits exactly at i0(a)."""
    _check_level(a)
    return table[a] == i0(a)


def _witnesses_from_profile(prof: FProfile) -> list[int]:
    return [i for i, (p, m) in enumerate(zip(prof.f_plus, prof.f_minus)) if p == 0 and m == 0]


def pairing_witnesses(n: int, table: PiTable) -> list[int]:
    """All i in [0, n-2] at which both n-i and n+i land on their symmetric slots."""
    return _witnesses_from_profile(f_profile(n, table))


def pairing_witnesses_exhaustive(n: int, table: PiTable) -> list[int]:
    """Direct check of both equalities for every i, without F profiles."""
    _check_level(n)
    table.require(_level_denominators(n))
    c = i0(n)
    return [i for i in range(n - 1) if table[n + i] == c + i and table[n - i] == c - i]


def _lemma_from_profile(prof: FProfile) -> LemmaCheck:
    def steps(f):
        return [f[i + 1] - f[i] for i in range(len(f) - 1)]

    sp, sm = steps(prof.f_plus), steps(prof.f_minus)
    return LemmaCheck(
        monotone_plus=all(s >= 0 for s in sp),
        monotone_minus=all(s >= 0 for s in sm),
        max_step_plus=max(sp, default=0),
        max_step_minus=max(sm, default=0),
        two_sided_plus=prof.f_plus[0] <= 0 <= prof.f_plus[-1],
        two_sided_minus=prof.f_minus[0] <= 0 <= prof.f_minus[-1],
    )


def check_lemma(n: int, table: PiTable) -> LemmaCheck:
    return _lemma_from_profile(f_profile(n, table))


def _ivt_from_profile(prof: FProfile) -> IvtTrace:
    i1 = next((i for i, v in enumerate(prof.f_plus) if v <= 0), None)
    i2 = next((i for i, v in enumerate(prof.f_minus) if v <= 0), None)
    return IvtTrace(i1, i2, prof.c_values)


def ivt_trace(n: int, table: PiTable) -> IvtTrace:
    return _ivt_from_profile(f_profile(n, table))


def minimal_word(d: int, table: PiTable) -> MinimalWord:
    """Word at the first appearance of d, with both readings of its matrix."""
    rank = table.convention.to_canonical(table[d])
    w = word_at_rank(rank)
    m = word_matrix(w)
    return MinimalWord(d, rank, w, m.lower_left, m.c + m.d)


def level_report(n: int, table: PiTable) -> LevelReport:
    prof = f_profile(n, table)
    witnesses = tuple(_witnesses_from_profile(prof))
    return LevelReport(
        n=n,
        i0=i0(n),
        window=mirror_window(n),
        witnesses=witnesses,
        locks_n=locks(n, table),
        lemma=_lemma_from_profile(prof),
        ivt=_ivt_from_profile(prof),
    )


def required_d_max(hi: int) -> int:
    return max(2, 2 * hi - 2)


def verify_range(
    lo: int,
    hi: int,
    convention: Convention = CANONICAL,
    cfg: Optional[ScanConfig] = None,
    table: Optional[PiTable] = None,
) -> VerificationRun:
    """One report per level n in [lo, hi] under ``convention``.

    ``table`` may be supplied in any convention and is converted; otherwise
    it is built with ``cfg``.
    """
    if not 2 <= lo <= hi:
        raise DomainError(f"need 2 <= lo <= hi, got lo={lo} hi={hi}")
    if table is None:
        table = build_pi_table(required_d_max(hi), cfg)
    table.require(_level_denominators(hi))
    table = table.with_convention(convention)
    reports = tuple(level_report(n, table) for n in range(lo, hi + 1))
    return VerificationRun((lo, hi), convention, reports)


def verify_conventions(
    lo: int,
    hi: int,
    conventions: Sequence[Convention] = STANDARD_CONVENTIONS,
    cfg: Optional[ScanConfig] = None,
    table: Optional[PiTable] = None,
) -> list[VerificationRun]:
    """``verify_range`` under several conventions, sharing a single scan."""
    if not 2 <= lo <= hi:
        raise DomainError(f"need 2 <= lo <= hi, got lo={lo} hi={hi}")
    if table is None:
        table = build_pi_table(required_d_max(hi), cfg)
    return [verify_range(lo, hi, c, table=table) for c in conventions]
