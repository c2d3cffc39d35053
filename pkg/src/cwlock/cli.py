"""Command-line front end.

Exit codes: 0 success, 1 usage, 3 compute or I/O failure, 4 ``--expect-hold``
found a level without a pairing witness.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from typing import Optional, Sequence

from cwlock import __version__
from cwlock.cw_core import STANDARD_CONVENTIONS, Convention, cw_fraction, word_at_rank
from cwlock.denominator_array import i0
from cwlock.errors import CapExceededError, CwlockError, MalformedTableError, NotFoundWithinCapError
from cwlock.first_appearance import (
    DEFAULT_INDEX_CAP,
    PiTable,
    ScanConfig,
    build_pi_table,
    format_table,
    load_table,
)
from cwlock.pairing_verifier import required_d_max, verify_conventions

log = logging.getLogger("cwlock")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTE = 3
EXIT_EXPECTATION = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_range(text: str, minimum: int) -> tuple[int, int]:
    """Parse ``a..b`` (inclusive) or a single integer."""
    lo_s, sep, hi_s = text.partition("..")
    try:
        lo = int(lo_s)
        hi = int(hi_s) if sep else lo
    except ValueError:
        raise UsageError(f"not an integer or a..b range: {text!r}") from None
    if lo < minimum:
        raise UsageError(f"values must be >= {minimum}, got {lo}")
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def _env_int(name: str) -> Optional[int]:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def scan_config(args) -> ScanConfig:
    workers = args.workers if args.workers is not None else _env_int("CWLOCK_WORKERS")
    cap = args.index_cap if args.index_cap is not None else _env_int("CWLOCK_INDEX_CAP")
    workers = workers if workers is not None else (os.cpu_count() or 1)
    cap = cap if cap is not None else DEFAULT_INDEX_CAP
    try:
        return ScanConfig(index_cap=cap, chunk=args.chunk, workers=workers)
    except CwlockError as exc:
        raise UsageError(str(exc)) from None


def convention_of(args) -> Convention:
    origin = 0 if args.origin is None else args.origin
    include_root = True if args.include_root is None else args.include_root
    return Convention(origin, include_root)


def _progress(start: int, remaining: int) -> None:
    log.info("scanned %d indices, %d denominators outstanding", start, remaining)


def _build(d_max: int, args) -> PiTable:
    return build_pi_table(d_max, scan_config(args), progress=_progress)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_pi(args) -> tuple[str, int]:
    lo, hi = parse_range(args.range, 2)
    conv = convention_of(args)
    table = _build(hi, args).with_convention(conv)
    pairs = [(d, table[d]) for d in range(lo, hi + 1)]
    if args.format == "csv":
        return f"# {conv.label}\n" + _csv(pairs, ("d", "pi")), EXIT_OK
    doc = {"convention": conv.as_dict(), "pi": {str(d): v for d, v in pairs}}
    return json.dumps(doc, indent=2) + "\n", EXIT_OK


def cmd_cw(args) -> tuple[str, int]:
    conv = convention_of(args)
    lo, hi = parse_range(args.range, 0)
    first = conv.to_canonical(lo)
    if first < 0:
        raise UsageError(f"index {lo} precedes the root under {conv.label}")
    rows = []
    for k in range(lo, hi + 1):
        canon = conv.to_canonical(k)
        frac = cw_fraction(canon)
        rows.append((k, str(frac), frac.den, str(word_at_rank(canon))))
    if args.format == "csv":
        return f"# {conv.label}\n" + _csv(rows, ("index", "fraction", "denominator", "word")), EXIT_OK
    doc = {
        "convention": conv.as_dict(),
        "nodes": [
            {"index": k, "fraction": f, "denominator": den, "word": w} for k, f, den, w in rows
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n", EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    lo, hi = args.n_lo, args.n_hi
    if not 2 <= lo <= hi:
        raise UsageError(f"need 2 <= n_lo <= n_hi, got {lo} {hi}")
    if args.origin is None and args.include_root is None:
        conventions = STANDARD_CONVENTIONS
    else:
        conventions = (convention_of(args),)
    table = _build(required_d_max(hi), args)
    runs = verify_conventions(lo, hi, conventions, table=table)

    for run in runs:
        plus, minus = run.running_max_step
        log.info(
            "%s: %d levels, theorem holds at %d, fails at %d; max step F+=%d F-=%d",
            run.convention.label, len(run.reports), run.holds, run.fails, plus, minus,
        )
    if args.format == "csv":
        out = "".join(run.to_csv() for run in runs)
    elif len(runs) == 1:
        out = runs[0].to_json()
    else:
        out = json.dumps([run.as_dict() for run in runs], indent=2) + "\n"

    code = EXIT_OK
    if args.expect_hold and any(run.fails for run in runs):
        code = EXIT_EXPECTATION
    return out, code


def cmd_table(args) -> tuple[str, int]:
    if args.d_max < 2:
        raise UsageError(f"d_max must be >= 2, got {args.d_max}")
    table = _build(args.d_max, args).with_convention(convention_of(args))
    return format_table(table), EXIT_OK


def cmd_export(args) -> tuple[str, int]:
    if args.d_max < 2:
        raise UsageError(f"d_max must be >= 2, got {args.d_max}")
    conv = convention_of(args)
    table = _build(args.d_max, args).with_convention(conv)
    rows = [(d, v, i0(d), v - i0(d)) for d, v in table.items()]
    if args.format == "json":
        doc = {
            "convention": conv.as_dict(),
            "rows": [{"d": d, "pi": v, "i0": c, "gap": g} for d, v, c, g in rows],
        }
        return json.dumps(doc, indent=2) + "\n", EXIT_OK
    return f"# {conv.label}\n" + _csv(rows, ("d", "pi", "i0", "pi_minus_i0")), EXIT_OK


def cmd_load(args) -> tuple[str, int]:
    expected = None
    if args.origin is not None or args.include_root is not None:
        expected = convention_of(args)
    table = load_table(args.path, expected)
    if not table.is_consistent():
        raise MalformedTableError("entries do not index their denominators")
    log.info("loaded d in [2, %d] under %s", table.d_max, table.convention.label)
    return format_table(table), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--origin", type=int, choices=(0, 1), default=None,
                        help="1 drops the root from the index count (default 0)")
    common.add_argument("--include-root", action=argparse.BooleanOptionalAction, default=None,
                        help="root is the zeroth node (default true)")
    common.add_argument("--index-cap", type=lambda s: int(s, 0), default=None,
                        help="hard stop for scans (default 2**40, env CWLOCK_INDEX_CAP)")
    common.add_argument("--workers", type=int, default=None,
                        help="scan threads (default: CPU count, env CWLOCK_WORKERS)")
    common.add_argument("--chunk", type=int, default=1 << 16, help="indices per work unit")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")

    p = _Parser(prog="cwlock", description="Calkin-Wilf first appearances and pairing checks")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("pi", parents=[common], help="first-appearance index of d or a..b")
    s.add_argument("range")
    s.set_defaults(func=cmd_pi, default_format="json")

    s = sub.add_parser("cw", parents=[common], help="fractions at breadth-first indices")
    s.add_argument("range")
    s.set_defaults(func=cmd_cw, default_format="json")

    s = sub.add_parser("verify", parents=[common], help="check levels n_lo..n_hi")
    s.add_argument("n_lo", type=int)
    s.add_argument("n_hi", type=int)
    s.add_argument("--expect-hold", action="store_true",
                   help="exit 4 if any level has no pairing witness")
    s.set_defaults(func=cmd_verify, default_format="json")

    s = sub.add_parser("table", parents=[common], help="write a pi-table file")
    s.add_argument("d_max", type=int)
    s.set_defaults(func=cmd_table, default_format="csv")

    s = sub.add_parser("export", parents=[common], help="plot data d,pi,i0,gap")
    s.add_argument("d_max", type=int)
    s.set_defaults(func=cmd_export, default_format="csv")

    s = sub.add_parser("load", parents=[common], help="validate and echo a pi-table file")
    s.add_argument("path")
    s.set_defaults(func=cmd_load, default_format="csv")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format is None:
        args.format = args.default_format
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    log.propagate = False

    try:
        out, code = args.func(args)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
            sys.stdout.flush()
    except UsageError as exc:
        print(f"cwlock: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceededError, NotFoundWithinCapError, MalformedTableError, OSError) as exc:
        print(f"cwlock: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except CwlockError as exc:
        print(f"cwlock: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
