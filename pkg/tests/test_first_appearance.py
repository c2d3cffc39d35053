import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cwlock.cw_core import CANONICAL, ROOT_AT_ONE, ROOT_EXCLUDED, denominator_at, fusc, word_at_rank
from cwlock.errors import (
    CapExceededError,
    DomainError,
    MalformedTableError,
    NotFoundWithinCapError,
    TableCoverageError,
)
from cwlock.first_appearance import (
    ConventionMismatchWarning,
    PiTable,
    ScanConfig,
    build_pi_table,
    format_table,
    fusc_array,
    load_table,
    parse_table,
    pi,
    pi_bruteforce,
    save_table,
)

from oracles import bfs_first_appearance, fusc_table

# canonical pi(2..20), frozen from oracles.bfs_first_appearance
PI_2_TO_20 = [1, 3, 7, 9, 31, 17, 19, 33, 37, 35, 43, 41, 67, 71, 91, 75, 73, 81, 187]


@pytest.fixture(scope="module")
def oracle_pi():
    return bfs_first_appearance(200, count=1 << 15)


@pytest.mark.parametrize("d,k", [(2, 1), (4, 7), (6, 31)])
def test_bruteforce_examples(d, k):
    assert pi_bruteforce(d) == k


@pytest.mark.parametrize("d,k", [(2, 1), (5, 9), (7, 17)])
def test_pi_examples(d, k):
    assert pi(d) == k


def test_frozen_values():
    assert [pi(d) for d in range(2, 21)] == PI_2_TO_20
    table = build_pi_table(20)
    assert list(table.values) == PI_2_TO_20


def test_table_examples():
    assert build_pi_table(2).as_dict() == {2: 1}
    assert build_pi_table(5).as_dict() == {2: 1, 3: 3, 4: 7, 5: 9}
    t8 = build_pi_table(8).as_dict()
    assert (t8[6], t8[7], t8[8]) == (31, 17, 19)


def test_bruteforce_against_queue_oracle(oracle_pi):
    for d in range(2, 201):
        assert pi_bruteforce(d) == oracle_pi[d]


def test_fast_against_bruteforce():
    table = build_pi_table(200)
    for d in range(2, 201):
        expected = pi_bruteforce(d)
        assert pi(d) == expected
        assert table[d] == expected


def test_minimality_exhaustive():
    table = build_pi_table(50)
    for d, k in table.items():
        assert denominator_at(k) == d
        assert all(denominator_at(j) != d for j in range(k))


def test_upper_bound_leftmost_node():
    equal = []
    for d in range(2, 31):
        k = pi_bruteforce(d)
        assert k <= 2 ** (d - 1) - 1
        leftmost = word_at_rank(k).bits == 0
        assert (k == 2 ** (d - 1) - 1) == leftmost
        if leftmost:
            equal.append(d)
    # 1/6 at index 31 is also a leftmost first appearance
    assert equal == [2, 3, 4, 6]


def test_fusc_array_matches_recurrence():
    m = np.arange(1 << 16, dtype=np.int64)
    assert fusc_array(m).tolist() == fusc_table(1 << 16)
    assert fusc_array(np.array([], dtype=np.int64)).size == 0


@settings(max_examples=50)
@given(st.lists(st.integers(0, (1 << 62) - 1), min_size=1, max_size=20))
def test_fusc_array_matches_scalar(ms):
    assert fusc_array(np.array(ms, dtype=np.int64)).tolist() == [fusc(m) for m in ms]


@pytest.mark.parametrize("chunk,workers", [(1, 1), (7, 1), (64, 2), (64, 8), (1000, 3), (1 << 16, 8)])
def test_table_independent_of_chunking(chunk, workers):
    ref = build_pi_table(120)
    t = build_pi_table(120, ScanConfig(chunk=chunk, workers=workers))
    assert t == ref
    assert format_table(t) == format_table(ref)


def test_high_water_is_largest_first_appearance():
    t = build_pi_table(8)
    assert t.scan_high_water == 31


def test_conventions_shift_values():
    base = build_pi_table(30)
    for conv in (ROOT_EXCLUDED, ROOT_AT_ONE):
        shifted = build_pi_table(30, convention=conv)
        assert [v - conv.shift for v in shifted.values] == list(base.values)
        assert shifted.with_convention(CANONICAL) == base
        assert shifted.is_consistent()
        assert pi(9, convention=conv) == base[9] + conv.shift


def test_cap_exceeded_lists_missing():
    with pytest.raises(CapExceededError) as exc:
        build_pi_table(8, ScanConfig(index_cap=20, chunk=4))
    assert exc.value.missing == [6]
    with pytest.raises(CapExceededError):
        pi(6, ScanConfig(index_cap=31))
    assert pi(6, ScanConfig(index_cap=32)) == 31


def test_bruteforce_cap():
    with pytest.raises(NotFoundWithinCapError):
        pi_bruteforce(6, depth_cap=4)
    assert pi_bruteforce(6, depth_cap=5) == 31
    with pytest.raises(DomainError):
        pi_bruteforce(6, depth_cap=26)


def test_domain():
    for f in (pi, pi_bruteforce, build_pi_table):
        with pytest.raises(DomainError):
            f(1)
    with pytest.raises(DomainError):
        ScanConfig(chunk=0)
    with pytest.raises(DomainError):
        ScanConfig(index_cap=0)


def test_coverage_errors():
    t = build_pi_table(5)
    with pytest.raises(TableCoverageError) as exc:
        t.require(range(2, 9))
    assert exc.value.missing == [6, 7, 8]
    with pytest.raises(TableCoverageError):
        t[1]


# file format

def test_round_trip(tmp_path):
    t = PiTable(3, (1, 3))
    p = tmp_path / "t.csv"
    save_table(t, p)
    assert p.read_bytes() == b"# pi-table v1 origin=0 include_root=1\nd,pi\n2,1\n3,3\n"
    assert load_table(p) == t


def test_round_trip_bit_exact_other_convention(tmp_path):
    t = build_pi_table(40, convention=ROOT_AT_ONE)
    p = tmp_path / "t.csv"
    save_table(t, p)
    loaded = load_table(p)
    assert loaded == t
    save_table(loaded, tmp_path / "u.csv")
    assert (tmp_path / "u.csv").read_bytes() == p.read_bytes()
    assert p.read_text().startswith("# pi-table v1 origin=0 include_root=0\n")


def test_convention_mismatch_warns(tmp_path):
    p = tmp_path / "t.csv"
    save_table(build_pi_table(5), p)
    with pytest.warns(ConventionMismatchWarning):
        load_table(p, expected=ROOT_EXCLUDED)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        load_table(p, expected=CANONICAL)


HEADER = "# pi-table v1 origin=0 include_root=1\nd,pi\n"


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("# pi-table v2 origin=0 include_root=1\nd,pi\n2,1\n", 1),
        ("# pi-table v1 origin=0 include_root=1\nd,p\n2,1\n", 2),
        (HEADER, 3),
        (HEADER + "3,3\n", 3),
        (HEADER + "2,1\n4,7\n", 4),
        (HEADER + "2,1\n3,3\n3,3\n", 5),
        (HEADER + "2,1\n2,1\n", 4),
        (HEADER + "2,x\n", 3),
        (HEADER + "2,1,5\n", 3),
    ],
)
def test_malformed(text, line):
    with pytest.raises(MalformedTableError) as exc:
        parse_table(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_load_empty_file(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_bytes(b"")
    with pytest.raises(MalformedTableError):
        load_table(p)


def test_load_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_table(tmp_path / "nope.csv")
