"""Calkin-Wilf first appearances, the denominator-first array, and a
level-by-level checker for the pairing/locking statements built on them."""

__version__ = "0.1.0"

from cwlock.cw_core import (
    CANONICAL,
    ROOT_AT_ONE,
    ROOT_EXCLUDED,
    STANDARD_CONVENTIONS,
    Convention,
    Fraction,
    LRWord,
    Mat2,
    bf_rank,
    cw_fraction,
    denominator_at,
    fraction_at_word,
    fusc,
    word_at_rank,
    word_matrix,
)
from cwlock.denominator_array import ArrayPosition, entry, i0, mirror_window, position_of_index
from cwlock.first_appearance import (
    PiTable,
    ScanConfig,
    build_pi_table,
    load_table,
    pi,
    pi_bruteforce,
    save_table,
)
from cwlock.pairing_verifier import (
    FProfile,
    LevelReport,
    VerificationRun,
    check_lemma,
    f_profile,
    ivt_trace,
    locks,
    minimal_word,
    pairing_witnesses,
    verify_conventions,
    verify_range,
)
