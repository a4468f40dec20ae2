import itertools

import numpy as np
import pytest

from app.core.bitseq import (
    BitString,
    Run,
    collapse_runs,
    density_ok,
    edit_distance,
    enumerate_subsequences,
    from_runs,
    identify_buffers,
    is_subsequence,
    lcs_length,
    runs,
    strip_symbol,
    subsequence_ball_bound,
    supersequence_count,
)
from app.core.errors import InstanceTooLarge


def test_bitstring_basics():
    s = BitString("0110")
    assert len(s) == 4
    assert s.weight == 2
    assert list(s) == [0, 1, 1, 0]
    assert s[1:3] == BitString("11")
    assert s + "1" == BitString("01101")
    assert str(s) == "0110"
    assert BitString.of([1, 0, 1]) == BitString("101")
    assert BitString.of(np.array([0, 0, 1], dtype=np.uint8)) == BitString("001")
    assert BitString("001") < BitString("01")
    with pytest.raises(ValueError):
        BitString("012")


def test_runs_and_from_runs():
    assert runs("0011100") == [Run(0, 2), Run(1, 3), Run(0, 2)]
    assert runs("") == []
    assert from_runs([(1, 2), (0, 1)]) == BitString("110")
    assert from_runs(runs("1011001")) == BitString("1011001")


def test_collapse_and_strip():
    assert collapse_runs("0000110111", 2) == BitString("0011011")
    assert strip_symbol("0011010000", 0, 0) == BitString("1101")
    assert strip_symbol("0011010000", 1, None) == BitString("0011010000")
    assert strip_symbol("000", 0, 1) == BitString("")


def test_edit_distance_on_bits_and_symbols():
    assert lcs_length("0110", "0101") == 3
    assert edit_distance("0110", "0101") == 2
    assert edit_distance("", "101") == 3
    assert edit_distance([(1, 2), (3, 4)], [(3, 4)]) == 1
    assert edit_distance("abcd", "acbd") == 2


def test_is_subsequence():
    assert is_subsequence("010", "0110")
    assert is_subsequence("", "1")
    assert not is_subsequence("000", "0110")


def test_enumerate_subsequences_small():
    assert enumerate_subsequences("0110", 1) == {BitString("110"), BitString("010"), BitString("011")}
    assert enumerate_subsequences("0110", 0) == {BitString("0110")}
    assert enumerate_subsequences("0110", 4) == {BitString("")}
    with pytest.raises(InstanceTooLarge):
        enumerate_subsequences("0" * 21, 1)


def test_deletion_ball_bound_holds_exhaustively():
    for n in range(1, 8):
        for t in itertools.product("01", repeat=n):
            s = "".join(t)
            r = len(runs(s))
            for ell in range(0, min(3, n) + 1):
                assert len(enumerate_subsequences(s, ell)) <= subsequence_ball_bound(r, ell)


def test_supersequence_count_matches_bruteforce():
    for n in range(1, 8):
        pool = ["".join(t) for t in itertools.product("01", repeat=n)]
        for y in ("", "1", "01", "110", "0000"):
            if len(y) > n:
                continue
            brute = sum(1 for x in pool if is_subsequence(y, x))
            assert supersequence_count(n, y) == brute


def test_density_ok():
    assert density_ok("01010101", 0.5, 0.25)
    assert not density_ok("00001111", 0.5, 0.25)
    with pytest.raises(ValueError):
        density_ok("0101", 0.1, 0.25)


def test_identify_buffers_tiles_string():
    seg = identify_buffers("1100011000001", 0, 3)
    assert seg.buffer_spans == ((2, 5), (7, 12))
    assert seg.segment_spans == ((0, 2), (5, 7), (12, 13))
    assert seg.segments == (BitString("11"), BitString("11"), BitString("1"))

    edge = identify_buffers("000101000", 0, 3)
    assert edge.segments == (BitString("101"),)

    none = identify_buffers("1010", 0, 2)
    assert none.buffer_spans == ()
    assert none.segments == (BitString("1010"),)
