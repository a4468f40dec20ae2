import math

import pytest

from app.codes.greedy import (
    blow_up,
    build_greedy_code,
    enumerate_S_beta,
    restricted_deletion_ball,
    threshold_decode,
)
from app.core.bitseq import BitString, is_subsequence
from app.core.bounds import s_beta_size
from app.core.errors import DecodeFailure, InstanceTooLarge, NonIntegralComposition

B = BitString
THIRDS = (1 / 3, 1 / 3)


def test_restricted_ball_example():
    ball = restricted_deletion_ball("0110", 1, 2)
    assert ball.members == {B("0110"), B("010"), B("011")}
    assert "010" in ball
    assert "110" not in ball
    assert len(restricted_deletion_ball("0110", 0, 2)) == 1
    with pytest.raises(InstanceTooLarge):
        restricted_deletion_ball("01" * 9, 1, 2)


def test_restricted_ball_size_bound():
    N, tau, budget = 6, 2, 1
    bound = math.comb(2 * round(THIRDS[1] * N) + budget, budget)
    for c in enumerate_S_beta(N, tau, THIRDS):
        ball = restricted_deletion_ball(c, budget, tau)
        assert len(ball) <= bound
        assert all(is_subsequence(m, c) for m in ball.members)


def test_S_beta_enumeration():
    assert enumerate_S_beta(3, 2, THIRDS) == {B("011"), B("001"), B("100"), B("110")}
    assert len(enumerate_S_beta(6, 2, THIRDS)) == s_beta_size(6, THIRDS)
    with pytest.raises(NonIntegralComposition):
        enumerate_S_beta(4, 2, THIRDS)


def test_greedy_code_packing():
    book = build_greedy_code(3, 2, THIRDS, 1 / 3)
    assert [c for _, c in book.items()] == [B("001"), B("110")]
    assert book.kind == "greedy"
    assert book.metadata["tau"] == 2
    balls = [restricted_deletion_ball(c, 1, 2).members for _, c in book.items()]
    assert balls[0].isdisjoint(balls[1])

    bigger = build_greedy_code(6, 2, THIRDS, 1 / 6)
    members = [restricted_deletion_ball(c, 1, 2).members for _, c in bigger.items()]
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            assert members[i].isdisjoint(members[j])

    with pytest.raises(NonIntegralComposition):
        build_greedy_code(3, 2, THIRDS, 0.5)


def test_blow_up_and_threshold_decode():
    book = build_greedy_code(3, 2, THIRDS, 1 / 3)
    blown = blow_up(book, 2, 3)
    assert blown.codeword(0) == B("0001")
    assert blown.codeword(1) == B("1110")
    assert blown.metadata["pre_n"] == 3 and blown.metadata["M"] == 3

    assert threshold_decode(book, 2, 3, 1, "10") == 1
    assert threshold_decode(book, 2, 3, 1, "0001") == 0
    with pytest.raises(DecodeFailure) as info:
        threshold_decode(book, 2, 3, 1, "1")
    assert info.value.reason == "no-candidate"
    with pytest.raises(ValueError):
        blow_up(book, 2, 1)
