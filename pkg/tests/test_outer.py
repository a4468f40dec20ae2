import pytest

from app.codes.outer import InsdelCode, corrupt_pairs, insdel_decode, insdel_encode
from app.codes.reed_solomon import ReedSolomon
from app.codes.sync import build_sync_string
from app.core.bitseq import edit_distance
from app.core.errors import DecodeFailure
from app.utils.seeding import make_rng


@pytest.fixture(scope="module")
def code():
    return InsdelCode(ReedSolomon(32, 12, 37), build_sync_string(32, 0.25, 32, seed=1))


def test_encode_pairs_carry_sync(code):
    msg = list(range(12))
    pairs = insdel_encode(code, msg)
    assert len(pairs) == 32
    assert [s for _, s in pairs] == list(code.sync.symbols)
    assert insdel_decode(code, pairs) == msg
    report = code.decode_report(pairs)
    assert report.matched == 32 and report.erasures == 0 and report.substitutions == 0


def test_decode_after_deletions(code):
    rng = make_rng(11)
    for _ in range(20):
        msg = rng.integers(0, 37, size=12).tolist()
        sent = code.encode(msg)
        received = corrupt_pairs(sent, 5, 0, rng, 37, 32)
        assert edit_distance(sent, received) == 5
        assert code.decode(received) == msg


def test_decode_after_insertions_and_deletions(code):
    rng = make_rng(12)
    for _ in range(20):
        msg = rng.integers(0, 37, size=12).tolist()
        received = corrupt_pairs(code.encode(msg), 2, 2, rng, 37, 32)
        assert code.decode(received) == msg


def test_none_pairs_are_ignored(code):
    msg = [1] * 12
    pairs = code.encode(msg)
    received = [None] + pairs[:10] + [None] + pairs[12:]
    word = code.align(received)
    assert word[10] is None and word[11] is None
    assert code.decode(received) == msg


def test_decode_failure_and_validation(code):
    with pytest.raises(DecodeFailure):
        insdel_decode(code, code.encode([0] * 12)[:5])
    with pytest.raises(ValueError):
        InsdelCode(ReedSolomon(32, 12, 37), build_sync_string(16, 0.25, 16))
    with pytest.raises(ValueError):
        corrupt_pairs([(0, 0)], 2, 0, make_rng(0), 37, 32)
