import pytest

from app.codes.sync import SyncString, build_sync_string, match_sync, verify_sync_string
from app.core.bitseq import edit_distance
from app.core.errors import ConstructionFailed, InstanceTooLarge


@pytest.mark.parametrize("n,eta,q", [(16, 0.25, 16), (64, 0.0625, 64), (24, 0.95, 4)])
def test_build_produces_verified_string(n, eta, q):
    s = build_sync_string(n, eta, q, seed=5)
    assert len(s) == n
    assert s.verified
    assert verify_sync_string(s)
    assert all(0 <= x < q for x in s)


def test_build_is_seeded():
    a = build_sync_string(20, 0.5, 20, seed=2)
    b = build_sync_string(20, 0.5, 20, seed=2)
    assert a.symbols == b.symbols


def test_verify_by_definition():
    assert not verify_sync_string([0, 0], 0.5)
    assert verify_sync_string(list(range(10)), 0.5)
    # brute-force definition on a short string
    s = build_sync_string(10, 0.5, 10, seed=1).symbols
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            for k in range(j + 1, len(s) + 1):
                assert edit_distance(s[i:j], s[j:k]) > 0.5 * (k - i)
    with pytest.raises(ValueError):
        verify_sync_string([0, 1, 2])


def test_build_rejects_bad_arguments():
    with pytest.raises(ValueError):
        build_sync_string(8, 0.5, 3)
    with pytest.raises(ValueError):
        build_sync_string(8, 1.0, 4)
    with pytest.raises(InstanceTooLarge):
        build_sync_string(300, 0.5, 300)
    with pytest.raises(ConstructionFailed):
        build_sync_string(10, 0.05, 4)


def test_sync_string_save_load(tmp_path):
    s = build_sync_string(12, 0.5, 12, seed=4)
    out = tmp_path / "sync.txt"
    s.save(out)
    loaded = SyncString.load(out)
    assert loaded == s
    with pytest.raises(ValueError):
        SyncString((0, 7), 0.5, 4)


def test_match_sync():
    assert match_sync("abc", "ac").pairs() == [(0, 0), (2, 1)]
    assert match_sync([0, 1, 2], [0, None, 2]).pairs() == [(0, 0), (2, 2)]
    assert match_sync([0, 1, 2], [7, 1]).pairs() == [(1, 1)]
    assert match_sync([0, 1, 0], [0]).pairs() == [(0, 0)]
    assert len(match_sync([], [1, 2])) == 0

    s = build_sync_string(16, 0.25, 16, seed=3)
    received = list(s.symbols[:5]) + list(s.symbols[7:])
    m = match_sync(s, received)
    assert len(m) == 14
    assert all(s[i] == received[j] for i, j in m.pairs())
