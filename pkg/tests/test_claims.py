import math

import numpy as np
import pytest

from app.codes.inner import build_dense_codebook, dense_pool
from app.core.bitseq import edit_distance
from app.core.channels import make_threshold_channel
from app.core.params import SchemeParams
from app.services.claims import (
    CLAIMS,
    EVENT_COSTS,
    ClaimResult,
    buffer_event_counts,
    good_pair_fractions,
    inject_event,
    missed_buffer_bound,
    outer_error_costs,
    run_claims,
)
from app.services.multi_trace import MultiTraceScheme
from app.services.single_trace import SingleTraceScheme
from app.utils.seeding import make_rng

NOISELESS = make_threshold_channel(2, 0.0)


def test_fast_claims_pass():
    names = ["rll-count", "restricted-ball", "sync-string", "oracle-normalized", "outer-accounting"]
    results = run_claims(names)
    assert [r.name for r in results] == names
    for r in results:
        assert r.passed, r.line()


def test_noiseless_schemes_claim():
    (result,) = run_claims(["noiseless-schemes"])
    assert result.passed, result.line()


def test_crashing_claim_is_reported(monkeypatch):
    def boom():
        raise RuntimeError("kaput")

    monkeypatch.setitem(CLAIMS, "boom", boom)
    (result,) = run_claims(["boom"])
    assert not result.passed
    assert "kaput" in result.detail
    assert result.line().startswith("FAIL boom")


def test_result_line_format():
    assert ClaimResult("x", True, "ok").line() == "PASS x: ok"
    assert ClaimResult("y", False).line() == "FAIL y"


@pytest.fixture(scope="module")
def single():
    params = SchemeParams.single_trace(m=10, n_out=8, k_out=4, field_size=11, d_M=0.0, nu=1.0)
    return SingleTraceScheme.build(params)


def test_outer_error_costs_per_event(single):
    costs = outer_error_costs(single, 80, seed=21)
    for kind, bound in EVENT_COSTS.items():
        assert len(costs[kind]) == 80
        assert max(costs[kind]) <= bound, kind
    # two merged codewords are too long for the inner decoder: two erasures
    assert set(costs["deleted-buffer"]) == {2}
    assert set(costs["substituted-codeword"]) == {2}
    assert min(costs["spurious-buffer"]) >= 1


def test_substituted_pair_keeps_its_neighbours(single):
    rng = make_rng(3)
    msg = [5, 2, 8, 1]
    x = single.encode(msg)
    y = inject_event(single, x, "substituted-codeword", 6, rng)
    assert len(y) == len(x)
    report = single.decode_report(NOISELESS, y)
    sent = single.pairs(msg)
    got = list(report.pairs)
    assert len(got) == len(sent)
    assert [i for i, (a, b) in enumerate(zip(sent, got)) if a != b] == [6]
    assert edit_distance(sent, got) == 2
    assert report.success and list(report.message) == msg


def test_inject_event_rejects_bad_arguments(single):
    x = single.encode([0, 0, 0, 0])
    rng = make_rng(0)
    with pytest.raises(ValueError):
        inject_event(single, x, "deleted-buffer", 7, rng)
    with pytest.raises(ValueError):
        inject_event(single, x, "spurious-buffer", 8, rng)
    with pytest.raises(ValueError):
        inject_event(single, x, "bit-flip", 0, rng)


def test_single_trace_buffer_event_frequencies():
    d = 0.3
    spec = make_threshold_channel(2, d)
    spurious = {}
    for m in (8, 12, 16):
        p = SchemeParams.single_trace(m=m, n_out=8, k_out=2, field_size=11, d_M=d, nu=1.0)
        # every admissible codeword, so the rates do not hinge on one small book
        pool = dense_pool(m, p.zeta, p.gamma, prefix_bit=1, suffix_bit=1)
        counts = buffer_event_counts(spec, pool, 0, p.B, p.zero_threshold, 8, 6000, seed=m)
        assert counts.buffers == 6000 * 7 and counts.codewords == 6000 * 8
        bound = missed_buffer_bound(d, p.B)
        assert counts.missed_rate <= bound + 3 * math.sqrt(bound * (1 - bound) / counts.buffers)
        spurious[m] = counts.spurious_rate
    assert spurious[16] <= spurious[12] <= spurious[8]


@pytest.mark.parametrize("symbol", [0, 1])
def test_multi_trace_buffer_event_frequencies(symbol):
    # 1-buffers sit between a sync half ending in 0 and a payload half starting with 0;
    # 0-buffers between a payload half ending in 1 and a sync half starting with 1
    d = 0.2
    p = SchemeParams.multi_trace(n_R=12, n_S=6, n_out=8, k_out=2, field_size=11, d_M=d, nu=1.0, B=16)
    assert p.zero_threshold == p.one_threshold == 7
    edge = 1 - symbol
    book = build_dense_codebook(12, 8, p.zeta, p.gamma, prefix_bit=edge, suffix_bit=edge, seed=4)
    counts = buffer_event_counts(make_threshold_channel(2, d), book, symbol, p.B, 7, 8, 2000, seed=9)
    bound = missed_buffer_bound(d, p.B)
    assert counts.missed_rate <= bound + 3 * math.sqrt(bound * (1 - bound) / counts.buffers)
    assert counts.spurious_rate < 0.05


def test_buffer_event_counts_noiseless():
    book = build_dense_codebook(10, 6, 0.5, 0.1, prefix_bit=1, suffix_bit=1, seed=1)
    counts = buffer_event_counts(NOISELESS, book, 0, 10, 5, 5, 50, seed=2)
    assert (counts.missed, counts.spurious) == (0, 0)
    assert counts.missed_rate == counts.spurious_rate == 0.0
    with pytest.raises(ValueError):
        buffer_event_counts(NOISELESS, book, 0, 10, 5, 1, 5)


def test_good_pair_fraction_at_desk_parameters():
    params = SchemeParams.multi_trace(
        n_R=12, n_S=16, n_out=64, k_out=16, field_size=67, d_M=0.2, nu=1.0, B=24, seed=3
    )
    assert params.zero_threshold == 10
    scheme = MultiTraceScheme.build(params)
    assert good_pair_fractions(scheme, NOISELESS, 3, seed=1).tolist() == [1.0, 1.0, 1.0]
    fractions = good_pair_fractions(scheme, make_threshold_channel(2, 0.2), 300, seed=5)
    xi = 0.1
    assert np.mean(fractions >= 1 - xi) >= 0.99


def test_buffer_accounting_claim():
    (result,) = run_claims(["buffer-accounting"])
    assert result.passed, result.line()
    assert "substituted-codeword<=2" in result.detail
