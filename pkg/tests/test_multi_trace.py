import pytest

from app.core.bitseq import BitString, identify_buffers
from app.core.channels import make_runlength_channel, make_threshold_channel
from app.core.errors import ConfigInvalid, DecodeFailure
from app.core.experiment import ExperimentConfig
from app.core.params import SchemeParams
from app.services.multi_trace import MultiTraceScheme, mt_align, mt_decode, mt_encode
from app.services.trials import run_trials

NOISELESS = make_threshold_channel(2, 0.0)
MSG = [1, 9, 4, 4]


@pytest.fixture(scope="module")
def scheme():
    params = SchemeParams.multi_trace(
        n_R=10, n_S=6, n_out=8, k_out=4, field_size=11, d_M=0.0, nu=1.0, B=8
    )
    return MultiTraceScheme.build(params)


def test_books_follow_end_constraints(scheme):
    assert all(c[0] == 0 and c[9] == 1 for _, c in scheme.book_R.items())
    assert all(c[0] == 1 and c[5] == 0 for _, c in scheme.book_S.items())


def test_encoding_layout(scheme):
    x = mt_encode(scheme, MSG)
    assert len(x) == scheme.params.codeword_length
    ones = identify_buffers(x, 1, scheme.params.one_threshold)
    assert len(ones.buffer_spans) == 8
    block = 10 + 8 + 6 + 8
    r, s = scheme.pairs(MSG)[2]
    assert x[2 * block : 2 * block + 10] == scheme.book_R.codeword(r)
    assert x[2 * block + 18 : 2 * block + 24] == scheme.book_S.codeword(s)


def test_alignment_of_clean_trace(scheme):
    x = scheme.encode(MSG)
    aligned = mt_align(scheme, NOISELESS, x)
    assert aligned.matched == 8
    assert aligned.discarded == 0
    for (r, _), cand in zip(scheme.pairs(MSG), aligned.candidates):
        assert cand == scheme.book_R.codeword(r)


def test_noiseless_roundtrip(scheme):
    x = scheme.encode(MSG)
    assert mt_decode(scheme, NOISELESS, [x]) == MSG
    report = scheme.decode_report(NOISELESS, [x, x, x])
    assert report.success
    assert report.matched == 24
    assert report.inner_erasures == 0


def test_lost_one_buffer_discards_a_piece(scheme):
    x = scheme.encode(MSG)
    block = 10 + 8 + 6 + 8
    end = 3 * block + 24
    damaged = BitString(x.bits[:end] + x.bits[end + 8 :])
    aligned = scheme.align(NOISELESS, damaged)
    assert aligned.discarded == 1
    assert aligned.matched == 6
    # the intact trace fills the gap
    assert scheme.decode(NOISELESS, [damaged, x]) == MSG
    assert scheme.decode(NOISELESS, [damaged]) == MSG


def test_hopeless_traces_fail(scheme):
    report = scheme.decode_report(NOISELESS, ["", "0101"])
    assert not report.success and report.reason == "too-many-erasures"
    with pytest.raises(DecodeFailure):
        scheme.decode(NOISELESS, [])


def test_scheme_validation(scheme):
    with pytest.raises(ConfigInvalid):
        MultiTraceScheme(scheme.params, scheme.book_S, scheme.book_S, scheme.outer)


def test_monte_carlo_three_traces():
    params = SchemeParams.multi_trace(
        n_R=12, n_S=6, n_out=16, k_out=4, field_size=17, d_M=0.1, nu=1.0, T=3, B=16, seed=4
    )
    assert params.zero_threshold == 8
    channel = make_runlength_channel([0.02, 0.05, 0.1], mu=0.3)
    cfg = ExperimentConfig(channel=channel, scheme=params, trials=30, seed=6, threads=2)
    report = run_trials(cfg)
    assert report.trials == 30
    assert report.failures <= 6


def test_three_traces_beat_one_on_paired_seeds():
    # same seed: the single trace of T = 1 is trace 0 of T = 3, and the messages match
    channel = make_threshold_channel(2, 0.2)
    failures = {}
    for T in (1, 3):
        params = SchemeParams.multi_trace(
            n_R=12, n_S=6, n_out=16, k_out=4, field_size=17, d_M=0.2, nu=1.0, T=T, B=16, seed=4
        )
        cfg = ExperimentConfig(channel=channel, scheme=params, trials=300, seed=11, threads=2)
        failures[T] = run_trials(cfg).failures
    assert failures[3] <= failures[1]
