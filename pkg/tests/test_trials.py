import pytest

from app.codes.greedy import build_greedy_code
from app.core.channels import make_threshold_channel
from app.core.errors import ConfigInvalid
from app.core.experiment import ExperimentConfig
from app.core.params import SchemeParams
from app.services.single_trace import SingleTraceScheme
from app.services.trials import (
    build_scheme,
    default_threads,
    run_trials,
    threshold_trial,
    wilson_interval,
)

THIRDS = (1 / 3, 1 / 3)


def _params(seed=0):
    return SchemeParams.single_trace(m=10, n_out=8, k_out=4, field_size=11, d_M=0.1, nu=1.0, seed=seed)


def test_wilson_interval():
    assert wilson_interval(0, 0) == (0.0, 1.0)
    lo, hi = wilson_interval(5, 100)
    assert lo == pytest.approx(0.0216, abs=1e-3)
    assert hi == pytest.approx(0.1118, abs=1e-3)
    lo, hi = wilson_interval(0, 50)
    assert lo == pytest.approx(0.0, abs=1e-12) and 0 < hi < 0.1


def test_default_threads_from_env(monkeypatch):
    monkeypatch.setenv("RLDC_THREADS", "3")
    assert default_threads() == 3
    monkeypatch.setenv("RLDC_THREADS", "zero")
    with pytest.raises(ConfigInvalid):
        default_threads()
    monkeypatch.setenv("RLDC_THREADS", "0")
    with pytest.raises(ConfigInvalid):
        default_threads()
    monkeypatch.delenv("RLDC_THREADS")
    assert default_threads() >= 1


def test_build_scheme_loads_saved_artifacts(tmp_path):
    fresh = SingleTraceScheme.build(_params(seed=1))
    fresh.inner.save(tmp_path / "inner.txt")
    fresh.sync.save(tmp_path / "sync.txt")
    cfg = ExperimentConfig(
        channel=make_threshold_channel(2, 0.1),
        scheme=_params(seed=99),
        codebooks={"inner": str(tmp_path / "inner.txt"), "sync": str(tmp_path / "sync.txt")},
    )
    loaded = build_scheme(cfg)
    assert loaded.inner.entries == fresh.inner.entries
    assert loaded.sync.symbols == fresh.sync.symbols


def test_run_trials_is_reproducible_across_thread_counts():
    channel = make_threshold_channel(2, 0.1)
    reports = []
    for threads in (1, 4):
        cfg = ExperimentConfig(channel=channel, scheme=_params(), trials=24, seed=17, threads=threads)
        reports.append(run_trials(cfg))
    assert reports[0].failures == reports[1].failures
    assert reports[0].to_dict()["trials"] == 24


def test_run_trials_noiseless_and_progress():
    seen = []
    cfg = ExperimentConfig(channel=make_threshold_channel(2, 0.0), scheme=_params(), trials=10, seed=3, threads=2)
    report = run_trials(cfg, progress=seen.append)
    assert report.failures == 0
    assert len(seen) == 10 and seen[-1] == pytest.approx(1.0)


def test_threshold_code_monte_carlo():
    # delta N equals the number of length-2 runs, so no mix of single-bit losses
    # overflows the budget; a failure needs a run wiped out by the channel, and at
    # N = 12 also a hit in every other long run.
    codes = {N: build_greedy_code(N, 2, THIRDS, 1 / 3) for N in (3, 6, 12)}
    for code in codes.values():
        assert len(code) >= 2
        assert threshold_trial(code, 2, 4, 0.0, 200, seed=1).failures == 0
    reports = {N: threshold_trial(code, 2, 4, 0.3, 30000, seed=1) for N, code in codes.items()}
    # N = 3 fails exactly when a blown run of 4 loses every bit
    assert reports[3].failure_rate == pytest.approx(0.3**4, abs=0.0015)
    upper12 = reports[12].wilson_ci[1]
    assert upper12 < reports[6].wilson_ci[0]
    assert upper12 < reports[3].wilson_ci[0]
