"""Seeded Monte Carlo trial runner.

Trial i draws everything from ``derive_seed(seed, i)``, so a report depends
only on the config, never on the worker count or scheduling. Trials fan out
over a thread pool and are reduced in index order.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np
from scipy.stats import binomtest

from ..codes.greedy import blow_up, threshold_decode
from ..codes.inner import Codebook
from ..codes.outer import InsdelCode
from ..codes.reed_solomon import ReedSolomon
from ..codes.sync import SyncString
from ..core.channels import make_threshold_channel, transmit, transmit_multi
from ..core.errors import ConfigInvalid, DecodeFailure
from ..core.experiment import ExperimentConfig
from ..utils.seeding import derive_seed, make_rng
from .multi_trace import MultiTraceScheme
from .single_trace import SingleTraceScheme

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[float], None]  # 0.0 - 1.0

Scheme = SingleTraceScheme | MultiTraceScheme


@dataclass(frozen=True)
class TrialReport:
    trials: int
    failures: int
    wilson_ci: tuple[float, float]
    seed: int
    wall_time: float

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials if self.trials else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "trials": self.trials,
            "failures": self.failures,
            "failure_rate": self.failure_rate,
            "wilson_ci": list(self.wilson_ci),
            "seed": self.seed,
            "wall_time": self.wall_time,
        }


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    ci = binomtest(failures, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return (float(ci.low), float(ci.high))


def default_threads() -> int:
    raw = os.getenv("RLDC_THREADS")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ConfigInvalid(f"RLDC_THREADS={raw!r} is not an integer") from None
        if value < 1:
            raise ConfigInvalid("RLDC_THREADS must be >= 1")
        return value
    return os.cpu_count() or 1


def build_scheme(cfg: ExperimentConfig) -> Scheme:
    """Scheme from the config, loading any codebook files it names."""
    params = cfg.scheme
    books = cfg.codebooks
    if not books:
        if params.kind == "single":
            return SingleTraceScheme.build(params)
        return MultiTraceScheme.build(params)

    fresh = SingleTraceScheme.build(params) if params.kind == "single" else MultiTraceScheme.build(params)
    sync = SyncString.load(books["sync"]) if "sync" in books else fresh.sync
    outer = InsdelCode(ReedSolomon(params.n_out, params.k_out, params.field_size), sync)
    if isinstance(fresh, SingleTraceScheme):
        inner = Codebook.load(books["inner"]) if "inner" in books else fresh.inner
        return SingleTraceScheme(params, inner, outer)
    book_R = Codebook.load(books["C_R"]) if "C_R" in books else fresh.book_R
    book_S = Codebook.load(books["C_S"]) if "C_S" in books else fresh.book_S
    return MultiTraceScheme(params, book_R, book_S, outer)


def _run_pool(
    one: Callable[[int], bool],
    trials: int,
    threads: int,
    progress: Optional[ProgressCallback] = None,
) -> int:
    failures = 0
    done = 0
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for failed in pool.map(one, range(trials)):
            failures += int(failed)
            done += 1
            if progress:
                progress(done / trials)
    return failures


def run_trials(
    cfg: ExperimentConfig,
    scheme: Scheme | None = None,
    progress: Optional[ProgressCallback] = None,
) -> TrialReport:
    """Encode a random message, pass it through the channel, decode; count failures."""
    start = time.perf_counter()
    scheme = scheme or build_scheme(cfg)
    params = cfg.scheme
    spec = cfg.channel
    multi = isinstance(scheme, MultiTraceScheme)
    if multi and spec.traces != params.T:
        spec = spec.with_traces(params.T)

    def one(i: int) -> bool:
        rng = make_rng(derive_seed(cfg.seed, i))
        msg = rng.integers(0, params.field_size, size=params.k_out).tolist()
        x = scheme.encode(msg)
        channel_seed = derive_seed(cfg.seed, i, "channel")
        if multi:
            report = scheme.decode_report(spec, transmit_multi(spec, x, channel_seed))
        else:
            report = scheme.decode_report(spec, transmit(spec, x, channel_seed))
        return not report.success or list(report.message) != msg

    failures = _run_pool(one, cfg.trials, cfg.threads or default_threads(), progress)
    wall = time.perf_counter() - start
    logger.info("%d/%d trials failed (%.2fs)", failures, cfg.trials, wall)
    return TrialReport(
        trials=cfg.trials,
        failures=failures,
        wilson_ci=wilson_interval(failures, cfg.trials),
        seed=cfg.seed,
        wall_time=wall,
    )


def threshold_trial(
    code: Codebook,
    tau: int,
    M: int,
    d: float,
    trials: int,
    seed: int = 0,
    threads: int | None = None,
) -> TrialReport:
    """Failure rate of `threshold_decode` on the blown-up ``code`` over BDC-Thr(tau, d).

    The decoding budget is the code's own ``delta * N``.
    """
    start = time.perf_counter()
    blown = blow_up(code, tau, M)
    spec = make_threshold_channel(tau, d)
    budget = int(round(code.metadata.get("delta", 0.0) * code.n))
    symbols = np.asarray(code.symbols)

    def one(i: int) -> bool:
        rng = make_rng(derive_seed(seed, i))
        sym = int(symbols[rng.integers(len(symbols))])
        y = transmit(spec, blown.codeword(sym), derive_seed(seed, i, "channel"))
        try:
            return threshold_decode(code, tau, M, budget, y) != sym
        except DecodeFailure:
            return True

    failures = _run_pool(one, trials, threads or default_threads())
    return TrialReport(
        trials=trials,
        failures=failures,
        wilson_ci=wilson_interval(failures, trials),
        seed=seed,
        wall_time=time.perf_counter() - start,
    )


__all__ = [
    "TrialReport",
    "wilson_interval",
    "default_threads",
    "build_scheme",
    "run_trials",
    "threshold_trial",
]
