"""Empirical claim checks run by ``rldc claims check``.

Each check is small, seeded and exhaustive where it can be; it returns a
`ClaimResult` instead of raising so the whole suite always reports.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from ..codes.greedy import enumerate_S_beta, restricted_deletion_ball
from ..codes.inner import Codebook, dense_pool
from ..codes.outer import InsdelCode, corrupt_pairs
from ..codes.reed_solomon import ReedSolomon
from ..codes.sync import build_sync_string, verify_sync_string
from ..core.bitseq import (
    BitString,
    edit_distance,
    enumerate_subsequences,
    identify_buffers,
    is_subsequence,
    runs,
    subsequence_ball_bound,
    supersequence_count,
)
from ..core.bounds import rll_baseline, rll_count, rll_count_bruteforce
from ..core.channels import (
    ChannelSpec,
    TrimMode,
    make_runlength_channel,
    make_threshold_channel,
    transition_dist,
    transmit_traced,
)
from ..core.infotheory import JointDist, mutual_information, uniform_inputs
from ..core.params import SchemeParams
from ..utils.seeding import derive_seed, make_rng
from .multi_trace import MultiTraceScheme, TraceAlignment
from .single_trace import SingleTraceScheme

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClaimResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.detail}" if self.detail else f"{status} {self.name}"


def _strings(n: int) -> Iterable[BitString]:
    return (BitString("".join(t)) for t in itertools.product("01", repeat=n))


def check_deletion_ball() -> ClaimResult:
    worst = 0.0
    for n in range(1, 9):
        for s in _strings(n):
            r = len(runs(s))
            for ell in range(0, min(3, n) + 1):
                size = len(enumerate_subsequences(s, ell))
                bound = subsequence_ball_bound(r, ell)
                if size > bound:
                    return ClaimResult("deletion-ball", False, f"{s} ell={ell}: {size} > {bound}")
                worst = max(worst, size / bound)
    return ClaimResult("deletion-ball", True, f"max size/bound {worst:.3f}")


def check_supersequences() -> ClaimResult:
    for n in range(1, 9):
        pool = list(_strings(n))
        for k in range(0, n + 1):
            for y in ("01" * n)[:k], ("0" * k):
                brute = sum(1 for x in pool if is_subsequence(y, x))
                if brute != supersequence_count(n, y):
                    return ClaimResult("supersequences", False, f"n={n} y={y!r}")
    return ClaimResult("supersequences", True, "n <= 8")


def check_oracle_normalized() -> ClaimResult:
    specs = [
        make_threshold_channel(2, 0.3),
        make_threshold_channel(1, 0.2),
        make_runlength_channel([0.05, 0.2, 0.4], mu=0.3, trim_mode=TrimMode.TRIM01),
    ]
    for spec in specs:
        for x in _strings(6):
            total = transition_dist(spec, x).total()
            if abs(total - 1.0) > 1e-9:
                return ClaimResult("oracle-normalized", False, f"{spec.describe()} {x}: {total}")
    return ClaimResult("oracle-normalized", True, f"{len(specs)} specs, all n=6 inputs")


def check_trim_degraded() -> ClaimResult:
    spec = make_runlength_channel([0.1, 0.3], mu=0.3)
    inputs = uniform_inputs(5)
    base = mutual_information(JointDist(inputs, spec))
    worst = -math.inf
    for mode in (TrimMode.TRIM00, TrimMode.TRIM01, TrimMode.TRIM10, TrimMode.TRIM11):
        trimmed = mutual_information(JointDist(inputs, spec.with_trim(mode)))
        worst = max(worst, trimmed - base)
    return ClaimResult("trim-degraded", worst <= 1e-9, f"max I(trim) - I = {worst:.2e}")


def check_rll_counts() -> ClaimResult:
    for tau in (2, 3, 4):
        for n in range(0, 13):
            if rll_count(n, tau) != rll_count_bruteforce(n, tau):
                return ClaimResult("rll-count", False, f"tau={tau} n={n}")
    golden = math.log2((1 + math.sqrt(5)) / 2)
    ok = abs(rll_baseline(3) - golden) < 1e-9
    return ClaimResult("rll-count", ok, f"baseline(3) = {rll_baseline(3):.9f}")


def check_restricted_balls() -> ClaimResult:
    cases = [(6, 2, (1 / 3, 1 / 3), 1), (8, 2, (0.5, 0.25), 1), (9, 3, (2 / 9, 2 / 9, 1 / 9), 1)]
    for N, tau, beta, budget in cases:
        bt = round(beta[-1] * N)
        bound = math.comb(2 * bt + budget, budget)
        for c in enumerate_S_beta(N, tau, beta):
            ball = restricted_deletion_ball(c, budget, tau)
            if len(ball) > bound:
                return ClaimResult("restricted-ball", False, f"{c}: {len(ball)} > {bound}")
            if not all(is_subsequence(m, c) for m in ball.members):
                return ClaimResult("restricted-ball", False, f"{c}: member not a subsequence")
    return ClaimResult("restricted-ball", True, f"{len(cases)} compositions")


def check_sync_strings() -> ClaimResult:
    for n, eta, q in ((16, 0.25, 16), (32, 0.95, 4)):
        s = build_sync_string(n, eta, q, seed=n)
        if not verify_sync_string(s):
            return ClaimResult("sync-string", False, f"n={n} eta={eta} |A|={q}")
    ok = not verify_sync_string([0, 0], 0.5)
    return ClaimResult("sync-string", ok, "constructor output verified")


def check_noiseless_schemes() -> ClaimResult:
    channel = make_threshold_channel(2, 0.0)
    rng = make_rng(7)
    single = SingleTraceScheme.build(
        SchemeParams.single_trace(m=10, n_out=8, k_out=4, field_size=11, d_M=0.0, nu=1.0)
    )
    multi = MultiTraceScheme.build(
        SchemeParams.multi_trace(n_R=10, n_S=6, n_out=8, k_out=4, field_size=11, d_M=0.0, nu=1.0, B=8)
    )
    for _ in range(10):
        msg = rng.integers(0, 11, size=4).tolist()
        if single.decode(channel, single.encode(msg)) != msg:
            return ClaimResult("noiseless-schemes", False, f"single-trace {msg}")
        if multi.decode(channel, [multi.encode(msg)]) != msg:
            return ClaimResult("noiseless-schemes", False, f"multi-trace {msg}")
    return ClaimResult("noiseless-schemes", True, "10 messages each")


def check_outer_accounting() -> ClaimResult:
    rs = ReedSolomon(32, 12, 37)
    code = InsdelCode(rs, build_sync_string(32, 0.25, 32, seed=1))
    rng = make_rng(11)
    k = (rs.distance - 1) // 4
    for _ in range(50):
        msg = rng.integers(0, 37, size=12).tolist()
        received = corrupt_pairs(code.encode(msg), k, 0, rng, 37, 32)
        if code.decode(received) != msg:
            return ClaimResult("outer-accounting", False, f"{k} deletions not corrected")
    return ClaimResult("outer-accounting", True, f"{k} pair deletions, 50 messages")


# -- buffer events --------------------------------------------------------------

# Largest outer edit distance one event may cost in the single-trace scheme.
EVENT_COSTS = {"deleted-buffer": 3, "spurious-buffer": 3, "substituted-codeword": 2}

_NOISELESS = make_threshold_channel(2, 0.0)


def inject_event(
    scheme: SingleTraceScheme, x: BitString, kind: str, index: int, rng: np.random.Generator
) -> BitString:
    """Apply one event to a clean single-trace encoding.

    ``index`` is the codeword hit; a deleted buffer is the one following it.
    """
    p = scheme.params
    start = index * (p.m + p.B)
    end = start + p.m
    bits = x.bits
    if kind == "deleted-buffer":
        if not 0 <= index < p.n_out - 1:
            raise ValueError(f"no buffer follows codeword {index}")
        return BitString(bits[:end] + bits[end + p.B :])
    if not 0 <= index < p.n_out:
        raise ValueError(f"codeword index {index} out of range")
    if kind == "spurious-buffer":
        cut = int(rng.integers(start + 1, end))
        return BitString(bits[:cut] + "0" * p.B + bits[cut:])
    if kind == "substituted-codeword":
        others = [
            s for s in scheme.inner.symbols
            if s < p.inner_size and scheme.inner.codeword(s).bits != bits[start:end]
        ]
        swap = scheme.inner.codeword(others[int(rng.integers(len(others)))])
        return BitString(bits[:start] + swap.bits + bits[end:])
    raise ValueError(f"unknown event {kind!r}")


def outer_error_costs(scheme: SingleTraceScheme, trials: int, seed: int = 0) -> dict[str, list[int]]:
    """Outer edit distance caused by one injected event, per event kind and trial."""
    rng = make_rng(seed)
    p = scheme.params
    costs: dict[str, list[int]] = {kind: [] for kind in EVENT_COSTS}
    for _ in range(trials):
        msg = rng.integers(0, p.field_size, size=p.k_out).tolist()
        x = scheme.encode(msg)
        pairs = scheme.pairs(msg)
        for kind in EVENT_COSTS:
            last = p.n_out - 1 if kind == "deleted-buffer" else p.n_out
            y = inject_event(scheme, x, kind, int(rng.integers(0, last)), rng)
            report = scheme.decode_report(_NOISELESS, y)
            costs[kind].append(edit_distance(pairs, list(report.pairs)))
    return costs


@dataclass(frozen=True)
class BufferEventCounts:
    trials: int
    buffers: int
    codewords: int
    missed: int
    spurious: int

    @property
    def missed_rate(self) -> float:
        return self.missed / self.buffers if self.buffers else 0.0

    @property
    def spurious_rate(self) -> float:
        return self.spurious / self.codewords if self.codewords else 0.0


def missed_buffer_bound(d: float, B: int) -> float:
    return math.exp(-(1.0 - d) * B / 8.0)


def buffer_event_counts(
    spec: ChannelSpec,
    book: Codebook,
    symbol: int,
    B: int,
    threshold: int,
    blocks: int,
    trials: int,
    seed: int = 0,
) -> BufferEventCounts:
    """Send random codewords joined by ``symbol^B`` and classify the detected buffers.

    A sent buffer is missed when no detected buffer holds one of its surviving
    bits; a detected buffer holding no surviving buffer bit is spurious.
    """
    if blocks < 2:
        raise ValueError("need at least two blocks")
    n = book.n
    owner = np.full(blocks * n + (blocks - 1) * B, -1, dtype=np.int64)
    for k in range(blocks - 1):
        a = (k + 1) * n + k * B
        owner[a : a + B] = k
    fill = str(symbol) * B
    symbols = book.symbols
    rng = make_rng(derive_seed(seed, "blocks"))
    missed = spurious = 0
    for t in range(trials):
        picks = rng.integers(0, len(symbols), size=blocks)
        x = BitString(fill.join(book.codeword(symbols[int(j)]).bits for j in picks))
        y, kept = transmit_traced(spec, x, derive_seed(seed, t))
        hit = np.zeros(blocks - 1, dtype=bool)
        for a, b in identify_buffers(y, symbol, threshold).buffer_spans:
            ids = owner[kept[a:b]]
            ids = ids[ids >= 0]
            if ids.size:
                hit[ids] = True
            else:
                spurious += 1
        missed += int((~hit).sum())
    counts = BufferEventCounts(trials, trials * (blocks - 1), trials * blocks, missed, spurious)
    logger.debug(
        "buffer events %s B=%d: missed %d/%d, spurious %d",
        spec.describe(), B, missed, counts.buffers, spurious,
    )
    return counts


# -- multi-trace alignment ------------------------------------------------------

def good_pairs(scheme: MultiTraceScheme, alignment: TraceAlignment, kept: np.ndarray) -> int:
    """Positions whose aligned payload half consists of bits from that position's own block."""
    p = scheme.params
    block = p.n_R + 2 * p.B + p.n_S
    good = 0
    for i, span in enumerate(alignment.spans):
        if span is None:
            continue
        src = kept[span[0] : span[1]]
        if src.size and src.min() >= i * block and src.max() < i * block + p.n_R:
            good += 1
    return good


def good_pair_fractions(
    scheme: MultiTraceScheme, spec: ChannelSpec, trials: int, seed: int = 0
) -> np.ndarray:
    """Share of good positions in each of ``trials`` single traces of random messages."""
    p = scheme.params
    rng = make_rng(derive_seed(seed, "messages"))
    fractions = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        msg = rng.integers(0, p.field_size, size=p.k_out).tolist()
        y, kept = transmit_traced(spec, scheme.encode(msg), derive_seed(seed, t))
        fractions[t] = good_pairs(scheme, scheme.align(spec, y), kept) / p.n_out
    return fractions


def check_buffer_accounting() -> ClaimResult:
    scheme = SingleTraceScheme.build(
        SchemeParams.single_trace(m=10, n_out=8, k_out=4, field_size=11, d_M=0.0, nu=1.0)
    )
    costs = outer_error_costs(scheme, 60, seed=13)
    worst = {kind: max(c) for kind, c in costs.items()}
    ok = all(worst[kind] <= bound for kind, bound in EVENT_COSTS.items())
    ok = ok and min(costs["substituted-codeword"]) == 2
    detail = " ".join(f"{kind}<={cost}" for kind, cost in worst.items())
    return ClaimResult("buffer-accounting", ok, detail)


def check_buffer_events() -> ClaimResult:
    d = 0.3
    spec = make_threshold_channel(2, d)
    spurious = []
    for m in (8, 12, 16):
        p = SchemeParams.single_trace(m=m, n_out=8, k_out=2, field_size=11, d_M=d, nu=1.0)
        pool = dense_pool(m, p.zeta, p.gamma, prefix_bit=1, suffix_bit=1)
        counts = buffer_event_counts(spec, pool, 0, p.B, p.zero_threshold, 8, 6000, seed=m)
        bound = missed_buffer_bound(d, p.B)
        slack = 3.0 * math.sqrt(bound * (1.0 - bound) / counts.buffers)
        if counts.missed_rate > bound + slack:
            return ClaimResult("buffer-events", False, f"m={m}: missed {counts.missed_rate:.4f} > {bound:.4f}")
        spurious.append(counts.spurious_rate)
    ok = spurious[0] >= spurious[1] >= spurious[2]
    return ClaimResult("buffer-events", ok, "spurious per codeword " + ", ".join(f"{r:.4f}" for r in spurious))


def check_good_pairs() -> ClaimResult:
    scheme = MultiTraceScheme.build(
        SchemeParams.multi_trace(
            n_R=12, n_S=16, n_out=64, k_out=16, field_size=67, d_M=0.2, nu=1.0, B=24, seed=3
        )
    )
    fractions = good_pair_fractions(scheme, make_threshold_channel(2, 0.2), 100, seed=5)
    share = float(np.mean(fractions >= 0.9))
    return ClaimResult("good-pairs", share >= 0.99, f"{share:.2%} of traces with >= 90% good pairs")


CLAIMS: dict[str, Callable[[], ClaimResult]] = {
    "deletion-ball": check_deletion_ball,
    "supersequences": check_supersequences,
    "oracle-normalized": check_oracle_normalized,
    "trim-degraded": check_trim_degraded,
    "rll-count": check_rll_counts,
    "restricted-ball": check_restricted_balls,
    "sync-string": check_sync_strings,
    "noiseless-schemes": check_noiseless_schemes,
    "outer-accounting": check_outer_accounting,
    "buffer-accounting": check_buffer_accounting,
    "buffer-events": check_buffer_events,
    "good-pairs": check_good_pairs,
}


def run_claims(names: Iterable[str] | None = None) -> list[ClaimResult]:
    selected = list(names) if names else list(CLAIMS)
    unknown = [n for n in selected if n not in CLAIMS]
    if unknown:
        raise KeyError(f"unknown claims: {unknown}")
    results = []
    for name in selected:
        try:
            result = CLAIMS[name]()
        except Exception as exc:  # a crashing check is a failed claim
            logger.exception("claim %s raised", name)
            result = ClaimResult(name, False, f"{type(exc).__name__}: {exc}")
        results.append(result)
    return results


__all__ = [
    "BufferEventCounts",
    "ClaimResult",
    "CLAIMS",
    "EVENT_COSTS",
    "buffer_event_counts",
    "good_pair_fractions",
    "good_pairs",
    "inject_event",
    "missed_buffer_bound",
    "outer_error_costs",
    "run_claims",
]
