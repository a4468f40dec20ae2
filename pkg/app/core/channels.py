"""Runlength-dependent deletion channels: specs, samplers and exact oracles.

A `ChannelSpec` holds the deletion table d(1..M) (runs longer than M use d(M)),
the margin mu, a trimming mode and a trace count. The same spec drives:

- `transmit` / `transmit_multi`: seeded samplers,
- `transition_dist`: exact output law by enumerating keep/delete patterns,
- `star_transition_dist`: the Z* variant (first and last runs spared, their
  lengths revealed),
- `apply_trim`: the trimming map on its own.

ISI channels (`ISISpec`, `isi_transmit`) replace every input bit by a short
random string whose law depends on the last ``memory`` input bits.

Specs are frozen and hashable; exact laws are memoized per (spec, input) by
`cached_transition_dist`.
"""

from __future__ import annotations

import itertools
import json
import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Hashable, Iterable, Mapping

import numpy as np

from .bitseq import BitString, runs, strip_symbol
from .errors import InstanceTooLarge, MonotonicityViolation, SaturationViolation
from ..utils.seeding import Seed, derive_seed, make_rng

logger = logging.getLogger(__name__)

ORACLE_LIMIT = 16


class TrimMode(str, Enum):
    """trimXY removes a leading run of X, then a trailing run of Y."""

    NONE = "none"
    TRIM00 = "trim00"
    TRIM01 = "trim01"
    TRIM10 = "trim10"
    TRIM11 = "trim11"

    @property
    def lead(self) -> int | None:
        return None if self is TrimMode.NONE else int(self.value[4])

    @property
    def trail(self) -> int | None:
        return None if self is TrimMode.NONE else int(self.value[5])


@dataclass(frozen=True)
class ChannelSpec:
    d_table: tuple[float, ...]
    mu: float
    M: int
    trim_mode: TrimMode = TrimMode.NONE
    traces: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "d_table", tuple(float(v) for v in self.d_table))
        object.__setattr__(self, "trim_mode", TrimMode(self.trim_mode))
        table = self.d_table
        if self.M < 1 or len(table) != self.M:
            raise ValueError(f"d_table has {len(table)} entries, expected M={self.M}")
        if any(not (0.0 <= v <= 1.0) for v in table):
            raise ValueError("deletion probabilities must lie in [0, 1]")
        if not (0.0 < self.mu < 1.0):
            raise ValueError("mu must lie in (0, 1)")
        if any(b < a for a, b in zip(table, table[1:])):
            raise MonotonicityViolation(f"d_table not non-decreasing: {list(table)}")
        if table[-1] >= 1.0 - self.mu:
            raise SaturationViolation(
                f"d(M)={table[-1]} must be < 1 - mu = {1.0 - self.mu}"
            )
        if self.traces < 1:
            raise ValueError("traces must be >= 1")

    @property
    def d_M(self) -> float:
        return self.d_table[-1]

    def deletion_prob(self, run_length: int) -> float:
        if run_length < 1:
            raise ValueError("run length must be >= 1")
        return self.d_table[min(run_length, self.M) - 1]

    def with_trim(self, mode: TrimMode | str) -> "ChannelSpec":
        return replace(self, trim_mode=TrimMode(mode))

    def with_traces(self, traces: int) -> "ChannelSpec":
        return replace(self, traces=traces)

    def law(self, x: BitString) -> "Dist":
        return cached_transition_dist(self, BitString.of(x))

    def describe(self) -> str:
        table = ",".join(f"{v:g}" for v in self.d_table)
        return f"RL(d=[{table}], mu={self.mu:g}, {self.trim_mode.value}, T={self.traces})"

    def to_dict(self) -> dict[str, Any]:
        return {
            "d_table": list(self.d_table),
            "mu": self.mu,
            "M": self.M,
            "trim_mode": self.trim_mode.value,
            "traces": self.traces,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ChannelSpec":
        table = list(data["d_table"])
        return cls(
            d_table=tuple(table),
            mu=float(data["mu"]),
            M=int(data.get("M", len(table))),
            trim_mode=TrimMode(data.get("trim_mode", "none")),
            traces=int(data.get("traces", 1)),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))

    @classmethod
    def load(cls, path: str | Path) -> "ChannelSpec":
        return cls.from_dict(json.loads(Path(path).read_text()))


def make_runlength_channel(
    d_table: Iterable[float],
    mu: float,
    M: int | None = None,
    trim_mode: TrimMode | str = TrimMode.NONE,
    traces: int = 1,
) -> ChannelSpec:
    table = tuple(float(v) for v in d_table)
    return ChannelSpec(
        d_table=table,
        mu=mu,
        M=len(table) if M is None else M,
        trim_mode=TrimMode(trim_mode),
        traces=traces,
    )


def make_threshold_channel(
    tau: int,
    d: float,
    mu: float | None = None,
    trim_mode: TrimMode | str = TrimMode.NONE,
    traces: int = 1,
) -> ChannelSpec:
    """BDC-Thr(tau, d): runs shorter than tau pass, longer runs lose bits w.p. d.

    tau = 1 is the i.i.d. deletion channel. mu defaults to (1 - d) / 2.
    """
    if tau < 1:
        raise ValueError("tau must be >= 1")
    if not (0.0 <= d < 1.0):
        raise SaturationViolation(f"threshold channel needs 0 <= d < 1, got {d}")
    table = (0.0,) * (tau - 1) + (float(d),)
    return make_runlength_channel(
        table, (1.0 - d) / 2.0 if mu is None else mu, tau, trim_mode, traces
    )


@dataclass(frozen=True)
class TraceSet:
    traces: tuple[BitString, ...]
    origin_length: int

    def __post_init__(self) -> None:
        if any(len(t) > self.origin_length for t in self.traces):
            raise ValueError("trace longer than its origin")

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)

    def __getitem__(self, i: int) -> BitString:
        return self.traces[i]


@dataclass(frozen=True)
class StarOutput:
    body: BitString
    first_run_len: int
    last_run_len: int


@dataclass
class Dist:
    """Finite distribution: output value -> probability."""

    support: dict[Hashable, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if any(p < 0 for p in self.support.values()):
            raise ValueError("negative probability")
        total = sum(self.support.values())
        if self.support and abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total!r}")

    @classmethod
    def from_counts(cls, counts: Mapping[Hashable, int]) -> "Dist":
        total = sum(counts.values())
        return cls({k: v / total for k, v in counts.items()})

    @classmethod
    def from_samples(cls, samples: Iterable[Hashable]) -> "Dist":
        return cls.from_counts(Counter(samples))

    def prob(self, value: Hashable) -> float:
        return self.support.get(value, 0.0)

    def total(self) -> float:
        return sum(self.support.values())

    def items(self):
        return self.support.items()

    def __len__(self) -> int:
        return len(self.support)

    def __contains__(self, value: Hashable) -> bool:
        return value in self.support

    def expectation(self, f: Callable[[Any], float]) -> float:
        return sum(p * f(v) for v, p in self.support.items())

    def push_forward(self, f: Callable[[Any], Hashable]) -> "Dist":
        out: dict[Hashable, float] = {}
        for v, p in self.support.items():
            key = f(v)
            out[key] = out.get(key, 0.0) + p
        return Dist(out)

    def tv_distance(self, other: "Dist") -> float:
        keys = set(self.support) | set(other.support)
        return 0.5 * sum(abs(self.prob(k) - other.prob(k)) for k in keys)


def apply_trim(y: BitString | str, trim_mode: TrimMode | str) -> BitString:
    mode = TrimMode(trim_mode)
    if mode is TrimMode.NONE:
        return BitString.of(y)
    return strip_symbol(y, mode.lead, mode.trail)


def deletion_profile(spec: ChannelSpec, x: BitString | str) -> np.ndarray:
    """Per-bit deletion probability, taken from the run each bit sits in."""
    x = BitString.of(x)
    lengths = [r.length for r in runs(x)]
    probs = [spec.deletion_prob(ell) for ell in lengths]
    return np.repeat(np.asarray(probs, dtype=np.float64), lengths)


def transmit_traced(spec: ChannelSpec, x: BitString | str, seed: Seed) -> tuple[BitString, np.ndarray]:
    """Sample one output and return it with the input positions that survived."""
    x = BitString.of(x)
    rng = make_rng(seed)
    probs = deletion_profile(spec, x)
    keep = rng.random(len(x)) >= probs
    kept = np.flatnonzero(keep)
    y = BitString.from_array(x.array[keep])
    if spec.trim_mode is not TrimMode.NONE:
        trimmed = apply_trim(y, spec.trim_mode)
        lead = len(y.bits) - len(y.bits.lstrip(str(spec.trim_mode.lead)))
        kept = kept[lead : lead + len(trimmed)]
        y = trimmed
    return y, kept


def transmit(spec: ChannelSpec, x: BitString | str, seed: Seed) -> BitString:
    return transmit_traced(spec, x, seed)[0]


def _master_seed(seed: Seed) -> int:
    if isinstance(seed, np.random.Generator):
        return int(seed.integers(0, 2**62))
    return int(seed)


def transmit_multi(spec: ChannelSpec, x: BitString | str, seed: Seed) -> TraceSet:
    x = BitString.of(x)
    master = _master_seed(seed)
    traces = tuple(transmit(spec, x, derive_seed(master, t)) for t in range(spec.traces))
    return TraceSet(traces=traces, origin_length=len(x))


def _pattern_law(x: BitString, probs: np.ndarray) -> dict[str, float]:
    """Exact output law for independent per-bit deletions with ``probs``.

    Only positions with 0 < p enumerate; p = 0 bits are always kept.
    """
    n = len(x)
    if n == 0:
        return {"": 1.0}
    bits = x.array.astype(np.int64)
    deletable = np.flatnonzero(probs > 0.0)
    k = deletable.size
    deleted = ((np.arange(1 << k, dtype=np.int64)[:, None] >> np.arange(k)) & 1).astype(bool)
    p_del = probs[deletable]
    weight = np.prod(np.where(deleted, p_del, 1.0 - p_del), axis=1)

    keep = np.ones((1 << k, n), dtype=np.int64)
    keep[:, deletable] = ~deleted
    after = np.cumsum(keep[:, ::-1], axis=1)[:, ::-1] - keep
    value = np.sum(keep * bits * (np.int64(1) << after), axis=1)
    length = keep.sum(axis=1)
    key = (length << (n + 1)) | value
    uniq, inverse = np.unique(key, return_inverse=True)
    mass = np.bincount(inverse.ravel(), weights=weight, minlength=uniq.size)

    law: dict[str, float] = {}
    for code, p in zip(uniq.tolist(), mass.tolist()):
        if p <= 0.0:
            continue
        ln = code >> (n + 1)
        val = code & ((1 << (n + 1)) - 1)
        law[format(val, f"0{ln}b") if ln else ""] = p
    return law


def _check_oracle_size(x: BitString) -> None:
    if len(x) > ORACLE_LIMIT:
        raise InstanceTooLarge(f"exact oracle limited to |x| <= {ORACLE_LIMIT}, got {len(x)}")


def transition_dist(spec: ChannelSpec, x: BitString | str) -> Dist:
    """Exact P(y | x), trimming included."""
    x = BitString.of(x)
    _check_oracle_size(x)
    law = _pattern_law(x, deletion_profile(spec, x))
    dist = Dist({BitString(y): p for y, p in law.items()})
    if spec.trim_mode is not TrimMode.NONE:
        dist = dist.push_forward(lambda y: apply_trim(y, spec.trim_mode))
    return dist


@lru_cache(maxsize=16384)
def cached_transition_dist(spec: ChannelSpec, x: BitString) -> Dist:
    return transition_dist(spec, x)


def star_transition_dist(spec: ChannelSpec, x: BitString | str) -> Dist:
    """Exact law of Z*: first and last runs undeleted, lengths reported.

    A single-run input is both first and last run; it passes whole. Trimming
    mode is ignored.
    """
    x = BitString.of(x)
    _check_oracle_size(x)
    run_list = runs(x)
    if not run_list:
        return Dist({StarOutput(x, 0, 0): 1.0})
    first, last = run_list[0].length, run_list[-1].length
    if len(run_list) == 1:
        return Dist({StarOutput(x, first, last): 1.0})
    probs = deletion_profile(spec, x)
    probs[:first] = 0.0
    probs[len(x) - last :] = 0.0
    law = _pattern_law(x, probs)
    return Dist({StarOutput(BitString(y), first, last): p for y, p in law.items()})


def multi_transition_dist(spec: ChannelSpec, x: BitString | str) -> Dist:
    """Joint law of ``spec.traces`` conditionally independent traces."""
    marginal = transition_dist(spec, x)
    items = list(marginal.items())
    joint: dict[Hashable, float] = {}
    for combo in itertools.product(items, repeat=spec.traces):
        key = tuple(y for y, _ in combo)
        joint[key] = joint.get(key, 0.0) + float(np.prod([p for _, p in combo]))
    return Dist(joint)


@dataclass(frozen=True, eq=False)
class ISISpec:
    """Memory-``memory`` replacement channel.

    ``law`` maps a context (x_i, x_{i-1}, ..., x_{i-memory}) to a distribution
    over replacement strings of length <= ``max_len``. With
    ``uncorrupted_prefix`` the first ``memory`` bits are copied unchanged;
    otherwise their missing history is zero-padded.
    """

    memory: int
    law: Mapping[tuple[int, ...], Mapping[str, float]]
    max_len: int
    uncorrupted_prefix: bool = False

    def __post_init__(self) -> None:
        if self.memory < 0:
            raise ValueError("memory must be >= 0")
        for ctx in itertools.product((0, 1), repeat=self.memory + 1):
            if ctx not in self.law:
                raise ValueError(f"missing context {ctx}")
            cond = self.law[ctx]
            if abs(sum(cond.values()) - 1.0) > 1e-9 or any(p < 0 for p in cond.values()):
                raise ValueError(f"context {ctx} is not a distribution")
            for out in cond:
                BitString(out)
                if len(out) > self.max_len:
                    raise ValueError(f"replacement {out!r} longer than a={self.max_len}")

    @classmethod
    def identity(cls, memory: int = 0, **kwargs: Any) -> "ISISpec":
        law = {
            ctx: {str(ctx[0]): 1.0}
            for ctx in itertools.product((0, 1), repeat=memory + 1)
        }
        return cls(memory=memory, law=law, max_len=1, **kwargs)

    @classmethod
    def constant(cls, output: str, memory: int = 0, **kwargs: Any) -> "ISISpec":
        law = {ctx: {output: 1.0} for ctx in itertools.product((0, 1), repeat=memory + 1)}
        return cls(memory=memory, law=law, max_len=len(output), **kwargs)

    def context(self, padded: np.ndarray, i: int) -> tuple[int, ...]:
        # padded carries `memory` leading zeros, so input bit i sits at i + memory
        pos = i + self.memory
        return tuple(int(padded[pos - k]) for k in range(self.memory + 1))


def isi_transmit(isi: ISISpec, x: BitString | str, seed: Seed) -> BitString:
    x = BitString.of(x)
    rng = make_rng(seed)
    padded = np.concatenate((np.zeros(isi.memory, dtype=np.uint8), x.array))
    tables = {
        ctx: (list(cond.keys()), np.cumsum(list(cond.values())))
        for ctx, cond in isi.law.items()
    }
    draws = rng.random(len(x))
    pieces: list[str] = []
    for i in range(len(x)):
        if isi.uncorrupted_prefix and i < isi.memory:
            pieces.append(x.bits[i])
            continue
        outputs, cdf = tables[isi.context(padded, i)]
        idx = min(int(np.searchsorted(cdf, draws[i] * cdf[-1], side="right")), len(outputs) - 1)
        pieces.append(outputs[idx])
    return BitString("".join(pieces))


def isi_mean_length(isi: ISISpec, x: BitString | str) -> float:
    """Analytic expected output length, sum over i of E|y_i|."""
    x = BitString.of(x)
    padded = np.concatenate((np.zeros(isi.memory, dtype=np.uint8), x.array))
    total = 0.0
    for i in range(len(x)):
        if isi.uncorrupted_prefix and i < isi.memory:
            total += 1.0
            continue
        cond = isi.law[isi.context(padded, i)]
        total += sum(p * len(out) for out, p in cond.items())
    return total


__all__ = [
    "TrimMode",
    "ChannelSpec",
    "TraceSet",
    "Dist",
    "StarOutput",
    "ISISpec",
    "make_runlength_channel",
    "make_threshold_channel",
    "apply_trim",
    "deletion_profile",
    "transmit",
    "transmit_traced",
    "transmit_multi",
    "transition_dist",
    "cached_transition_dist",
    "star_transition_dist",
    "multi_transition_dist",
    "isi_transmit",
    "isi_mean_length",
]
