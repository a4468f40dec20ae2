"""Entropies, information density, mutual information and small-n capacity.

Channel laws are anything with a ``law(x) -> Dist`` method: a `ChannelSpec`
(exact oracle), `StarLaw` (the Z* oracle) or `TableLaw` (an explicit finite map,
handy for toy channels such as a BSC).
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Hashable, Mapping, Protocol, Sequence

import numpy as np

from .bitseq import BitString
from .channels import ChannelSpec, Dist, star_transition_dist
from .errors import InstanceTooLarge, NonConvergence, NotNormalized, ZeroProbability

logger = logging.getLogger(__name__)

JOINT_LIMIT = 16
CAPACITY_LIMIT = 10


class ChannelLaw(Protocol):
    def law(self, x: BitString) -> Dist: ...


@lru_cache(maxsize=4096)
def _cached_star(spec: ChannelSpec, x: BitString) -> Dist:
    return star_transition_dist(spec, x)


@dataclass(frozen=True)
class StarLaw:
    spec: ChannelSpec

    def law(self, x: BitString) -> Dist:
        return _cached_star(self.spec, BitString.of(x))


@dataclass(frozen=True, eq=False)
class TableLaw:
    table: Mapping[BitString, Dist]

    def law(self, x: BitString) -> Dist:
        return self.table[BitString.of(x)]


def entropy(v: Sequence[float] | np.ndarray) -> float:
    """Shannon entropy in bits, 0 log 0 = 0."""
    p = np.asarray(v, dtype=np.float64)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise NotNormalized(f"not a probability vector (sum={p.sum()!r})")
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def binary_entropy(p):
    """h(p) in bits; accepts scalars or arrays, values outside [0, 1] are clipped."""
    q = np.clip(np.asarray(p, dtype=np.float64), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -(
            np.where(q > 0, q * np.log2(q), 0.0)
            + np.where(q < 1, (1 - q) * np.log2(1 - q), 0.0)
        )
    return float(out) if out.ndim == 0 else out


def uniform_inputs(n: int) -> dict[BitString, float]:
    strings = ["".join(t) for t in itertools.product("01", repeat=n)]
    return {BitString(s): 1.0 / len(strings) for s in strings}


@dataclass
class JointDist:
    input_dist: dict[BitString, float]
    channel: ChannelLaw
    n: int = field(init=False)

    def __post_init__(self) -> None:
        self.input_dist = {BitString.of(x): float(p) for x, p in self.input_dist.items()}
        if not self.input_dist:
            raise NotNormalized("empty input distribution")
        lengths = {len(x) for x in self.input_dist}
        if len(lengths) != 1:
            raise ValueError("all inputs must share one length")
        self.n = lengths.pop()
        if self.n > JOINT_LIMIT:
            raise InstanceTooLarge(f"n={self.n} exceeds {JOINT_LIMIT}")
        if any(p < 0 for p in self.input_dist.values()) or abs(
            sum(self.input_dist.values()) - 1.0
        ) > 1e-9:
            raise NotNormalized("input probabilities must sum to 1")

    @cached_property
    def conditionals(self) -> dict[BitString, Dist]:
        return {x: self.channel.law(x) for x in self.input_dist}

    @cached_property
    def output_marginal(self) -> dict[Hashable, float]:
        marginal: dict[Hashable, float] = {}
        for x, px in self.input_dist.items():
            for z, pz in self.conditionals[x].items():
                marginal[z] = marginal.get(z, 0.0) + px * pz
        return marginal


def information_density(j: JointDist, x: BitString | str, z: Hashable) -> float:
    """log2 p(x, z) / (p(x) p(z))."""
    x = BitString.of(x)
    if isinstance(z, str):
        z = BitString(z)
    px = j.input_dist.get(x, 0.0)
    cond = j.conditionals[x].prob(z) if px > 0 else 0.0
    if px * cond <= 0.0:
        raise ZeroProbability(f"p({x}, {z}) = 0")
    return math.log2(cond / j.output_marginal[z])


def mutual_information(j: JointDist) -> float:
    total = 0.0
    for x, px in j.input_dist.items():
        if px <= 0:
            continue
        for z, pz in j.conditionals[x].items():
            if pz > 0:
                total += px * pz * math.log2(pz / j.output_marginal[z])
    return total


def _channel_matrix(channel: ChannelLaw, n: int) -> np.ndarray:
    inputs = list(uniform_inputs(n))
    laws = [channel.law(x) for x in inputs]
    index: dict[Hashable, int] = {}
    for law in laws:
        for z in law.support:
            index.setdefault(z, len(index))
    W = np.zeros((len(inputs), len(index)))
    for row, law in enumerate(laws):
        for z, p in law.items():
            W[row, index[z]] = p
    return W


def capacity_small_n(
    channel: ChannelSpec | ChannelLaw,
    n: int,
    tol: float = 1e-9,
    max_iter: int = 10_000,
    star: bool = False,
) -> float:
    """max over input laws of I(X^n; Z(X^n)) by Blahut-Arimoto.

    Stops when the duality gap max_x D(W_x || q W) - I(q) drops to ``tol``;
    raises NonConvergence after ``max_iter`` sweeps.
    """
    if n > CAPACITY_LIMIT:
        raise InstanceTooLarge(f"n={n} exceeds {CAPACITY_LIMIT}")
    law: ChannelLaw = channel
    if isinstance(channel, ChannelSpec) and star:
        law = StarLaw(channel)
    W = _channel_matrix(law, n)
    q = np.full(W.shape[0], 1.0 / W.shape[0])
    logW = np.where(W > 0, np.log2(np.where(W > 0, W, 1.0)), 0.0)
    gap = math.inf
    for it in range(max_iter):
        py = q @ W
        logpy = np.log2(np.where(py > 0, py, 1.0))
        divergence = np.sum(W * (logW - logpy[None, :]), axis=1)
        lower = float(q @ divergence)
        gap = float(divergence.max()) - lower
        if gap <= tol:
            logger.debug("BA converged n=%d after %d iterations, C=%.9f", n, it, lower)
            return max(lower, 0.0)
        q = q * np.exp2(divergence - divergence.max())
        q /= q.sum()
    raise NonConvergence(f"Blahut-Arimoto gap {gap:.3g} > {tol:g} after {max_iter} iterations")


__all__ = [
    "ChannelLaw",
    "StarLaw",
    "TableLaw",
    "JointDist",
    "entropy",
    "binary_entropy",
    "uniform_inputs",
    "information_density",
    "mutual_information",
    "capacity_small_n",
]
