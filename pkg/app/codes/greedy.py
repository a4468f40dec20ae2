"""Run-composition codes against the restricted adversary, with blow-up.

Strings in S_beta have exactly ``beta_i * N`` runs of length i (i = 1..tau).
The restricted adversary may only delete inside a run of length tau or inside
the run right after one. A greedy packing keeps a candidate when its
restricted ball misses every ball kept so far; blowing runs of length tau up
to M then makes the code fit BDC-Thr(tau, d), and `threshold_decode` undoes
both steps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from ..core.bitseq import BitString, Run, collapse_runs, from_runs, runs
from ..core.bounds import composition_counts
from ..core.errors import DecodeFailure, InstanceTooLarge, NonIntegralComposition
from .inner import Codebook

logger = logging.getLogger(__name__)

S_BETA_LIMIT = 14
BALL_LIMIT = 16


@dataclass(frozen=True)
class RestrictedBall:
    center: BitString
    budget: int
    tau: int
    members: frozenset[BitString]

    def __contains__(self, item: object) -> bool:
        if isinstance(item, str):
            item = BitString(item)
        return item in self.members

    def __len__(self) -> int:
        return len(self.members)


def _orderings_desc(counts: list[int]) -> Iterator[tuple[int, ...]]:
    """Distinct run-length sequences in descending lexicographic order."""
    total = sum(counts)
    seq: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(seq) == total:
            yield tuple(seq)
            return
        for length in range(len(counts), 0, -1):
            if counts[length - 1]:
                counts[length - 1] -= 1
                seq.append(length)
                yield from rec()
                seq.pop()
                counts[length - 1] += 1

    yield from rec()


def _candidates(N: int, tau: int, beta: Sequence[float]) -> list[BitString]:
    if len(beta) != tau:
        raise ValueError(f"beta must have tau={tau} entries")
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > S_BETA_LIMIT:
        raise InstanceTooLarge(f"N={N} exceeds {S_BETA_LIMIT}")
    counts = composition_counts(N, beta)
    out: list[BitString] = []
    for lengths in _orderings_desc(list(counts)):
        for start in (0, 1):
            out.append(from_runs(Run((start + k) % 2, ell) for k, ell in enumerate(lengths)))
    return out


def enumerate_S_beta(N: int, tau: int, beta: Sequence[float]) -> set[BitString]:
    return set(_candidates(N, tau, beta))


@lru_cache(maxsize=65536)
def _ball_members(bits: str, budget: int, tau: int) -> frozenset[BitString]:
    run_list = runs(bits)
    permitted = [
        i
        for i, r in enumerate(run_list)
        if r.length == tau or (i > 0 and run_list[i - 1].length == tau)
    ]
    cuts = [0] * len(run_list)
    found: set[BitString] = set()

    def rec(k: int, left: int) -> None:
        if k == len(permitted):
            found.add(
                from_runs(Run(r.symbol, r.length - cuts[i]) for i, r in enumerate(run_list))
            )
            return
        i = permitted[k]
        for c in range(min(left, run_list[i].length) + 1):
            cuts[i] = c
            rec(k + 1, left - c)
        cuts[i] = 0

    rec(0, budget)
    return frozenset(found)


def restricted_deletion_ball(c: BitString | str, budget: int, tau: int) -> RestrictedBall:
    """Strings reachable from ``c`` by at most ``budget`` permitted deletions.

    A deletion in run i is permitted iff run i or run i-1 of ``c`` has length
    exactly tau.
    """
    c = BitString.of(c)
    if len(c) > BALL_LIMIT:
        raise InstanceTooLarge(f"|c|={len(c)} exceeds {BALL_LIMIT}")
    if budget < 0:
        raise ValueError("budget must be >= 0")
    return RestrictedBall(c, budget, tau, _ball_members(c.bits, budget, tau))


def build_greedy_code(N: int, tau: int, beta: Sequence[float], delta: float) -> Codebook:
    """Greedy packing of S_beta under restricted balls of radius delta*N.

    Candidates are visited by run-length sequence (descending), then by
    starting bit.
    """
    budget = delta * N
    if delta < 0 or abs(budget - round(budget)) > 1e-9:
        raise NonIntegralComposition(f"delta*N = {budget!r} is not a non-negative integer")
    budget = int(round(budget))
    candidates = _candidates(N, tau, beta)

    covered: set[BitString] = set()
    accepted: list[BitString] = []
    for cand in candidates:
        ball = _ball_members(cand.bits, budget, tau)
        if covered.isdisjoint(ball):
            accepted.append(cand)
            covered |= ball
    logger.info(
        "greedy code N=%d tau=%d budget=%d: %d of %d candidates",
        N, tau, budget, len(accepted), len(candidates),
    )
    return Codebook(
        entries=dict(enumerate(accepted)),
        n=N,
        kind="greedy",
        metadata={"tau": tau, "beta": [float(b) for b in beta], "delta": delta, "M": tau},
    )


def blow_up(book: Codebook, tau: int, M: int) -> Codebook:
    """Stretch every run of length exactly tau to length M."""
    if M < tau:
        raise ValueError("need M >= tau")
    blown: dict[int, BitString] = {}
    for sym, c in book.items():
        run_list = runs(c)
        if any(r.length > tau for r in run_list):
            raise ValueError(f"codeword {c} has a run longer than tau={tau}")
        blown[sym] = from_runs((r.symbol, M if r.length == tau else r.length) for r in run_list)
    lengths = {len(c) for c in blown.values()}
    if len(lengths) > 1:
        raise ValueError("blown-up codewords differ in length; use a fixed composition")
    n = lengths.pop() if lengths else book.n
    metadata = dict(book.metadata, tau=tau, M=M, pre_n=book.n)
    return Codebook(entries=blown, n=n, kind="blown", metadata=metadata)


def threshold_decode(
    pre_blowup: Codebook, tau: int, M: int, deltaN: int, y: BitString | str
) -> int:
    """Collapse runs of y to at most tau, then find the unique ball holding it."""
    if M < tau:
        raise ValueError("need M >= tau")
    collapsed = collapse_runs(y, tau)
    hits = [
        sym
        for sym, c in pre_blowup.items()
        if collapsed in _ball_members(c.bits, deltaN, tau)
    ]
    if not hits:
        raise DecodeFailure("no-candidate", str(collapsed))
    if len(hits) > 1:
        raise DecodeFailure("ambiguous", f"{len(hits)} codewords explain {collapsed}")
    return hits[0]


__all__ = [
    "RestrictedBall",
    "enumerate_S_beta",
    "restricted_deletion_ball",
    "build_greedy_code",
    "blow_up",
    "threshold_decode",
]
