"""Capacity lower bounds for the threshold deletion channel BDC-Thr(tau, d).

Three curves:

- ``dg``: 1 - h(d (tau+1) / 2^tau), valid while the argument is <= 1/2.
- ``greedy``: greedy run-composition codes blown up to run length M, maximized
  over a beta grid (sum_i i*beta_i = 1) and M.
- ``baseline``: capacity of strings whose runs are all shorter than tau, which
  the channel never touches.

The greedy quotient charges the restricted adversary alpha = beta_tau * g(d)
deletions per input bit, the budget the threshold decoder has to absorb.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import binom

from .errors import (
    ConstraintViolated,
    EmptyFeasibleGrid,
    HypothesisViolated,
    NonIntegralComposition,
)
from .infotheory import binary_entropy

logger = logging.getLogger(__name__)

METHODS = ("dg", "greedy", "baseline")


@dataclass(frozen=True)
class BoundResult:
    tau: int
    d: float
    rate: float
    beta: tuple[float, ...]
    M: int
    method: str


@dataclass(frozen=True)
class CurveRow:
    d: float
    rate_dg: float | None
    rate_greedy: float | None
    rate_baseline: float | None
    best_M: int | None
    best_beta: tuple[float, ...] | None


def dg_bound(tau: int, d: float) -> float:
    if tau < 1:
        raise ValueError("tau must be >= 1")
    if not (0.0 <= d <= 1.0):
        raise ValueError("d must lie in [0, 1]")
    x = d * (tau + 1) / 2**tau
    if x > 0.5 + 1e-12:
        raise HypothesisViolated(f"d (tau+1)/2^tau = {x:.6f} > 1/2")
    return 1.0 - binary_entropy(min(x, 0.5))


def g_of_d(tau: int, M: int, d: float) -> float:
    if not (M >= tau >= 1):
        raise ValueError("need M >= tau >= 1")
    total = 2 * tau * d**M
    for i in range(1, tau + 1):
        total += (tau - i) * math.comb(M, i) * (1 - d) ** i * d ** (M - i)
    return total


def alpha_of(tau: int, M: int, d: float, beta_tau: float) -> float:
    """beta_tau (2 tau P_0 + sum_{i<tau} (tau-i) P_i), P = Binomial(M, 1-d) pmf."""
    pmf = binom.pmf(np.arange(tau + 1), M, 1.0 - d)
    total = 2 * tau * pmf[0] + sum((tau - i) * pmf[i] for i in range(1, tau))
    return float(beta_tau * total)


def _g_vector(tau: int, Ms: np.ndarray, d: float) -> np.ndarray:
    out = 2 * tau * np.power(d, Ms.astype(np.float64))
    for i in range(1, tau):
        combs = np.array([math.comb(int(M), i) for M in Ms], dtype=np.float64)
        out = out + (tau - i) * combs * (1 - d) ** i * np.power(d, (Ms - i).astype(np.float64))
    return out


def _rates(tau: int, d: float, betas: np.ndarray, Ms: np.ndarray) -> np.ndarray:
    """Greedy-code rates, shape (len(betas), len(Ms))."""
    beta_sum = betas.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(betas > 0, betas / beta_sum[:, None], 1.0)
        comp = -np.sum(np.where(betas > 0, betas * np.log2(ratio), 0.0), axis=1)
    bt = betas[:, tau - 1][:, None]
    alpha = bt * _g_vector(tau, Ms, d)[None, :]
    # h(alpha) needs alpha in [0, 1]
    feasible = alpha < 1.0
    alpha = np.where(feasible, alpha, 0.0)
    span = 2 * bt + alpha
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(span > 0, alpha / np.where(span > 0, span, 1.0), 0.0)
    adversary = span * binary_entropy(frac) + binary_entropy(alpha)
    numer = comp[:, None] - adversary
    denom = 1.0 - tau * bt + bt * Ms[None, :]
    rate = np.where(feasible, numer / denom, 0.0)
    return np.maximum(rate, 0.0)


def _check_beta(tau: int, beta: Sequence[float]) -> np.ndarray:
    b = np.asarray(beta, dtype=np.float64)
    if b.shape != (tau,):
        raise ConstraintViolated(f"beta must have tau={tau} entries")
    if np.any(b < -1e-12):
        raise ConstraintViolated("beta entries must be non-negative")
    weighted = float(np.dot(np.arange(1, tau + 1), b))
    if abs(weighted - 1.0) > 1e-9:
        raise ConstraintViolated(f"sum i*beta_i = {weighted!r} != 1")
    return np.clip(b, 0.0, None)


def greedy_rate(tau: int, M: int, d: float, beta: Sequence[float]) -> float:
    if M < tau:
        raise ValueError("need M >= tau")
    b = _check_beta(tau, beta)
    return float(_rates(tau, d, b[None, :], np.array([M]))[0, 0])


@lru_cache(maxsize=32)
def beta_grid(tau: int, step: float = 0.01) -> np.ndarray:
    """All beta with entries on the ``step`` grid and sum_i i*beta_i = 1.

    beta_2..beta_tau are enumerated, beta_1 is solved for; rows with a negative
    beta_1 are dropped.
    """
    units = round(1.0 / step)
    if units <= 0 or abs(units * step - 1.0) > 1e-9:
        raise ValueError(f"step {step} does not divide 1")
    rows: list[list[int]] = []
    ranges = [range(units // i + 1) for i in range(2, tau + 1)]
    for ks in itertools.product(*ranges):
        used = sum(i * k for i, k in zip(range(2, tau + 1), ks))
        if used <= units:
            rows.append([units - used, *ks])
    grid = np.asarray(rows, dtype=np.float64) / units
    grid.setflags(write=False)
    return grid


def default_M_max(d: float) -> int:
    """Search limit for M. The best blow-up keeps about 4-5 surviving bits per
    long run, so it grows like 1/(1 - d); 64 covers everything below d = 0.875."""
    if not (0.0 <= d < 1.0):
        raise ValueError(f"d={d} outside [0, 1)")
    return max(64, math.ceil(8.0 / (1.0 - d) - 1e-9))


def greedy_search(
    tau: int, d: float, M_max: int | None = None, beta_step: float = 0.01
) -> BoundResult:
    """Best greedy rate over the beta grid and M in [tau, M_max].

    ``M_max=None`` uses `default_M_max`. Ties go to the lexicographically
    smallest (M, beta_1, ..., beta_tau).
    """
    if M_max is None:
        M_max = default_M_max(d)
    if M_max < tau:
        raise EmptyFeasibleGrid(f"M_max={M_max} < tau={tau}")
    betas = beta_grid(tau, beta_step)
    if betas.size == 0:
        raise EmptyFeasibleGrid("no beta satisfies the composition constraint")
    Ms = np.arange(tau, M_max + 1)
    rates = _rates(tau, d, betas, Ms)
    best = float(rates.max())
    rows, cols = np.nonzero(rates >= best - 1e-12)
    pick = min(zip(rows.tolist(), cols.tolist()), key=lambda rc: (Ms[rc[1]], *betas[rc[0]]))
    r, c = pick
    return BoundResult(
        tau=tau,
        d=d,
        rate=best,
        beta=tuple(round(float(v), 10) for v in betas[r]),
        M=int(Ms[c]),
        method="greedy",
    )


def rll_baseline(tau: int) -> float:
    """log2 of the largest root of x^(tau-1) = sum_{i<tau-1} x^i."""
    if tau < 2:
        raise ValueError("baseline needs tau >= 2")
    if tau == 2:
        return 0.0
    roots = np.roots([1.0] + [-1.0] * (tau - 1))
    real = roots[np.abs(roots.imag) < 1e-9].real
    return float(math.log2(real.max()))


def rll_count(n: int, tau: int) -> int:
    """Number of length-n strings whose runs are all shorter than tau.

    Transfer matrix over the current run length 1..tau-1; the factor 2 picks
    the first symbol.
    """
    if tau < 2:
        raise ValueError("tau must be >= 2")
    if n == 0:
        return 1
    k = tau - 1
    A = np.zeros((k, k), dtype=object)
    for ell in range(k):
        A[ell, 0] = 1
        if ell + 1 < k:
            A[ell, ell + 1] = 1
    state = np.zeros(k, dtype=object)
    state[0] = 1
    for _ in range(n - 1):
        state = state.dot(A)
    return int(2 * sum(state))


def rll_count_bruteforce(n: int, tau: int) -> int:
    count = 0
    for bits in itertools.product("01", repeat=n):
        text = "".join(bits)
        if all(len(list(g)) < tau for _, g in itertools.groupby(text)):
            count += 1
    return count


def composition_counts(N: int, beta: Sequence[float]) -> list[int]:
    counts = []
    for b in beta:
        k = b * N
        if abs(k - round(k)) > 1e-9:
            raise NonIntegralComposition(f"beta_i N = {k!r} is not an integer")
        counts.append(int(round(k)))
    if sum((i + 1) * k for i, k in enumerate(counts)) != N:
        raise NonIntegralComposition(f"run lengths do not add up to N={N}")
    return counts


def s_beta_size(N: int, beta: Sequence[float]) -> int:
    """2 (beta N)! / prod (beta_i N)!: orderings of the run lengths times first bit."""
    counts = composition_counts(N, beta)
    size = math.factorial(sum(counts))
    for k in counts:
        size //= math.factorial(k)
    return 2 * size


def construction_rate(tau: int, beta: Sequence[float], delta: float, M: int) -> float:
    """Rate of the blown-up greedy code against delta N restricted deletions."""
    b = _check_beta(tau, beta)
    total = b.sum()
    comp = -sum(v * math.log2(v / total) for v in b if v > 0)
    bt = b[tau - 1]
    span = 2 * bt + delta
    adversary = (span * binary_entropy(delta / span) if span > 0 else 0.0) + binary_entropy(delta)
    return max(0.0, (comp - adversary) / (1 + (M - tau) * bt))


def emit_curve(
    tau: int,
    d_grid: Iterable[float],
    methods: Sequence[str] = METHODS,
    M_max: int | None = None,
    beta_step: float = 0.01,
) -> list[CurveRow]:
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise ValueError(f"unknown methods: {sorted(unknown)}")
    baseline = rll_baseline(tau) if "baseline" in methods and tau >= 2 else None
    rows: list[CurveRow] = []
    for d in d_grid:
        if not (0.0 <= d < 1.0):
            raise ValueError(f"d={d} outside [0, 1)")
        rate_dg = None
        if "dg" in methods:
            try:
                rate_dg = dg_bound(tau, d)
            except HypothesisViolated:
                rate_dg = None
        best = greedy_search(tau, d, M_max, beta_step) if "greedy" in methods else None
        rows.append(
            CurveRow(
                d=float(d),
                rate_dg=rate_dg,
                rate_greedy=best.rate if best else None,
                rate_baseline=baseline,
                best_M=best.M if best else None,
                best_beta=best.beta if best else None,
            )
        )
    logger.debug("curve tau=%d: %d rows (%s)", tau, len(rows), ",".join(methods))
    return rows


__all__ = [
    "BoundResult",
    "CurveRow",
    "dg_bound",
    "g_of_d",
    "alpha_of",
    "greedy_rate",
    "beta_grid",
    "default_M_max",
    "greedy_search",
    "rll_baseline",
    "rll_count",
    "rll_count_bruteforce",
    "s_beta_size",
    "composition_counts",
    "construction_rate",
    "emit_curve",
    "METHODS",
]
