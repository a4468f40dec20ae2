"""Reed-Solomon codes over a prime field GF(p).

Evaluation code: a message (f_0, ..., f_{k-1}) is the polynomial
f(x) = sum f_l x^l, and the codeword is (f(0), f(1), ..., f(n-1)). The minimum
distance is n - k + 1, so e erasures and t substitutions are corrected whenever
e + 2t < n - k + 1. Decoding drops the erased positions and runs
Berlekamp-Welch on the rest.

Polynomials are coefficient lists, lowest degree first.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core.errors import DecodeFailure, SymbolOutOfAlphabet

logger = logging.getLogger(__name__)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % f for f in range(2, math.isqrt(p) + 1))


def next_prime(n: int) -> int:
    p = max(2, n)
    while not is_prime(p):
        p += 1
    return p


@dataclass(frozen=True)
class OuterCodeword:
    """Outer word; ``None`` marks an erasure."""

    symbols: tuple[int | None, ...]

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i: int) -> int | None:
        return self.symbols[i]

    @property
    def erasures(self) -> int:
        return sum(1 for s in self.symbols if s is None)


@dataclass(frozen=True)
class RSDecodeResult:
    message: tuple[int, ...]
    codeword: OuterCodeword
    erasures: int
    corrected: tuple[int, ...]


def _poly_eval(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _poly_divmod(num: list[int], den: list[int], p: int) -> tuple[list[int], list[int]]:
    num = list(num)
    while den and den[-1] % p == 0:
        den = den[:-1]
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(den[-1], p - 2, p)
    quot = [0] * max(len(num) - len(den) + 1, 0)
    for shift in range(len(num) - len(den), -1, -1):
        coef = num[shift + len(den) - 1] * inv_lead % p
        quot[shift] = coef
        if coef:
            for i, d in enumerate(den):
                num[shift + i] = (num[shift + i] - coef * d) % p
    rem = num[: len(den) - 1]
    return quot, rem


def _solve_mod_p(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of A x = b over GF(p) (free variables set to 0), or None."""
    rows, cols = A.shape
    M = np.concatenate((A % p, (b % p)[:, None]), axis=1).astype(np.int64)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        nz = np.flatnonzero(M[r:, c]) + r if r < rows else np.array([], dtype=np.int64)
        if nz.size == 0:
            continue
        piv = int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = M[r] * pow(int(M[r, c]), p - 2, p) % p
        others = np.flatnonzero(M[:, c])
        for o in others:
            if o != r:
                M[o] = (M[o] - M[o, c] * M[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if np.any(M[r:, cols] % p):
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = M[i, cols]
    return x


@dataclass(frozen=True)
class ReedSolomon:
    n: int
    k: int
    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"field size {self.p} is not prime")
        if not (1 <= self.k <= self.n <= self.p):
            raise ValueError(f"need 1 <= k <= n <= p, got k={self.k}, n={self.n}, p={self.p}")

    @classmethod
    def from_distance(cls, n: int, delta_sub: float, p: int) -> "ReedSolomon":
        """Code whose distance is ceil(delta_sub * n)."""
        distance = max(1, math.ceil(delta_sub * n - 1e-9))
        return cls(n=n, k=n - distance + 1, p=p)

    @property
    def distance(self) -> int:
        return self.n - self.k + 1

    @property
    def delta_sub(self) -> float:
        return self.distance / self.n

    @property
    def rate(self) -> float:
        return self.k / self.n

    def radius_ok(self, erasures: int, substitutions: int) -> bool:
        return erasures + 2 * substitutions < self.distance

    def encode(self, msg: Sequence[int]) -> OuterCodeword:
        msg = [int(m) for m in msg]
        if len(msg) != self.k:
            raise ValueError(f"message has {len(msg)} symbols, expected k={self.k}")
        if any(not (0 <= m < self.p) for m in msg):
            raise SymbolOutOfAlphabet(f"message symbols must lie in [0, {self.p})")
        return OuterCodeword(tuple(_poly_eval(msg, x, self.p) for x in range(self.n)))

    def decode(self, word: Sequence[int | None] | OuterCodeword) -> list[int]:
        return list(self.decode_report(word).message)

    def decode_report(self, word: Sequence[int | None] | OuterCodeword) -> RSDecodeResult:
        symbols = list(word)
        if len(symbols) != self.n:
            raise ValueError(f"word has {len(symbols)} symbols, expected n={self.n}")
        known = [(x, int(y) % self.p) for x, y in enumerate(symbols) if y is not None]
        erasures = self.n - len(known)
        if len(known) < self.k:
            raise DecodeFailure("too-many-erasures", f"{erasures} erasures, k={self.k}")
        t = (len(known) - self.k) // 2
        f = self._berlekamp_welch(known, t)
        if f is None:
            raise DecodeFailure("uncorrectable", f"{erasures} erasures, more than {t} errors")
        wrong = tuple(x for x, y in known if _poly_eval(f, x, self.p) != y)
        if len(wrong) > t:
            raise DecodeFailure("uncorrectable", f"{len(wrong)} disagreements > {t}")
        if wrong:
            logger.debug("RS corrected %d substitutions, %d erasures", len(wrong), erasures)
        msg = tuple(f) + (0,) * (self.k - len(f))
        return RSDecodeResult(
            message=msg,
            codeword=self.encode(msg),
            erasures=erasures,
            corrected=wrong,
        )

    def _berlekamp_welch(self, known: list[tuple[int, int]], t: int) -> list[int] | None:
        """Find Q (deg < k + t) and monic E (deg t) with Q(x) = y E(x) on ``known``."""
        p, k = self.p, self.k
        xs = np.array([x for x, _ in known], dtype=np.int64)
        ys = np.array([y for _, y in known], dtype=np.int64)
        nq = k + t
        powers = np.ones((len(known), nq + 1), dtype=np.int64)
        for j in range(1, nq + 1):
            powers[:, j] = powers[:, j - 1] * xs % p
        A = np.concatenate((powers[:, :nq], (-ys[:, None] * powers[:, :t]) % p), axis=1)
        b = ys * powers[:, t] % p
        sol = _solve_mod_p(A, b, p)
        if sol is None:
            return None
        Q = [int(v) for v in sol[:nq]]
        E = [int(v) for v in sol[nq:]] + [1]
        f, rem = _poly_divmod(Q, E, p)
        if any(rem):
            return None
        while f and f[-1] == 0:
            f.pop()
        if len(f) > k:
            return None
        return f


__all__ = ["ReedSolomon", "OuterCodeword", "RSDecodeResult", "is_prime", "next_prime"]
