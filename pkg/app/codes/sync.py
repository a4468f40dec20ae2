"""Synchronization strings and LCS position matching.

An eta-synchronization string S satisfies ED(S[i:j], S[j:k]) > (1 - eta)(k - i)
for all i < j < k (0-based, half-open). `build_sync_string` grows S one symbol
at a time and checks only the triples ending at the new symbol, backtracking
when no symbol fits. `match_sync` aligns a received symbol sequence to S by a
longest common subsequence.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Sequence

import numpy as np
from numba import njit

from ..core.errors import ConstructionFailed, InstanceTooLarge
from ..utils.seeding import Seed, make_rng

logger = logging.getLogger(__name__)

SYNC_LIMIT = 256
STEP_BUDGET = 200_000


@dataclass(frozen=True)
class SyncString:
    symbols: tuple[int, ...]
    eta: float
    alphabet_size: int
    verified: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if any(not (0 <= s < self.alphabet_size) for s in self.symbols):
            raise ValueError(f"symbols must lie in [0, {self.alphabet_size})")

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, i: int) -> int:
        return self.symbols[i]

    def save(self, path: str | Path) -> None:
        header = (
            f"# n={len(self)} eta={self.eta!r} alphabet_size={self.alphabet_size} "
            f"verified={int(self.verified)}"
        )
        Path(path).write_text(header + "\n" + " ".join(map(str, self.symbols)) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "SyncString":
        fields: dict[str, str] = {}
        symbols: list[int] = []
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if line.startswith("#"):
                fields.update(tok.split("=", 1) for tok in line[1:].split())
            elif line:
                symbols.extend(int(tok) for tok in line.split())
        if "n" in fields and int(fields["n"]) != len(symbols):
            raise ValueError(f"header says n={fields['n']}, found {len(symbols)} symbols")
        return cls(
            symbols=tuple(symbols),
            eta=float(fields.get("eta", "nan")),
            alphabet_size=int(fields.get("alphabet_size", max(symbols, default=-1) + 1)),
            verified=fields.get("verified", "0") == "1",
        )


@dataclass(frozen=True)
class Matching:
    """Monotone alignment: S[left[l]] == received[right[l]] for every l."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.left)

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.left, self.right))


@njit(cache=True)
def _triple_violation(s, eta):
    n = s.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            la = j - i
            lb = n - j
            prev = np.zeros(lb + 1, dtype=np.int64)
            cur = np.zeros(lb + 1, dtype=np.int64)
            for a in range(i, j):
                cur[0] = 0
                for b in range(1, lb + 1):
                    if s[a] == s[j + b - 1]:
                        cur[b] = prev[b - 1] + 1
                    elif prev[b] >= cur[b - 1]:
                        cur[b] = prev[b]
                    else:
                        cur[b] = cur[b - 1]
                prev, cur = cur, prev
            for b in range(1, lb + 1):
                total = la + b
                if total - 2 * prev[b] <= (1.0 - eta) * total + 1e-12:
                    return True
    return False


@njit(cache=True)
def _append_ok(s, k, eta):
    """Check every triple i < j < k + 1 whose right block ends at s[k]."""
    for j in range(1, k + 1):
        lb = k + 1 - j
        prev = np.zeros(lb + 1, dtype=np.int64)
        cur = np.zeros(lb + 1, dtype=np.int64)
        # rows walk s[j-1], s[j-2], ... (left block reversed), columns walk
        # s[k], s[k-1], ..., s[j] (right block reversed)
        for a in range(1, j + 1):
            sa = s[j - a]
            cur[0] = 0
            for b in range(1, lb + 1):
                if sa == s[k - b + 1]:
                    cur[b] = prev[b - 1] + 1
                elif prev[b] >= cur[b - 1]:
                    cur[b] = prev[b]
                else:
                    cur[b] = cur[b - 1]
            total = a + lb
            if total - 2 * cur[lb] <= (1.0 - eta) * total + 1e-12:
                return False
            prev, cur = cur, prev
    return True


def _encode_symbols(S: SyncString | Sequence[Hashable]) -> np.ndarray:
    if isinstance(S, SyncString):
        return np.asarray(S.symbols, dtype=np.int64)
    table: dict[Hashable, int] = {}
    return np.asarray([table.setdefault(x, len(table)) for x in S], dtype=np.int64)


def verify_sync_string(S: SyncString | Sequence[Hashable], eta: float | None = None) -> bool:
    """Exhaustive check over all index triples."""
    if eta is None:
        if not isinstance(S, SyncString):
            raise ValueError("eta is required for a plain symbol sequence")
        eta = S.eta
    arr = _encode_symbols(S)
    if arr.size < 2:
        return True
    return not _triple_violation(arr, float(eta))


def build_sync_string(
    n: int,
    eta: float,
    alphabet_size: int,
    seed: Seed = 0,
    max_steps: int = STEP_BUDGET,
) -> SyncString:
    """Greedy extension with backtracking; symbol order per position is seeded."""
    if alphabet_size < 4:
        raise ValueError("alphabet_size must be >= 4")
    if not (0.0 < eta < 1.0):
        raise ValueError("eta must lie in (0, 1)")
    if n > SYNC_LIMIT:
        raise InstanceTooLarge(f"n={n} exceeds {SYNC_LIMIT}")
    rng = make_rng(seed)
    s = np.zeros(max(n, 1), dtype=np.int64)
    orders: list[np.ndarray] = []
    cursor: list[int] = []
    k = 0
    steps = 0
    while k < n:
        if len(orders) <= k:
            orders.append(rng.permutation(alphabet_size))
            cursor.append(0)
        placed = False
        while cursor[k] < alphabet_size:
            steps += 1
            if steps > max_steps:
                raise ConstructionFailed(
                    f"no {eta}-sync string of length {n} over {alphabet_size} symbols "
                    f"within {max_steps} steps (reached length {k})"
                )
            s[k] = orders[k][cursor[k]]
            cursor[k] += 1
            if _append_ok(s, k, float(eta)):
                placed = True
                break
        if placed:
            k += 1
            continue
        orders.pop()
        cursor.pop()
        if k == 0:
            raise ConstructionFailed(f"search space exhausted for n={n}, eta={eta}")
        k -= 1
    logger.debug("sync string n=%d eta=%g |A|=%d after %d steps", n, eta, alphabet_size, steps)
    return SyncString(tuple(s[:n].tolist()), eta, alphabet_size, verified=True)


@njit(cache=True)
def _align(a, b):
    n = a.shape[0]
    m = b.shape[0]
    L = np.zeros((n + 1, m + 1), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                L[i, j] = L[i + 1, j + 1] + 1
            elif L[i + 1, j] >= L[i, j + 1]:
                L[i, j] = L[i + 1, j]
            else:
                L[i, j] = L[i, j + 1]
    t = L[0, 0]
    left = np.empty(t, dtype=np.int64)
    right = np.empty(t, dtype=np.int64)
    i = 0
    j = 0
    ell = 0
    while i < n and j < m:
        if a[i] == b[j]:
            left[ell] = i
            right[ell] = j
            ell += 1
            i += 1
            j += 1
        elif L[i + 1, j] >= L[i, j + 1]:
            i += 1
        else:
            j += 1
    return left, right


def match_sync(S: SyncString | Sequence[Hashable], received: Sequence[Hashable | None]) -> Matching:
    """Maximum monotone matching between S and ``received`` (0-based indices).

    ``None`` entries in ``received`` never match. Among maximum matchings the
    traceback matches equal symbols immediately and otherwise skips in S first.
    """
    table: dict[Hashable, int] = {}
    src = S.symbols if isinstance(S, SyncString) else tuple(S)
    a = np.asarray([table.setdefault(x, len(table)) for x in src], dtype=np.int64)
    b = np.asarray([-1 if x is None else table.get(x, -2) for x in received], dtype=np.int64)
    if a.size == 0 or b.size == 0:
        return Matching((), ())
    left, right = _align(a, b)
    return Matching(tuple(left.tolist()), tuple(right.tolist()))


__all__ = [
    "SyncString",
    "Matching",
    "build_sync_string",
    "verify_sync_string",
    "match_sync",
]
