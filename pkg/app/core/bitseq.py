"""Binary-sequence primitives.

`BitString` is the value type passed between channels, codes and schemes. It is
an immutable wrapper around a ``'0'/'1'`` text so it hashes, sorts and prints
naturally; numeric kernels get a ``uint8`` view through `BitString.array`.

Also here: run decomposition, insertion/deletion edit distance, subsequence
enumeration and counting, density windows and buffer detection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Hashable, NamedTuple, Sequence, Union

import numpy as np
from numba import njit

from .errors import InstanceTooLarge

EXHAUSTIVE_SUBSEQUENCE_LIMIT = 20

_NOT_BITS = str.maketrans("", "", "01")


@dataclass(frozen=True, order=True)
class BitString:
    """Immutable binary string. Ordering is plain lexicographic on the text."""

    bits: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.bits, str):
            raise TypeError("BitString wraps a str; use BitString.of for other inputs")
        if self.bits.translate(_NOT_BITS):
            raise ValueError(f"not a binary string: {self.bits[:32]!r}")

    @classmethod
    def of(cls, value: Union["BitString", str, Iterable[int], np.ndarray]) -> "BitString":
        if isinstance(value, BitString):
            return value
        if isinstance(value, str):
            return cls(value)
        if isinstance(value, np.ndarray):
            return cls.from_array(value)
        return cls("".join("1" if int(b) else "0" for b in value))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitString":
        a = np.asarray(arr, dtype=np.uint8)
        return cls((a + 48).tobytes().decode("ascii"))

    @classmethod
    def repeat(cls, symbol: int, count: int) -> "BitString":
        return cls(str(int(symbol)) * max(0, int(count)))

    @classmethod
    def zeros(cls, count: int) -> "BitString":
        return cls.repeat(0, count)

    @classmethod
    def ones(cls, count: int) -> "BitString":
        return cls.repeat(1, count)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "BitString":
        return cls.from_array(rng.integers(0, 2, size=n, dtype=np.uint8))

    @property
    def length(self) -> int:
        return len(self.bits)

    @property
    def array(self) -> np.ndarray:
        """Fresh ``uint8`` array of the bits."""
        return np.frombuffer(self.bits.encode("ascii"), dtype=np.uint8) - 48

    @property
    def weight(self) -> int:
        return self.bits.count("1")

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return (1 if c == "1" else 0 for c in self.bits)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return BitString(self.bits[key])
        return 1 if self.bits[key] == "1" else 0

    def __add__(self, other: Union["BitString", str]) -> "BitString":
        other_bits = other.bits if isinstance(other, BitString) else BitString(other).bits
        return BitString(self.bits + other_bits)

    def __str__(self) -> str:
        return self.bits

    def __repr__(self) -> str:
        return f"BitString({self.bits!r})"


class Run(NamedTuple):
    symbol: int
    length: int


RunList = list[Run]


@dataclass(frozen=True)
class Segmentation:
    """Result of buffer detection.

    ``segment_spans`` and ``buffer_spans`` are half-open ``(start, end)`` index
    pairs into the source string; together they tile it, except that buffers
    touching either end produce no (empty) boundary segment.
    """

    segments: tuple[BitString, ...]
    buffer_spans: tuple[tuple[int, int], ...]
    segment_spans: tuple[tuple[int, int], ...]


def runs(s: BitString | str) -> RunList:
    s = BitString.of(s)
    return [Run(int(sym), sum(1 for _ in grp)) for sym, grp in itertools.groupby(s.bits)]


def from_runs(run_list: Iterable[Run | tuple[int, int]]) -> BitString:
    return BitString("".join(str(int(sym)) * int(length) for sym, length in run_list))


def collapse_runs(s: BitString | str, tau: int) -> BitString:
    """Shorten every run of length >= tau to exactly tau."""
    return from_runs((r.symbol, min(r.length, tau)) for r in runs(s))


def strip_symbol(s: BitString | str, lead: int | None, trail: int | None) -> BitString:
    """Remove a leading run of ``lead`` and then a trailing run of ``trail``.

    ``None`` leaves that side alone.
    """
    text = BitString.of(s).bits
    if lead is not None:
        text = text.lstrip(str(lead))
    if trail is not None:
        text = text.rstrip(str(trail))
    return BitString(text)


@njit(cache=True)
def _lcs_kernel(a, b):
    n = a.shape[0]
    m = b.shape[0]
    prev = np.zeros(m + 1, dtype=np.int64)
    cur = np.zeros(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        cur[0] = 0
        ai = a[i - 1]
        for j in range(1, m + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            elif prev[j] >= cur[j - 1]:
                cur[j] = prev[j]
            else:
                cur[j] = cur[j - 1]
        prev, cur = cur, prev
    return prev[m]


def _binary_text(a: object) -> bool:
    return isinstance(a, BitString) or (isinstance(a, str) and not a.translate(_NOT_BITS))


def _as_codes(a: Sequence[Hashable], b: Sequence[Hashable]) -> tuple[np.ndarray, np.ndarray]:
    if _binary_text(a) and _binary_text(b):
        return BitString.of(a).array.astype(np.int64), BitString.of(b).array.astype(np.int64)
    table: dict[Hashable, int] = {}
    ca = np.array([table.setdefault(x, len(table)) for x in a], dtype=np.int64)
    cb = np.array([table.setdefault(x, len(table)) for x in b], dtype=np.int64)
    return ca, cb


def lcs_length(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    ca, cb = _as_codes(a, b)
    if ca.size == 0 or cb.size == 0:
        return 0
    return int(_lcs_kernel(ca, cb))


def edit_distance(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Insertion/deletion distance |a| + |b| - 2 LCS(a, b).

    Works on bit strings and on arbitrary hashable symbol sequences (outer
    code symbols, sync symbols).
    """
    return len(a) + len(b) - 2 * lcs_length(a, b)


def is_subsequence(y: BitString | str, x: BitString | str) -> bool:
    it = iter(BitString.of(x).bits)
    return all(c in it for c in BitString.of(y).bits)


def enumerate_subsequences(s: BitString | str, ell: int) -> set[BitString]:
    """All distinct strings obtained from ``s`` by deleting exactly ``ell`` bits."""
    s = BitString.of(s)
    n = len(s)
    if n > EXHAUSTIVE_SUBSEQUENCE_LIMIT:
        raise InstanceTooLarge(f"|s|={n} exceeds {EXHAUSTIVE_SUBSEQUENCE_LIMIT}")
    if ell < 0 or ell > n:
        raise ValueError(f"cannot delete {ell} bits from a length-{n} string")
    text = s.bits
    return {
        BitString("".join(text[i] for i in keep))
        for keep in itertools.combinations(range(n), n - ell)
    }


def subsequence_ball_bound(num_runs: int, ell: int) -> int:
    """Upper bound C(r + ell - 1, ell) on the size of the ell-deletion ball."""
    if ell == 0:
        return 1
    return math.comb(num_runs + ell - 1, ell)


def supersequence_count(n: int, y: BitString | str) -> int:
    """Number of length-n binary strings containing ``y`` as a subsequence.

    Levenshtein's count, summed from i = 0; it depends on |y| only.
    """
    k = len(BitString.of(y))
    if n < k:
        raise ValueError(f"n={n} shorter than |y|={k}")
    return sum(math.comb(n, i) for i in range(n - k + 1))


def density_ok(c: BitString | str, zeta: float, gamma: float) -> bool:
    """True iff every length-floor(zeta*n) window has weight in [gamma*L, (1-gamma)*L]."""
    c = BitString.of(c)
    n = len(c)
    if not (0 < zeta < 1) or not (0 < gamma < 0.5):
        raise ValueError("need 0 < zeta < 1 and 0 < gamma < 1/2")
    window = int(math.floor(zeta * n + 1e-9))
    if window < 1:
        raise ValueError(f"zeta*n = {zeta * n:.3f} < 1")
    csum = np.concatenate(([0], np.cumsum(c.array, dtype=np.int64)))
    weights = csum[window:] - csum[:-window]
    lo = gamma * window - 1e-9
    hi = (1.0 - gamma) * window + 1e-9
    return bool(np.all((weights >= lo) & (weights <= hi)))


def identify_buffers(s: BitString | str, symbol: int, threshold: int) -> Segmentation:
    """Mark every maximal run of ``symbol`` with length >= threshold as a buffer."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    s = BitString.of(s)
    buffers: list[tuple[int, int]] = []
    pos = 0
    for run in runs(s):
        if run.symbol == symbol and run.length >= threshold:
            buffers.append((pos, pos + run.length))
        pos += run.length

    seg_spans: list[tuple[int, int]] = []
    cursor = 0
    for start, end in buffers:
        if start > cursor:
            seg_spans.append((cursor, start))
        cursor = end
    if cursor < len(s):
        seg_spans.append((cursor, len(s)))

    text = s.bits
    return Segmentation(
        segments=tuple(BitString(text[a:b]) for a, b in seg_spans),
        buffer_spans=tuple(buffers),
        segment_spans=tuple(seg_spans),
    )


__all__ = [
    "BitString",
    "Run",
    "RunList",
    "Segmentation",
    "runs",
    "from_runs",
    "collapse_runs",
    "strip_symbol",
    "edit_distance",
    "lcs_length",
    "is_subsequence",
    "enumerate_subsequences",
    "subsequence_ball_bound",
    "supersequence_count",
    "density_ok",
    "identify_buffers",
]
