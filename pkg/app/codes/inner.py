"""Dense inner codebooks and their maximum-likelihood decoders.

A `Codebook` maps integer symbols to equal-length `BitString` codewords. Dense
books are drawn uniformly at random and filtered by the density window and
optional first/last bit constraints; greedy books (see `app.codes.greedy`)
share the same container.

Decoders return ``None`` as the erasure symbol when no codeword explains the
received string.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Iterator

import numpy as np

from ..core.bitseq import BitString, density_ok
from ..core.channels import ChannelSpec, TrimMode, cached_transition_dist, transmit
from ..core.errors import FeasibilityExhausted, SymbolOutOfAlphabet
from ..utils.seeding import Seed, derive_seed, make_rng

logger = logging.getLogger(__name__)

# Below this length the feasible pool is enumerated outright.
POOL_LIMIT = 16
ATTEMPTS_PER_CODEWORD = 1000
# Share of traces assumed to sit at the wrong outer position.
OUTLIER_WEIGHT = 0.1


@dataclass
class Codebook:
    entries: dict[int, BitString]
    n: int
    kind: str = "dense"
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.entries = {int(k): BitString.of(v) for k, v in self.entries.items()}
        bad = [k for k, c in self.entries.items() if len(c) != self.n]
        if bad:
            raise ValueError(f"codewords {bad[:5]} do not have length n={self.n}")
        if len(set(self.entries.values())) != len(self.entries):
            raise ValueError("codebook entries are not distinct")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    @cached_property
    def symbols(self) -> tuple[int, ...]:
        return tuple(sorted(self.entries))

    @cached_property
    def _reverse(self) -> dict[BitString, int]:
        return {c: s for s, c in self.entries.items()}

    def codeword(self, symbol: int) -> BitString:
        try:
            return self.entries[int(symbol)]
        except KeyError:
            raise SymbolOutOfAlphabet(f"symbol {symbol} not in a {len(self)}-word book") from None

    def index_of(self, bits: BitString | str) -> int | None:
        return self._reverse.get(BitString.of(bits))

    def items(self) -> Iterator[tuple[int, BitString]]:
        return ((s, self.entries[s]) for s in self.symbols)

    def rate(self) -> float:
        if self.n == 0 or len(self) == 0:
            return 0.0
        return math.log2(len(self)) / self.n

    # -- text persistence ---------------------------------------------------
    def save(self, path: str | Path) -> None:
        header = [f"n={self.n}", f"kind={self.kind}"]
        header += [
            f"{k}={json.dumps(v, separators=(',', ':'))}" for k, v in sorted(self.metadata.items())
        ]
        lines = ["# " + " ".join(header)]
        lines += [f"{s} {c.bits}" for s, c in self.items()]
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Codebook":
        n: int | None = None
        kind = "dense"
        metadata: dict[str, Any] = {}
        entries: dict[int, BitString] = {}
        for raw in Path(path).read_text().splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    key, _, value = token.partition("=")
                    if key == "n":
                        n = int(value)
                    elif key == "kind":
                        kind = value
                    else:
                        metadata[key] = json.loads(value)
                continue
            idx, bits = line.split()
            entries[int(idx)] = BitString(bits)
        if n is None:
            n = len(next(iter(entries.values()))) if entries else 0
        return cls(entries=entries, n=n, kind=kind, metadata=metadata)


def _end_mask(mat: np.ndarray, prefix_bit: int | None, suffix_bit: int | None) -> np.ndarray:
    mask = np.ones(mat.shape[0], dtype=bool)
    if prefix_bit is not None:
        mask &= mat[:, 0] == prefix_bit
    if suffix_bit is not None:
        mask &= mat[:, -1] == suffix_bit
    return mask


def _density_mask(mat: np.ndarray, zeta: float, gamma: float) -> np.ndarray:
    n = mat.shape[1]
    window = int(math.floor(zeta * n + 1e-9))
    csum = np.concatenate((np.zeros((mat.shape[0], 1), dtype=np.int64), np.cumsum(mat, axis=1)), axis=1)
    weights = csum[:, window:] - csum[:, :-window]
    lo = gamma * window - 1e-9
    hi = (1.0 - gamma) * window + 1e-9
    return np.all((weights >= lo) & (weights <= hi), axis=1)


def _accepted_rows(
    n: int, zeta: float, gamma: float, prefix_bit: int | None, suffix_bit: int | None
) -> np.ndarray:
    codes = np.arange(1 << n, dtype=np.int64)
    mat = ((codes[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.int64)
    return mat[_end_mask(mat, prefix_bit, suffix_bit) & _density_mask(mat, zeta, gamma)]


def dense_pool(
    n: int,
    zeta: float,
    gamma: float,
    prefix_bit: int | None = None,
    suffix_bit: int | None = None,
) -> Codebook:
    """Every length-n string passing the end bits and the density window, in binary order."""
    if not 2 <= n <= POOL_LIMIT:
        raise ValueError(f"pool enumeration needs 2 <= n <= {POOL_LIMIT}")
    density_ok(BitString.zeros(n), zeta, gamma)
    rows = _accepted_rows(n, zeta, gamma, prefix_bit, suffix_bit)
    metadata = {"zeta": zeta, "gamma": gamma, "prefix_bit": prefix_bit, "suffix_bit": suffix_bit}
    words = {i: BitString.from_array(row) for i, row in enumerate(rows)}
    return Codebook(entries=words, n=n, kind="dense", metadata=metadata)


def build_dense_codebook(
    n: int,
    num_codewords: int,
    zeta: float,
    gamma: float,
    prefix_bit: int | None = None,
    suffix_bit: int | None = None,
    seed: Seed = 0,
    max_attempts: int | None = None,
) -> Codebook:
    """Random codebook of distinct codewords passing the density window.

    Codewords are i.i.d. uniform conditioned on acceptance and distinctness.
    For n <= 16 the accepted pool is enumerated and sampled without
    replacement, which is the same law; longer blocks use rejection sampling
    with ``max_attempts`` draws (default 1000 per codeword).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if num_codewords < 1:
        raise ValueError("need at least one codeword")
    if num_codewords > 2 ** (n - 2):
        raise FeasibilityExhausted(f"{num_codewords} codewords exceed 2^(n-2) = {2 ** (n - 2)}")
    # validates zeta and gamma
    density_ok(BitString.zeros(n), zeta, gamma)
    rng = make_rng(seed)
    metadata = {"zeta": zeta, "gamma": gamma, "prefix_bit": prefix_bit, "suffix_bit": suffix_bit}

    if n <= POOL_LIMIT:
        rows = _accepted_rows(n, zeta, gamma, prefix_bit, suffix_bit)
        if len(rows) < num_codewords:
            raise FeasibilityExhausted(
                f"only {len(rows)} length-{n} strings pass the constraints, {num_codewords} requested"
            )
        picked = rng.choice(len(rows), size=num_codewords, replace=False)
        words = [BitString.from_array(rows[i]) for i in picked]
    else:
        budget = max_attempts or ATTEMPTS_PER_CODEWORD * num_codewords
        seen: set[BitString] = set()
        words = []
        attempts = 0
        while len(words) < num_codewords:
            if attempts >= budget:
                raise FeasibilityExhausted(
                    f"accepted {len(words)}/{num_codewords} codewords after {attempts} draws"
                )
            attempts += 1
            c = BitString.random(n, rng)
            if prefix_bit is not None and c[0] != prefix_bit:
                continue
            if suffix_bit is not None and c[n - 1] != suffix_bit:
                continue
            if c in seen or not density_ok(c, zeta, gamma):
                continue
            seen.add(c)
            words.append(c)
        logger.debug("dense book n=%d K=%d: %d draws", n, num_codewords, attempts)

    return Codebook(entries=dict(enumerate(words)), n=n, kind="dense", metadata=metadata)


def likelihoods(book: Codebook, spec: ChannelSpec, y: BitString | str) -> np.ndarray:
    """P(y | c) for every codeword, in symbol order."""
    y = BitString.of(y)
    return np.array(
        [cached_transition_dist(spec, c).prob(y) for _, c in book.items()], dtype=np.float64
    )


def ml_decode_single(book: Codebook, spec: ChannelSpec, y: BitString | str) -> int | None:
    """Most likely symbol for one received segment; ``None`` when all likelihoods vanish.

    Ties go to the smallest symbol.
    """
    lik = likelihoods(book, spec, y)
    if lik.size == 0 or lik.max() <= 0.0:
        return None
    return book.symbols[int(np.argmax(lik))]


def ml_decode_traces(
    book: Codebook,
    spec: ChannelSpec,
    traces: Iterable[BitString | str | None],
    outlier: float = OUTLIER_WEIGHT,
) -> int | None:
    """Maximize the product of per-trace likelihoods under an outlier mixture.

    Each trace is scored as ``(1 - outlier) P(t | c) + outlier * mean_c' P(t | c')``:
    a trace cut from the wrong position reads as a uniformly drawn codeword, so
    one misplaced trace cannot veto the right symbol. For a single trace the
    argmax is the plain ML choice; ``outlier=0`` gives the plain product.
    ``None`` traces are skipped, and so are traces no codeword can produce.
    """
    if not 0.0 <= outlier < 1.0:
        raise ValueError("outlier must lie in [0, 1)")
    loglik = np.zeros(len(book), dtype=np.float64)
    used = 0
    for t in traces:
        if t is None:
            continue
        lik = likelihoods(book, spec, t)
        if lik.size == 0 or lik.max() <= 0.0:
            continue
        mixed = (1.0 - outlier) * lik + outlier * lik.mean()
        with np.errstate(divide="ignore"):
            loglik += np.log(mixed)
        used += 1
    if used == 0:
        return None
    return book.symbols[int(np.argmax(loglik))]


def inner_accuracy(book: Codebook, spec: ChannelSpec, samples: int, seed: int = 0) -> float:
    """Share of uniformly drawn codewords that ML decoding under 00-trimming gets back.

    Each codeword goes through ``spec`` on its own, so buffer events are left out.
    An erased segment counts as a miss.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    trimmed = spec.with_trim(TrimMode.TRIM00)
    symbols = book.symbols
    picks = make_rng(derive_seed(seed, "symbols")).integers(0, len(symbols), size=samples)
    hits = 0
    for i, j in enumerate(picks):
        sym = symbols[int(j)]
        y = transmit(trimmed, book.codeword(sym), derive_seed(seed, i))
        hits += ml_decode_single(book, trimmed, y) == sym
    accuracy = hits / samples
    logger.debug("inner accuracy n=%d K=%d %s: %.3f", book.n, len(book), spec.describe(), accuracy)
    return accuracy


__all__ = [
    "Codebook",
    "build_dense_codebook",
    "dense_pool",
    "inner_accuracy",
    "likelihoods",
    "ml_decode_single",
    "ml_decode_traces",
]
