"""Insertion/deletion outer code: Reed-Solomon payloads indexed by a sync string.

Position i of the outer codeword is sent as the pair (rs_symbol_i, S_i). The
decoder aligns the received sync coordinates to S with `match_sync`; matched
positions take their payload from the received pair, unmatched positions
become erasures, and the Reed-Solomon decoder finishes the job.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core.errors import DecodeFailure
from .reed_solomon import ReedSolomon, RSDecodeResult
from .sync import SyncString, match_sync

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True)
class InsdelDecodeResult:
    message: tuple[int, ...]
    matched: int
    received: int
    erasures: int
    substitutions: int


@dataclass(frozen=True)
class InsdelCode:
    rs: ReedSolomon
    sync: SyncString

    def __post_init__(self) -> None:
        if len(self.sync) != self.rs.n:
            raise ValueError(f"sync string has {len(self.sync)} symbols, outer length is {self.rs.n}")

    @property
    def n(self) -> int:
        return self.rs.n

    @property
    def k(self) -> int:
        return self.rs.k

    def encode(self, msg: Sequence[int]) -> list[Pair]:
        word = self.rs.encode(msg)
        return [(int(c), int(s)) for c, s in zip(word, self.sync)]

    def align(self, received: Sequence[Pair | None]) -> list[int | None]:
        """Outer word with erasures, built from the received pairs."""
        pairs = [r for r in received if r is not None]
        matching = match_sync(self.sync, [s for _, s in pairs])
        word: list[int | None] = [None] * self.n
        for i, j in matching.pairs():
            word[i] = pairs[j][0]
        return word

    def decode_report(self, received: Sequence[Pair | None]) -> InsdelDecodeResult:
        pairs = [r for r in received if r is not None]
        word = self.align(pairs)
        matched = sum(1 for w in word if w is not None)
        result: RSDecodeResult = self.rs.decode_report(word)
        logger.debug(
            "insdel decode: %d received, %d matched, %d corrected",
            len(pairs), matched, len(result.corrected),
        )
        return InsdelDecodeResult(
            message=result.message,
            matched=matched,
            received=len(pairs),
            erasures=result.erasures,
            substitutions=len(result.corrected),
        )

    def decode(self, received: Sequence[Pair | None]) -> list[int]:
        return list(self.decode_report(received).message)


def insdel_encode(code: InsdelCode, msg: Sequence[int]) -> list[Pair]:
    return code.encode(msg)


def insdel_decode(code: InsdelCode, received: Sequence[Pair | None]) -> list[int]:
    """Raises DecodeFailure when the Reed-Solomon stage gives up."""
    try:
        return code.decode(received)
    except DecodeFailure:
        logger.info("insdel decode failed on %d received pairs", len(received))
        raise


def corrupt_pairs(
    pairs: Sequence[Pair],
    deletions: int,
    insertions: int,
    rng: np.random.Generator,
    payload_size: int,
    sync_size: int,
) -> list[Pair]:
    """Delete ``deletions`` random pairs, then insert ``insertions`` random ones."""
    out = list(pairs)
    if deletions > len(out):
        raise ValueError("more deletions than pairs")
    for idx in sorted(rng.choice(len(out), size=deletions, replace=False).tolist(), reverse=True):
        del out[idx]
    for _ in range(insertions):
        pos = int(rng.integers(0, len(out) + 1))
        out.insert(pos, (int(rng.integers(payload_size)), int(rng.integers(sync_size))))
    return out


__all__ = [
    "Pair",
    "InsdelCode",
    "InsdelDecodeResult",
    "insdel_encode",
    "insdel_decode",
    "corrupt_pairs",
]
