"""Multi-trace concatenated scheme with sync symbols and 0/1 buffers.

Codeword: ``a_1 0^B b_1 1^B ... a_n 0^B b_n 1^B`` where a_i encodes the outer
symbol r_i (book C_R: starts with 0, ends with 1) and b_i encodes the sync
symbol s_i (book C_S: starts with 1, ends with 0).

Every trace is aligned on its own: cut at long runs of ones, keep the pieces
holding exactly one interior long run of zeros, decode the sync half, and
place the payload halves by matching the decoded sync symbols against the
sync string. Positions are then reconstructed from all traces at once and the
Reed-Solomon decoder runs with erasures where nothing was recovered.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Sequence

from ..codes.inner import Codebook, build_dense_codebook, ml_decode_single, ml_decode_traces
from ..codes.outer import InsdelCode, Pair
from ..codes.reed_solomon import ReedSolomon
from ..codes.sync import SyncString, build_sync_string, match_sync
from ..core.bitseq import BitString, identify_buffers
from ..core.channels import ChannelSpec, TraceSet, TrimMode
from ..core.errors import ConfigInvalid, DecodeFailure
from ..core.params import SchemeParams
from ..utils.seeding import derive_seed
from .single_trace import DecodeReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TraceAlignment:
    """One trace placed on the outer positions.

    ``candidates[i]`` is the payload half assigned to position i (``None`` if
    unmatched) and ``spans[i]`` its half-open location in the trace.
    """

    candidates: tuple[BitString | None, ...]
    spans: tuple[tuple[int, int] | None, ...]
    buffers_found: int
    pieces: int
    discarded: int

    @property
    def matched(self) -> int:
        return sum(1 for c in self.candidates if c is not None)


AlignedTraces = tuple[TraceAlignment, ...]


def _check_book(book: Codebook, size: int, n: int, first: int, last: int, name: str) -> None:
    if len(book) < size or book.n != n:
        raise ConfigInvalid(f"{name} must hold {size} codewords of length {n}")
    for _, c in book.items():
        if c[0] != first or c[n - 1] != last:
            raise ConfigInvalid(f"{name} codeword {c} must start with {first} and end with {last}")


@dataclass
class MultiTraceScheme:
    params: SchemeParams
    book_R: Codebook
    book_S: Codebook
    outer: InsdelCode

    def __post_init__(self) -> None:
        p = self.params
        if p.kind != "multi":
            raise ConfigInvalid("MultiTraceScheme needs multi-trace params")
        _check_book(self.book_R, p.field_size, p.n_R, 0, 1, "C_R")
        _check_book(self.book_S, p.sync_alphabet, p.n_S, 1, 0, "C_S")
        if self.outer.rs.p != p.field_size or self.outer.n != p.n_out:
            raise ConfigInvalid("outer code does not match the params")

    @classmethod
    def build(cls, params: SchemeParams) -> "MultiTraceScheme":
        sync = build_sync_string(
            params.n_out, params.eta, params.sync_alphabet, seed=derive_seed(params.seed, "sync")
        )
        book_R = build_dense_codebook(
            params.n_R, params.field_size, params.zeta, params.gamma,
            prefix_bit=0, suffix_bit=1, seed=derive_seed(params.seed, "C_R"),
        )
        book_S = build_dense_codebook(
            params.n_S, params.sync_alphabet, params.zeta, params.gamma,
            prefix_bit=1, suffix_bit=0, seed=derive_seed(params.seed, "C_S"),
        )
        rs = ReedSolomon(params.n_out, params.k_out, params.field_size)
        return cls(params, book_R, book_S, InsdelCode(rs, sync))

    @property
    def sync(self) -> SyncString:
        return self.outer.sync

    def pairs(self, msg: Sequence[int]) -> list[Pair]:
        return self.outer.encode(msg)

    def encode(self, msg: Sequence[int]) -> BitString:
        B = self.params.B
        zeros, ones = "0" * B, "1" * B
        parts = []
        for r, s in self.pairs(msg):
            parts.append(self.book_R.codeword(r).bits + zeros + self.book_S.codeword(s).bits + ones)
        return BitString("".join(parts))

    def align(self, spec: ChannelSpec, z: BitString | str) -> TraceAlignment:
        z = BitString.of(z)
        p = self.params
        outer_cut = identify_buffers(z, 1, p.one_threshold)
        sync_spec = spec.with_trim(TrimMode.TRIM01)

        halves: list[tuple[int, int]] = []
        decoded: list[int] = []
        discarded = 0
        for piece, (start, _) in zip(outer_cut.segments, outer_cut.segment_spans):
            inner_cut = identify_buffers(piece, 0, p.zero_threshold)
            if len(inner_cut.buffer_spans) != 1:
                discarded += 1
                continue
            b0, b1 = inner_cut.buffer_spans[0]
            if b0 == 0 or b1 == len(piece):
                discarded += 1
                continue
            y = piece[b1:]
            s = ml_decode_single(self.book_S, sync_spec, y) if len(y) <= p.n_S else None
            if s is None:
                discarded += 1
                continue
            halves.append((start, start + b0))
            decoded.append(s)

        matching = match_sync(self.sync, decoded)
        candidates: list[BitString | None] = [None] * p.n_out
        spans: list[tuple[int, int] | None] = [None] * p.n_out
        for i, j in matching.pairs():
            a, b = halves[j]
            candidates[i] = z[a:b]
            spans[i] = (a, b)
        if discarded:
            logger.debug("trace alignment discarded %d of %d pieces", discarded, len(outer_cut.segments))
        return TraceAlignment(
            candidates=tuple(candidates),
            spans=tuple(spans),
            buffers_found=len(outer_cut.buffer_spans),
            pieces=len(outer_cut.segments),
            discarded=discarded,
        )

    def reconstruct(self, spec: ChannelSpec, aligned: AlignedTraces) -> list[int | None]:
        payload_spec = spec.with_trim(TrimMode.TRIM10)
        n_R = self.params.n_R
        word: list[int | None] = []
        for i in range(self.params.n_out):
            column = [
                t.candidates[i] if t.candidates[i] is not None and len(t.candidates[i]) <= n_R else None
                for t in aligned
            ]
            r = ml_decode_traces(self.book_R, payload_spec, column)
            word.append(r if r is None or r < self.params.field_size else None)
        return word

    def decode_report(self, spec: ChannelSpec, traces: TraceSet | Sequence[BitString | str]) -> DecodeReport:
        t0 = time.perf_counter()
        aligned = tuple(self.align(spec, z) for z in traces)
        t1 = time.perf_counter()
        word = self.reconstruct(spec, aligned)
        t2 = time.perf_counter()
        report = DecodeReport(
            success=False,
            inner_symbols=tuple(word),
            buffers_found=sum(a.buffers_found for a in aligned),
            segments=sum(a.pieces for a in aligned),
            segments_discarded=sum(a.discarded for a in aligned),
            inner_erasures=sum(1 for w in word if w is None),
            matched=sum(a.matched for a in aligned),
        )
        try:
            result = self.outer.rs.decode_report(word)
        except DecodeFailure as exc:
            report.reason = exc.reason
            logger.info("multi-trace decode failed: %s", exc)
        else:
            report.success = True
            report.message = result.message
            report.erasures = result.erasures
            report.substitutions = len(result.corrected)
        report.timings = {
            "align": t1 - t0,
            "reconstruct": t2 - t1,
            "outer": time.perf_counter() - t2,
        }
        return report

    def decode(self, spec: ChannelSpec, traces: TraceSet | Sequence[BitString | str]) -> list[int]:
        report = self.decode_report(spec, traces)
        if not report.success:
            raise DecodeFailure(report.reason or "outer-decode-failure")
        return list(report.message)


def mt_encode(scheme: MultiTraceScheme, msg: Sequence[int]) -> BitString:
    return scheme.encode(msg)


def mt_align(scheme: MultiTraceScheme, spec: ChannelSpec, z: BitString | str) -> TraceAlignment:
    return scheme.align(spec, z)


def mt_decode(
    scheme: MultiTraceScheme, spec: ChannelSpec, traces: TraceSet | Sequence[BitString | str]
) -> list[int]:
    return scheme.decode(spec, traces)


__all__ = [
    "TraceAlignment",
    "AlignedTraces",
    "MultiTraceScheme",
    "mt_encode",
    "mt_align",
    "mt_decode",
]
