"""Single-trace concatenated scheme with zero buffers.

Encoding: the message is Reed-Solomon encoded, every outer symbol is paired
with its sync symbol, each pair picks one inner codeword (which starts and ends
with 1) and consecutive inner codewords are separated by ``0^B``.

Decoding:
1. strip leading/trailing zeros, cut at zero runs of length >= threshold;
2. ML-decode every segment against the inner book under 00-trimming
   (segments no codeword explains are dropped);
3. hand the recovered (payload, sync) pairs to the insdel outer decoder.
"""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

from ..codes.inner import Codebook, build_dense_codebook, ml_decode_single
from ..codes.outer import InsdelCode, Pair
from ..codes.reed_solomon import ReedSolomon
from ..codes.sync import SyncString, build_sync_string
from ..core.bitseq import BitString, identify_buffers, strip_symbol
from ..core.channels import ChannelSpec, TrimMode
from ..core.errors import ConfigInvalid, DecodeFailure
from ..core.params import SchemeParams
from ..utils.seeding import derive_seed

logger = logging.getLogger(__name__)


@dataclass
class DecodeReport:
    """What a scheme decoder saw and did, successful or not."""

    success: bool
    message: tuple[int, ...] | None = None
    inner_symbols: tuple[int | None, ...] = ()
    pairs: tuple[Pair, ...] = ()
    buffers_found: int = 0
    segments: int = 0
    segments_discarded: int = 0
    inner_erasures: int = 0
    matched: int = 0
    erasures: int = 0
    substitutions: int = 0
    reason: str = ""
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["message"] = list(self.message) if self.message is not None else None
        data["inner_symbols"] = list(self.inner_symbols)
        data["pairs"] = [list(p) for p in self.pairs]
        return data


@dataclass
class SingleTraceScheme:
    params: SchemeParams
    inner: Codebook
    outer: InsdelCode

    def __post_init__(self) -> None:
        p = self.params
        if p.kind != "single":
            raise ConfigInvalid("SingleTraceScheme needs single-trace params")
        if len(self.inner) < p.inner_size or self.inner.n != p.m:
            raise ConfigInvalid(
                f"inner book must hold {p.inner_size} codewords of length {p.m}"
            )
        for _, c in self.inner.items():
            if c[0] != 1 or c[len(c) - 1] != 1:
                raise ConfigInvalid(f"inner codeword {c} must start and end with 1")
        if self.outer.rs.p != p.field_size or self.outer.n != p.n_out:
            raise ConfigInvalid("outer code does not match the params")

    @classmethod
    def build(cls, params: SchemeParams) -> "SingleTraceScheme":
        """Draw the inner book and the sync string from ``params.seed``."""
        sync = build_sync_string(
            params.n_out, params.eta, params.sync_alphabet, seed=derive_seed(params.seed, "sync")
        )
        inner = build_dense_codebook(
            params.m,
            params.inner_size,
            params.zeta,
            params.gamma,
            prefix_bit=1,
            suffix_bit=1,
            seed=derive_seed(params.seed, "inner"),
        )
        rs = ReedSolomon(params.n_out, params.k_out, params.field_size)
        return cls(params, inner, InsdelCode(rs, sync))

    @property
    def sync(self) -> SyncString:
        return self.outer.sync

    def pair_symbol(self, pair: Pair) -> int:
        payload, s = pair
        return payload * self.params.sync_alphabet + s

    def split_symbol(self, symbol: int) -> Pair:
        return divmod(symbol, self.params.sync_alphabet)

    def pairs(self, msg: Sequence[int]) -> list[Pair]:
        return self.outer.encode(msg)

    def encode(self, msg: Sequence[int]) -> BitString:
        blocks = [self.inner.codeword(self.pair_symbol(pr)).bits for pr in self.pairs(msg)]
        return BitString(("0" * self.params.B).join(blocks))

    def decode_report(self, spec: ChannelSpec, y: BitString | str) -> DecodeReport:
        t0 = time.perf_counter()
        body = strip_symbol(y, 0, 0)
        seg = identify_buffers(body, 0, self.params.zero_threshold)
        t1 = time.perf_counter()

        trimmed = spec.with_trim(TrimMode.TRIM00)
        symbols: list[int | None] = []
        for piece in seg.segments:
            if len(piece) > self.inner.n:
                symbols.append(None)
                continue
            sym = ml_decode_single(self.inner, trimmed, piece)
            symbols.append(sym if sym is None or sym < self.params.inner_size else None)
        pairs = tuple(self.split_symbol(s) for s in symbols if s is not None)
        t2 = time.perf_counter()

        report = DecodeReport(
            success=False,
            inner_symbols=tuple(symbols),
            pairs=pairs,
            buffers_found=len(seg.buffer_spans),
            segments=len(seg.segments),
            inner_erasures=sum(1 for s in symbols if s is None),
        )
        try:
            outer = self.outer.decode_report(list(pairs))
        except DecodeFailure as exc:
            report.reason = exc.reason
            logger.info("single-trace decode failed: %s", exc)
        else:
            report.success = True
            report.message = outer.message
            report.matched = outer.matched
            report.erasures = outer.erasures
            report.substitutions = outer.substitutions
        report.timings = {
            "segment": t1 - t0,
            "inner": t2 - t1,
            "outer": time.perf_counter() - t2,
        }
        return report

    def decode(self, spec: ChannelSpec, y: BitString | str) -> list[int]:
        report = self.decode_report(spec, y)
        if not report.success:
            raise DecodeFailure(report.reason or "outer-decode-failure")
        return list(report.message)


def st_encode(scheme: SingleTraceScheme, msg: Sequence[int]) -> BitString:
    return scheme.encode(msg)


def st_decode(scheme: SingleTraceScheme, spec: ChannelSpec, y: BitString | str) -> list[int]:
    return scheme.decode(spec, y)


__all__ = [
    "DecodeReport",
    "SingleTraceScheme",
    "st_encode",
    "st_decode",
]
