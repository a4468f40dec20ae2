"""Scheme parameters, rate formulas and the asymptotic parameter defaults.

`SchemeParams` is a plain JSON-serializable record in the same style as the
other config models: ``to_dict`` / ``from_dict`` / ``save`` / ``load``.

Single-trace layout: ``C(s_1) 0^B C(s_2) ... 0^B C(s_n)`` with inner length m.
Multi-trace layout: ``a_1 0^B b_1 1^B ... a_n 0^B b_n 1^B`` with payload blocks
of length n_R and sync blocks of length n_S.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from .channels import ORACLE_LIMIT
from .errors import ConfigInvalid

KINDS = ("single", "multi")


@dataclass
class SchemeParams:
    kind: str
    n_out: int
    k_out: int
    field_size: int
    sync_alphabet: int
    eta: float
    d_M: float
    nu: float
    B: int
    zero_threshold: int
    one_threshold: int = 0
    m: int = 0
    n_R: int = 0
    n_S: int = 0
    T: int = 1
    zeta: float = 0.5
    gamma: float = 0.1
    epsilon: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigInvalid(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not (1 <= self.k_out <= self.n_out <= self.field_size):
            raise ConfigInvalid("need 1 <= k_out <= n_out <= field_size")
        if self.sync_alphabet < 4:
            raise ConfigInvalid("sync_alphabet must be >= 4")
        if not (0.0 <= self.d_M < 1.0):
            raise ConfigInvalid("d_M must lie in [0, 1)")
        if self.B < 0 or self.zero_threshold < 1:
            raise ConfigInvalid("B must be >= 0 and zero_threshold >= 1")
        if self.kind == "single" and not (2 <= self.m <= ORACLE_LIMIT):
            raise ConfigInvalid(f"single-trace scheme needs 2 <= m <= {ORACLE_LIMIT}")
        if self.kind == "multi":
            if not (2 <= self.n_R <= ORACLE_LIMIT and 2 <= self.n_S <= ORACLE_LIMIT):
                raise ConfigInvalid(f"multi-trace scheme needs 2 <= n_R, n_S <= {ORACLE_LIMIT}")
            if self.one_threshold < 1:
                raise ConfigInvalid("multi-trace scheme needs one_threshold >= 1")
            if self.T < 1:
                raise ConfigInvalid("T must be >= 1")

    # -- constructors ---------------------------------------------------------
    @classmethod
    def single_trace(
        cls,
        m: int,
        n_out: int,
        k_out: int,
        field_size: int,
        d_M: float,
        nu: float,
        sync_alphabet: int = 4,
        eta: float = 0.95,
        zeta: float = 0.5,
        gamma: float = 0.1,
        seed: int = 0,
    ) -> "SchemeParams":
        """B = ceil(nu m / (1 - d_M)); zero runs of length >= nu m / 2 are buffers."""
        return cls(
            kind="single",
            n_out=n_out,
            k_out=k_out,
            field_size=field_size,
            sync_alphabet=sync_alphabet,
            eta=eta,
            d_M=d_M,
            nu=nu,
            B=math.ceil(nu * m / (1.0 - d_M) - 1e-9),
            zero_threshold=max(1, math.ceil(nu * m / 2.0 - 1e-9)),
            m=m,
            zeta=zeta,
            gamma=gamma,
            seed=seed,
        )

    @classmethod
    def multi_trace(
        cls,
        n_R: int,
        n_S: int,
        n_out: int,
        k_out: int,
        field_size: int,
        d_M: float,
        nu: float,
        T: int = 1,
        B: int | None = None,
        sync_alphabet: int = 4,
        eta: float = 0.95,
        zeta: float = 0.5,
        gamma: float = 0.1,
        seed: int = 0,
    ) -> "SchemeParams":
        """B defaults to nu n_R / (16 (1 - d_M)); runs longer than (1 - d_M) B / 2 are buffers."""
        if B is None:
            B = max(1, math.ceil(nu * n_R / (16.0 * (1.0 - d_M)) - 1e-9))
        threshold = math.floor((1.0 - d_M) * B / 2.0) + 1
        return cls(
            kind="multi",
            n_out=n_out,
            k_out=k_out,
            field_size=field_size,
            sync_alphabet=sync_alphabet,
            eta=eta,
            d_M=d_M,
            nu=nu,
            B=B,
            zero_threshold=threshold,
            one_threshold=threshold,
            n_R=n_R,
            n_S=n_S,
            T=T,
            zeta=zeta,
            gamma=gamma,
            seed=seed,
        )

    # -- derived quantities ---------------------------------------------------
    @property
    def delta_out(self) -> float:
        return (self.n_out - self.k_out + 1) / self.n_out

    @property
    def inner_size(self) -> int:
        """Codewords needed in the payload-carrying inner code."""
        if self.kind == "single":
            return self.field_size * self.sync_alphabet
        return self.field_size

    @property
    def inner_length(self) -> int:
        return self.m if self.kind == "single" else self.n_R

    @property
    def inner_rate(self) -> float:
        return math.log2(self.inner_size) / self.inner_length

    @property
    def outer_rate(self) -> float:
        """Message bits per inner-symbol bit; sync overhead included for single-trace."""
        return self.k_out * math.log2(self.field_size) / (self.n_out * math.log2(self.inner_size))

    @property
    def message_bits(self) -> float:
        return self.k_out * math.log2(self.field_size)

    @property
    def codeword_length(self) -> int:
        if self.kind == "single":
            return self.m * self.n_out + (self.n_out - 1) * self.B
        return (self.n_R + 2 * self.B + self.n_S) * self.n_out

    # -- persistence ----------------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SchemeParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigInvalid(f"unknown scheme fields: {sorted(unknown)}")
        try:
            return cls(**dict(data))
        except TypeError as exc:
            raise ConfigInvalid(str(exc)) from exc

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))

    @classmethod
    def load(cls, path: str | Path) -> "SchemeParams":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"{path}: {exc}") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class SchemeDefaults:
    """Parameter chain of the multi-trace construction; meaningful only asymptotically."""

    epsilon: float
    nu: float
    zeta: float
    xi: float
    eps_R: float
    eps_S: float
    eta: float
    delta_out: float
    outer_rate: float
    B: float
    n_S: float


def table1_defaults(epsilon: float, mu: float, T: int, d_M: float, n_R: int) -> SchemeDefaults:
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    nu = epsilon * mu
    return SchemeDefaults(
        epsilon=epsilon,
        nu=nu,
        zeta=(1.0 - d_M) * nu / 4.0,
        xi=epsilon**4 / T,
        eps_R=epsilon**4 / T,
        eps_S=epsilon**4 / T,
        eta=epsilon**8 / T,
        delta_out=epsilon**3 / 40.0,
        outer_rate=1.0 - epsilon / 4.0,
        B=nu * n_R / (16.0 * (1.0 - d_M)),
        n_S=math.log2(n_R),
    )


def single_trace_rate(R_out: float, R_in: float, m: int, n: int, B: int) -> float:
    return R_out * R_in * m * n / (m * n + (n - 1) * B)


def multi_trace_rate(R_out: float, R_R: float, n_R: int, B: int, n_S: int) -> float:
    return R_out * R_R * n_R / (n_R + 2 * B + n_S)


def scheme_rate(params: SchemeParams, which: str | None = None) -> float:
    """Message bits over codeword length, from the rate formulas."""
    which = which or params.kind
    if which != params.kind:
        raise ConfigInvalid(f"params describe a {params.kind}-trace scheme, not {which}")
    if which == "single":
        return single_trace_rate(
            params.outer_rate, params.inner_rate, params.m, params.n_out, params.B
        )
    return multi_trace_rate(params.outer_rate, params.inner_rate, params.n_R, params.B, params.n_S)


__all__ = [
    "SchemeParams",
    "SchemeDefaults",
    "table1_defaults",
    "single_trace_rate",
    "multi_trace_rate",
    "scheme_rate",
]
