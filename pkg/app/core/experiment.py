"""Experiment configuration: channel, scheme parameters, trial budget and seed.

Stored as indented JSON next to the outputs it produced, so every run can be
replayed from its config file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .channels import ChannelSpec
from .errors import ConfigInvalid
from .params import SchemeParams

CODEBOOK_KEYS = ("inner", "C_R", "C_S", "sync")


@dataclass
class ExperimentConfig:
    channel: ChannelSpec
    scheme: SchemeParams
    trials: int = 100
    seed: int = 0
    output: str | None = None
    threads: int | None = None
    # optional pre-built artifacts; anything missing is drawn from scheme.seed
    codebooks: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.trials < 0:
            raise ConfigInvalid("trials must be >= 0")
        if self.threads is not None and self.threads < 1:
            raise ConfigInvalid("threads must be >= 1")
        unknown = set(self.codebooks) - set(CODEBOOK_KEYS)
        if unknown:
            raise ConfigInvalid(f"unknown codebook keys: {sorted(unknown)}")
        missing = [p for p in self.codebooks.values() if not Path(p).exists()]
        if missing:
            raise ConfigInvalid(f"codebook files not found: {missing}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "channel": self.channel.to_dict(),
            "scheme": self.scheme.to_dict(),
            "trials": self.trials,
            "seed": self.seed,
            "output": self.output,
            "threads": self.threads,
            "codebooks": dict(self.codebooks),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        try:
            channel = ChannelSpec.from_dict(data["channel"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigInvalid(f"bad channel section: {exc}") from exc
        if "scheme" not in data:
            raise ConfigInvalid("missing scheme section")
        return cls(
            channel=channel,
            scheme=SchemeParams.from_dict(data["scheme"]),
            trials=int(data.get("trials", 100)),
            seed=int(data.get("seed", 0)),
            output=data.get("output"),
            threads=data.get("threads"),
            codebooks=dict(data.get("codebooks", {})),
        )

    def save(self, path: str | Path) -> None:
        p = Path(path)
        p.write_text(json.dumps(self.to_dict(), indent=2))

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        p = Path(path)
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigInvalid(f"{p}: {exc}") from exc
        return cls.from_dict(data)


__all__ = ["ExperimentConfig", "CODEBOOK_KEYS"]
