"""Error kinds raised across the workbench.

Everything derives from `WorkbenchError` so callers (the CLI in particular) can
catch the whole family in one place. Input problems also subclass `ValueError`,
algorithmic give-ups subclass `RuntimeError`.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for every error raised by this package."""


class InstanceTooLarge(WorkbenchError, ValueError):
    """An exhaustive routine was asked for more than it can enumerate."""


class MonotonicityViolation(WorkbenchError, ValueError):
    pass


class SaturationViolation(WorkbenchError, ValueError):
    pass


class HypothesisViolated(WorkbenchError, ValueError):
    pass


class ConstraintViolated(WorkbenchError, ValueError):
    pass


class NotNormalized(WorkbenchError, ValueError):
    pass


class ZeroProbability(WorkbenchError, ValueError):
    pass


class NonConvergence(WorkbenchError, RuntimeError):
    pass


class FeasibilityExhausted(WorkbenchError, RuntimeError):
    pass


class NonIntegralComposition(WorkbenchError, ValueError):
    pass


class EmptyFeasibleGrid(WorkbenchError, ValueError):
    pass


class ConstructionFailed(WorkbenchError, RuntimeError):
    pass


class SymbolOutOfAlphabet(WorkbenchError, ValueError):
    pass


class DecodeFailure(WorkbenchError):
    """Decoder gave up; `reason` is a short machine-readable tag."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class ConfigInvalid(WorkbenchError, ValueError):
    pass


__all__ = [
    "WorkbenchError",
    "InstanceTooLarge",
    "MonotonicityViolation",
    "SaturationViolation",
    "HypothesisViolated",
    "ConstraintViolated",
    "NotNormalized",
    "ZeroProbability",
    "NonConvergence",
    "FeasibilityExhausted",
    "NonIntegralComposition",
    "EmptyFeasibleGrid",
    "ConstructionFailed",
    "SymbolOutOfAlphabet",
    "DecodeFailure",
    "ConfigInvalid",
]
