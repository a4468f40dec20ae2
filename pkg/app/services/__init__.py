"""Services built on the codes: single/multi-trace schemes, trials, bound sweeps, claim checks."""

__all__ = []
