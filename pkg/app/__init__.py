"""Runlength-dependent deletion channel workbench.

Subpackages:
 - core: bit strings, channel models, information measures, bounds, parameters
 - codes: inner codebooks, greedy threshold codes, synchronization strings, outer codes
 - services: concatenated schemes, trial runner, sweeps, claim checks
"""

__all__: list[str] = []
