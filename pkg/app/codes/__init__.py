"""Inner codebooks, sync strings and outer codes."""

__all__ = []
