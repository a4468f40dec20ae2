"""Core domain models: bit strings, channels, information measures, bounds and parameters."""

__all__ = []
