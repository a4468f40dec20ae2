"""Shared utilities: logging setup and seed derivation."""

__all__ = []
