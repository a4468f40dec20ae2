"""Logging setup for command-line runs.

Library modules only create ``logging.getLogger(__name__)`` loggers; handlers are
attached here, once, by the entry point.
"""

from __future__ import annotations

import logging
import os

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def level_from_env(default: int = logging.WARNING) -> int:
    raw = os.getenv("RLDC_LOG_LEVEL")
    if not raw:
        return default
    if raw.isdigit():
        return int(raw)
    level = logging.getLevelName(raw.upper())
    return level if isinstance(level, int) else default


def configure_logging(verbosity: int = 0) -> int:
    """Attach a stderr handler to the ``app`` logger and return the level used.

    ``verbosity`` counts ``-v`` flags: 1 -> INFO, 2+ -> DEBUG. Without flags the
    ``RLDC_LOG_LEVEL`` environment variable decides.
    """
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = level_from_env()
    root = logging.getLogger("app")
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    root.setLevel(level)
    return level


__all__ = ["configure_logging", "level_from_env"]
