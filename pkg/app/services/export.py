"""Bound sweeps written as CSV.

One file per tau, header ``d,rate_dg,rate_greedy,rate_baseline,best_M,best_beta``.
Missing values (a method not requested, or the dg hypothesis failing) are left
empty; ``best_beta`` joins the beta entries with ``;``.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from ..core.bounds import METHODS, CurveRow, emit_curve

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[float], None]  # 0.0 - 1.0

HEADER = ("d", "rate_dg", "rate_greedy", "rate_baseline", "best_M", "best_beta")


def default_grid() -> np.ndarray:
    """d = 0.00, 0.01, ..., 0.99."""
    return np.round(np.arange(100) / 100.0, 2)


@dataclass
class SweepSettings:
    methods: Sequence[str] = METHODS
    M_max: int | None = None
    beta_step: float = 0.01
    precision: int = 6


def _fmt(value: float | None, precision: int) -> str:
    return "" if value is None else f"{value:.{precision}f}"


def format_row(row: CurveRow, precision: int = 6) -> list[str]:
    return [
        f"{row.d:g}",
        _fmt(row.rate_dg, precision),
        _fmt(row.rate_greedy, precision),
        _fmt(row.rate_baseline, precision),
        "" if row.best_M is None else str(row.best_M),
        "" if row.best_beta is None else ";".join(f"{b:g}" for b in row.best_beta),
    ]


def sweep_bounds(
    tau: int,
    d_grid: Iterable[float] | None,
    out_path: str | Path,
    settings: SweepSettings | None = None,
    progress: Optional[ProgressCallback] = None,
) -> list[CurveRow]:
    """Evaluate the bound curves over ``d_grid`` and write them to ``out_path``.

    Parameters
    ----------
    tau: Channel threshold.
    d_grid: Deletion probabilities; ``None`` means `default_grid`.
    out_path: Destination CSV file; parent directories are created.
    settings: Methods and search limits.
    progress: Optional callback receiving progress fraction.
    """
    settings = settings or SweepSettings()
    grid = list(default_grid() if d_grid is None else d_grid)
    rows: list[CurveRow] = []
    for i, d in enumerate(grid):
        rows.extend(
            emit_curve(tau, [float(d)], settings.methods, settings.M_max, settings.beta_step)
        )
        if progress:
            progress((i + 1) / len(grid))

    p = Path(out_path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        for row in rows:
            writer.writerow(format_row(row, settings.precision))
    logger.info("wrote %d rows for tau=%d to %s", len(rows), tau, p)
    return rows


__all__ = ["SweepSettings", "HEADER", "default_grid", "format_row", "sweep_bounds"]
