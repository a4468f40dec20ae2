import csv

import pytest

from app.services.export import HEADER, SweepSettings, default_grid, sweep_bounds


def test_default_grid():
    grid = default_grid()
    assert len(grid) == 100
    assert grid[0] == 0.0 and grid[-1] == pytest.approx(0.99)


def test_sweep_writes_csv(tmp_path):
    out = tmp_path / "curves" / "tau2.csv"
    progress = []
    rows = sweep_bounds(
        2,
        [0.0, 0.2, 0.9],
        out,
        SweepSettings(methods=("dg", "greedy", "baseline"), M_max=8, beta_step=0.05),
        progress=progress.append,
    )
    assert len(rows) == 3
    assert progress[-1] == pytest.approx(1.0)

    with out.open() as fh:
        table = list(csv.reader(fh))
    assert tuple(table[0]) == HEADER
    d0, d2, d9 = table[1:]
    assert d2[0] == "0.2"
    assert float(d2[1]) == pytest.approx(0.39016, abs=1e-5)
    assert d9[1] == ""  # dg hypothesis fails
    assert float(d0[2]) >= float(d2[2]) >= float(d9[2])
    assert d0[3] == "0.000000"
    assert int(d0[4]) == 2
    assert len(d0[5].split(";")) == 2


def test_sweep_without_greedy_leaves_cells_empty(tmp_path):
    out = tmp_path / "dg.csv"
    sweep_bounds(3, [0.1], out, SweepSettings(methods=("dg",)))
    _, row = list(csv.reader(out.open()))
    assert row[2] == row[3] == row[4] == row[5] == ""
