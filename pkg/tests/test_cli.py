import json
import logging

import pytest

from app.codes.inner import Codebook
from app.core.channels import make_threshold_channel
from app.core.experiment import ExperimentConfig
from app.core.params import SchemeParams
from app.main import cli_dispatch
from app.utils.logs import configure_logging, level_from_env


@pytest.fixture
def config_file(tmp_path):
    cfg = ExperimentConfig(
        channel=make_threshold_channel(2, 0.0),
        scheme=SchemeParams.single_trace(m=10, n_out=8, k_out=4, field_size=11, d_M=0.0, nu=1.0),
        trials=4,
        seed=5,
        threads=1,
    )
    path = tmp_path / "cfg.json"
    cfg.save(path)
    return path


def test_bound_dg(capsys):
    assert cli_dispatch(["bound", "dg", "--tau", "2", "--d", "0.2"]) == 0
    assert capsys.readouterr().out.strip() == "0.39016"


def test_bound_errors_and_usage(capsys):
    assert cli_dispatch(["bound", "dg", "--tau", "2", "--d", "0.9"]) == 2
    assert cli_dispatch([]) == 2
    assert cli_dispatch(["bound", "nope"]) == 2
    capsys.readouterr()


def test_bound_greedy(capsys):
    assert cli_dispatch(["bound", "greedy", "--tau", "2", "--d", "0", "--M-max", "6", "--beta-step", "0.05"]) == 0
    out = capsys.readouterr().out.split()
    assert out[1] == "M=2"
    assert float(out[0]) == pytest.approx(0.694, abs=0.01)


def test_bound_sweep(tmp_path, capsys):
    out = tmp_path / "tau3.csv"
    assert cli_dispatch(["bound", "sweep", "--tau", "3", "--out", str(out), "--d-grid", "0.1,0.5", "--methods", "dg,baseline"]) == 0
    assert len(out.read_text().splitlines()) == 3


def test_channel_oracle(capsys):
    assert cli_dispatch(["channel", "oracle", "--tau", "2", "--d", "0.5", "--input", "011"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["01\t0.5", "0\t0.25", "011\t0.25"]


def test_channel_sample(capsys):
    argv = ["channel", "sample", "--d-table", "0.1,0.3", "--mu", "0.3", "--input", "0011101", "--count", "5", "--seed", "4"]
    assert cli_dispatch(argv) == 0
    first = capsys.readouterr().out.splitlines()
    assert len(first) == 5
    assert cli_dispatch(argv) == 0
    assert capsys.readouterr().out.splitlines() == first
    assert cli_dispatch(["channel", "sample", "--d-table", "0.1", "--input", "01"]) == 2


def test_code_builders(tmp_path, capsys):
    greedy = tmp_path / "greedy.txt"
    argv = ["code", "build-greedy", "--N", "3", "--tau", "2", "--beta", "1/3,1/3", "--delta", "1/3", "--M", "3", "--out", str(greedy)]
    assert cli_dispatch(argv) == 0
    assert [c.bits for _, c in Codebook.load(greedy).items()] == ["001", "110"]
    blown = Codebook.load(tmp_path / "greedy.M3.txt")
    assert blown.codeword(0).bits == "0001"

    dense = tmp_path / "dense.txt"
    assert cli_dispatch(["code", "build-dense", "--n", "10", "--count", "8", "--prefix-bit", "1", "--out", str(dense)]) == 0
    assert len(Codebook.load(dense)) == 8
    assert cli_dispatch(["code", "build-dense", "--n", "8", "--count", "300", "--gamma", "0.49", "--out", str(dense)]) == 1


def test_scheme_encode_decode(config_file, tmp_path, capsys):
    trace = tmp_path / "trace.txt"
    assert cli_dispatch(["scheme", "encode", "--config", str(config_file), "--msg", "1,2,3,4", "--out", str(trace), "--transmit"]) == 0
    assert cli_dispatch(["scheme", "decode", "--config", str(config_file), "--input", str(trace)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["success"] and report["message"] == [1, 2, 3, 4]

    trace.write_text("1111\n")
    assert cli_dispatch(["scheme", "decode", "--config", str(config_file), "--input", str(trace)]) == 1


def test_scheme_trial(config_file, capsys):
    assert cli_dispatch(["scheme", "trial", "--config", str(config_file), "--trials", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["trials"] == 3 and report["failures"] == 0 and report["seed"] == 5


def test_bad_config_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert cli_dispatch(["scheme", "trial", "--config", str(bad)]) == 2
    assert "error" in capsys.readouterr().err


def test_claims_check(capsys):
    assert cli_dispatch(["claims", "check", "--only", "rll-count"]) == 0
    assert capsys.readouterr().out.startswith("PASS rll-count")


def test_logging_levels(monkeypatch):
    monkeypatch.setenv("RLDC_LOG_LEVEL", "debug")
    assert level_from_env() == logging.DEBUG
    monkeypatch.setenv("RLDC_LOG_LEVEL", "bogus")
    assert level_from_env() == logging.WARNING
    assert configure_logging(1) == logging.INFO
    assert configure_logging(3) == logging.DEBUG
    assert len(logging.getLogger("app").handlers) == 1
