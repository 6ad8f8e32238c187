"""
Tests for the command line: sub-commands, exit codes and output streams.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
"""
import re

import pytest

from core.utility.decorators import error_report
from cli import routing
from main import main

SMALL_CONFIG = """\
name = cli-heart
dimension = 2
shape = heart2d
point_count = 24
domain_min = -2, -2
domain_max = 2, 2
lattice_count = 20
delta_s = 0.3
dt = 0.01
iterations = 3
resolution = 48
"""


def test_list_presets(capsys):
    assert main(["list-presets"]) == 0
    names = capsys.readouterr().out.split()
    assert "heart2d-full" in names and "teapot" in names


@pytest.mark.parametrize(
    "argv", [["--help"], ["reconstruct", "--help"], ["shapes", "--help"], ["contour", "--help"]]
)
def test_help_exits_zero(argv, capsys):
    assert main(argv) == 0
    assert "usage" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["shapes", "--name", "heart2d"],
        ["shapes", "--name", "heart2d", "--count", "many", "--out", "x.txt"],
        ["contour", "--field", "f.txt", "--out", "c.csv", "--resolution", "0"],
    ],
)
def test_usage_errors_exit_one(argv, capsys):
    assert main(argv) == 1
    captured = capsys.readouterr()
    assert "usage" in captured.err
    assert captured.out == ""


def test_shapes_writes_points(tmp_path, capsys):
    out = tmp_path / "heart.txt"
    assert main(["shapes", "--name", "heart2d", "--count", "24", "--out", str(out)]) == 0
    lines = [line for line in out.read_text().splitlines() if not line.startswith("#")]
    assert len(lines) == 24
    assert "wrote 24 points" in capsys.readouterr().out


def test_shapes_unknown_name_is_a_usage_error(tmp_path, capsys):
    argv = ["shapes", "--name", "torus", "--count", "10", "--out", str(tmp_path / "t.txt")]
    assert main(argv) == 1
    assert "error:" in capsys.readouterr().err


def test_preset_writes_under_its_name(tmp_path, monkeypatch, capsys):
    seen = {}

    def fake_run(cfg, output_dir=None):
        seen["out"] = output_dir
        raise RuntimeError("stop")

    monkeypatch.setattr(routing, "run_experiment", fake_run)
    assert main(["preset", "--name", "heart2d-full", "--out", str(tmp_path)]) == 2
    assert seen["out"] == tmp_path / "heart2d-full"


def test_preset_help_names_the_run_directory(capsys):
    assert main(["preset", "--help"]) == 0
    assert "DIR/<name>/" in capsys.readouterr().out


def test_unknown_preset_exits_one(capsys):
    assert main(["preset", "--name", "bunny"]) == 1
    assert "unknown preset" in capsys.readouterr().err


def test_bad_config_exits_one(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("name = x\nwibble = 3\n")
    assert main(["reconstruct", "--config", str(path)]) == 1


def test_runtime_failure_exits_two(tmp_path, capsys):
    path = tmp_path / "missing-input.txt"
    missing = f"input_path = {tmp_path / 'nope.txt'}\n"
    path.write_text(SMALL_CONFIG.replace("shape = heart2d\npoint_count = 24\n", missing))
    assert main(["reconstruct", "--config", str(path), "--out", str(tmp_path / "out")]) == 2
    lines = capsys.readouterr().err.splitlines()
    assert lines[0].startswith("error: stage 'data' failed: PointFileError")
    assert re.match(r"  at \w+\.py:\d+$", lines[1])


def test_reconstruct_then_contour(tmp_path, capsys):
    config = tmp_path / "exp.txt"
    config.write_text(SMALL_CONFIG)
    out = tmp_path / "run"
    assert main(["reconstruct", "--config", str(config), "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "iterations: 3" in stdout
    assert (out / "geometry.csv").exists()

    curve = tmp_path / "again.csv"
    argv = ["contour", "--field", str(out / "field.txt"), "--out", str(curve), "--resolution", "48"]
    assert main(argv) == 0
    assert curve.read_text() == (out / "geometry.csv").read_text()


def test_error_report_outside_a_stage():
    def failing_handler():
        raise ValueError("bad input")

    try:
        failing_handler()
    except ValueError as e:
        report = error_report(e)
    assert report.stage is None
    assert report.exit_code == 2
    assert report.location.startswith("test_cli.py:")
    assert report.render()[0] == "error: ValueError: bad input"
