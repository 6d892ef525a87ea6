#!/usr/bin/env python3
"""
Command-line tests driven through click's CliRunner.
"""

import sys
import os

# Add the project root to the Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import json

import pytest
from click.testing import CliRunner

from app import cli
from models.linear_program import LpOutcome, LpStatus
from services import lp_solver
from utils.exceptions import SolverError


@pytest.fixture
def runner():
    return CliRunner()


def test_gap_text(runner):
    result = runner.invoke(cli, ["gap", "--v", "1,2,3"])
    assert result.exit_code == 0
    assert "gap = 1/4 at t = 1/4" in result.output
    assert "q = 4" in result.output

    result = runner.invoke(cli, ["gap", "--v", "1,3,5"])
    assert result.exit_code == 0
    assert "gap = 1/2" in result.output


def test_gap_json(runner):
    result = runner.invoke(cli, ["--json", "gap", "--v", "1;2;3;5"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["gap"] == "1/4"
    assert payload["speeds"] == [1, 2, 3, 5]
    assert payload["tight"] is False


@pytest.mark.parametrize("speeds", ["3,1", "1,x", "", "0,2", "1,1"])
def test_gap_rejects_bad_speeds(runner, speeds):
    result = runner.invoke(cli, ["gap", "--v", speeds])
    assert result.exit_code == 2


def test_bound_upper(runner, tmp_path):
    dump = tmp_path / "poly.json"
    result = runner.invoke(cli, ["bound", "upper", "--v", "1,2,3", "--degree", "3", "--samples", "129", "--json", "--dump-poly", str(dump)])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["status"] == "certified"
    assert abs(payload["certified_value"] - 0.25) < 1e-6
    poly = json.loads(dump.read_text(encoding="utf-8"))
    assert len(poly["coefficients"]) == 4


def test_bound_lower_q(runner):
    result = runner.invoke(cli, ["--json", "bound", "lower-q", "--v", "1,2,3", "--q", "4", "--degree", "3", "--samples", "65"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["assumes_v_q"] is True
    assert payload["in_v_q"] is True
    assert abs(payload["certified_value"] - 0.25) < 1e-6


def test_bound_text_output(runner):
    result = runner.invoke(cli, ["bound", "upper", "--v", "1,3,5", "--degree", "5"])
    assert result.exit_code == 0
    assert "certified value" in result.output
    assert "lambda_plus(1,3,5)" in result.output


def test_bound_infeasible_program_exits_with_solver_code(runner, monkeypatch):
    monkeypatch.setattr(lp_solver, "solve", lambda lp: LpOutcome(LpStatus.INFEASIBLE))
    result = runner.invoke(cli, ["bound", "lower", "--v", "1,2", "--degree", "2", "--samples", "4"])
    assert result.exit_code == 3
    assert "infeasible" in result.output


def test_bound_solver_failure_exits_with_solver_code(runner, monkeypatch):
    def broken(lp):
        raise SolverError("iteration cap reached")

    monkeypatch.setattr(lp_solver, "solve", broken)
    result = runner.invoke(cli, ["bound", "upper", "--v", "1,2,3"])
    assert result.exit_code == 3
    assert "iteration cap reached" in result.output


@pytest.mark.parametrize("args", [
    ["bound", "upper", "--v", "1,2,3", "--degree", "2"],
    ["bound", "lower", "--v", "3"],
    ["bound", "lower-q", "--v", "1,2,3", "--q", "2"],
    ["bound", "sideways", "--v", "1,2"],
])
def test_bound_input_errors(runner, args):
    assert runner.invoke(cli, args).exit_code == 2


def test_equality_command(runner):
    result = runner.invoke(cli, ["equality", "--v", "1,2,3,5"])
    assert result.exit_code == 0
    assert "FejerDilate(a=1, m=4)" in result.output

    result = runner.invoke(cli, ["--json", "equality", "--v", "1,2,3"])
    payload = json.loads(result.output)
    assert payload["upper"]["kind"] == "FejerDilate"
    assert payload["lower_q"]["kind"] == "QuotientKernel"
    assert payload["slackness"]["holds"] is True


def test_scan_and_figure(runner, tmp_path):
    first = tmp_path / "scan1.csv"
    second = tmp_path / "scan2.csv"
    args = ["scan", "--n", "3", "--max-speed", "4", "--exhaustive"]
    assert runner.invoke(cli, args + ["--out", str(first)]).exit_code == 0
    assert runner.invoke(cli, args + ["--out", str(second)]).exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    assert len(first.read_text(encoding="utf-8").strip().splitlines()) == 1 + 6

    svg = tmp_path / "fig.svg"
    result = runner.invoke(cli, ["figure", "--input", str(first), "--out", str(svg)])
    assert result.exit_code == 0
    assert svg.exists()


def test_scan_json_output(runner, tmp_path):
    out = tmp_path / "scan.json"
    result = runner.invoke(cli, ["scan", "--n", "2", "--max-speed", "3", "--count", "2", "--seed", "7", "--out", str(out)])
    assert result.exit_code == 0
    rows = json.loads(out.read_text(encoding="utf-8"))
    assert len(rows) == 2
    assert rows[0]["status_minus"] == "skipped"


def test_scan_rejects_bad_ranges(runner, tmp_path):
    out = str(tmp_path / "x.csv")
    assert runner.invoke(cli, ["scan", "--n", "1", "--out", out]).exit_code == 2
    assert runner.invoke(cli, ["scan", "--n", "4", "--max-speed", "4", "--count", "5", "--out", out]).exit_code == 2


def test_figure_rejects_bad_input(runner, tmp_path):
    broken = tmp_path / "broken.csv"
    broken.write_text("speeds\n1;2\n", encoding="utf-8")
    out = str(tmp_path / "fig.svg")
    assert runner.invoke(cli, ["figure", "--input", str(broken), "--out", out]).exit_code == 2
    assert runner.invoke(cli, ["figure", "--input", str(tmp_path / "none.csv"), "--out", out]).exit_code == 2


def test_probe_command(runner):
    result = runner.invoke(cli, ["--quiet", "probe", "--max-speed", "3", "--max-len", "1"])
    assert result.exit_code == 0
    assert "checked 3 vectors" in result.output


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
