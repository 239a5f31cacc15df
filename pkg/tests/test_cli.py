import json
import math
from pathlib import Path

import pytest
from click.testing import CliRunner

from pbessel.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


class TestEval:
    def test_grid_row_count_and_figure(self, runner, tmp_path):
        out = tmp_path / "ev.csv"
        res = runner.invoke(main, [
            "eval", "--p", "2/3", "--omega", "1", "--phi", str(math.pi / 4),
            "--r", "0:20:0.5", "--method", "auto", "--output", str(out),
        ])
        assert res.exit_code == 0, res.output
        lines = out.read_text().splitlines()
        assert lines[0] == "p_num,p_den,omega,phi,r_re,r_im,value_re,value_im,err,method"
        assert len(lines) == 42
        assert out.with_suffix(".svg").exists()

    def test_deterministic_output(self, runner, tmp_path):
        args = ["eval", "--q", "3", "--omega", "0", "--phi", "0.3",
                "--r", "0:5:1", "--method", "series"]
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert runner.invoke(main, args + ["--output", str(a)]).exit_code == 0
        assert runner.invoke(main, args + ["--output", str(b)]).exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_json_format(self, runner, tmp_path):
        out = tmp_path / "ev.json"
        res = runner.invoke(main, [
            "eval", "--q", "1", "--omega", "0", "--phi", "0", "--r", "1:3:1",
            "--format", "json", "--output", str(out),
        ])
        assert res.exit_code == 0
        rows = json.loads(out.read_text())
        assert len(rows) == 3 and rows[0]["method"] == "series"

    def test_missing_p_usage_error(self, runner):
        res = runner.invoke(main, ["eval", "--omega", "0", "--r", "0:1:1"])
        assert res.exit_code == 2

    def test_poisson_requires_odd_q(self, runner):
        res = runner.invoke(main, [
            "eval", "--q", "2", "--omega", "0", "--phi", "0", "--r", "1",
            "--method", "poisson",
        ])
        assert res.exit_code == 2

    def test_config_file(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "ps": ["2/3"], "omegas": [1.0], "phis": [0.5], "r_range": "0:4:1",
        }))
        out = tmp_path / "ev.csv"
        res = runner.invoke(main, ["eval", "--config", str(cfg), "--output", str(out)])
        assert res.exit_code == 0, res.output
        assert len(out.read_text().splitlines()) == 6


class TestCompare:
    def test_agreement_passes(self, runner):
        res = runner.invoke(main, [
            "compare", "--p", "2/3", "--omega", "1", "--phi", "0.5",
            "--r", "1:5:2", "--tol", "1e-7",
        ])
        assert res.exit_code == 0, res.output
        assert "worst pairwise delta" in res.output

    def test_tiny_tolerance_fails(self, runner):
        res = runner.invoke(main, [
            "compare", "--p", "2/3", "--omega", "1", "--phi", "0.5",
            "--r", "5", "--tol", "1e-17",
        ])
        assert res.exit_code == 1


class TestVerify:
    def test_reduction_suite(self, runner):
        res = runner.invoke(main, ["verify", "--suite", "reduction", "--q", "1"])
        assert res.exit_code == 0, res.output
        assert "PASS" in res.output

    def test_order_lower_suite(self, runner):
        res = runner.invoke(main, ["verify", "--suite", "order-lower", "--q", "2"])
        assert res.exit_code == 0, res.output

    def test_theorem12_single_exponent(self, runner):
        res = runner.invoke(main, ["verify", "--suite", "theorem12", "--q", "3"])
        assert res.exit_code == 0, res.output
        assert "FAIL" not in res.output


class TestLattice:
    def test_diamond_report(self, runner):
        res = runner.invoke(main, ["lattice", "--p", "1", "--r", "1"])
        assert res.exit_code == 0
        assert "count=5" in res.output and "discrepancy=3" in res.output

    def test_csv_output(self, runner, tmp_path):
        out = tmp_path / "lat.csv"
        res = runner.invoke(main, [
            "lattice", "--q", "1", "--r", "2", "--output", str(out),
        ])
        assert res.exit_code == 0
        body = out.read_text().splitlines()
        assert body[1].startswith("2,1,2,13,")


class TestHardy:
    def test_circle_sum(self, runner):
        res = runner.invoke(main, ["hardy", "--q", "1", "--r", "2.5", "--terms", "2000"])
        assert res.exit_code == 0
        assert "deviation=" in res.output

    def test_budget_error_is_clean(self, runner):
        res = runner.invoke(main, ["hardy", "--p", "2/3", "--r", "1.7", "--terms", "1000"])
        assert res.exit_code == 1
        assert "budget" in res.output
