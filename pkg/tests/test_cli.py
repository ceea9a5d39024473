import json
import math
import subprocess
import sys

import numpy as np
import pytest
from click.testing import CliRunner

from uncertainty_bounds.cli import main

JX = {"preset": "spin", "j": 1, "component": "x"}
JY = {"preset": "spin", "j": 1, "component": "y"}


@pytest.fixture
def runner():
    return CliRunner()


def write(tmp_path, payload, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def example_1(bounds, theta=math.pi / 8):
    return {
        "dimension": 3,
        "hbar": 1.0,
        "state": {"preset": "spin1-theta", "theta": theta},
        "operator_a": JX,
        "operator_b": JY,
        "perp": {"preset": "spin-basis", "j": 1, "m": 0},
        "bounds": bounds,
    }


def rows(output):
    out = {}
    for line in output.splitlines()[1:]:
        parts = line.split()
        out[parts[0]] = (float(parts[1]), float(parts[2]), parts[4])
    return out


class TestBounds:
    def test_example_1(self, runner, tmp_path):
        res = runner.invoke(main, ["bounds", write(tmp_path, example_1(["mp-plus", "mp-minus", "gen-sum-hrs"]))])
        assert res.exit_code == 0, res.output
        table = rows(res.output)
        assert set(table) == {"mp-plus", "mp-minus", "gen-sum-hrs"}
        for lhs, rhs, ok in table.values():
            assert rhs == pytest.approx(1.0) and ok == "true"

    def test_hr_row(self, runner, tmp_path):
        res = runner.invoke(main, ["bounds", write(tmp_path, example_1(["hr"]))])
        assert rows(res.output)["hr"][1] == pytest.approx(0.125)

    def test_malformed(self, runner, tmp_path):
        bad = example_1(["hr"])
        bad["dimension"] = "three"
        res = runner.invoke(main, ["bounds", write(tmp_path, bad)])
        assert res.exit_code == 2
        assert "dimension" in res.output

    def test_missing_file(self, runner, tmp_path):
        res = runner.invoke(main, ["bounds", str(tmp_path / "nope.json")])
        assert res.exit_code == 2

    def test_violation_exit_code(self, runner, tmp_path, monkeypatch):
        from uncertainty_bounds import bounds

        monkeypatch.setattr(bounds, "_hr", lambda m: bounds.BoundReport.build("hr", 0.0, 1.0))
        res = runner.invoke(main, ["bounds", write(tmp_path, example_1(["hr"]))])
        assert res.exit_code == 1

    def test_optimize_perp_in_bounds(self, runner, tmp_path):
        sc = example_1(["gen-sum-hrs"])
        sc["state"] = {"preset": "spin-basis", "j": 1, "m": 0}
        sc["perp"] = {"optimize": {"objective": "gen-sum-hrs", "restarts": 4}}
        res = runner.invoke(main, ["bounds", write(tmp_path, sc)])
        assert res.exit_code == 0
        assert rows(res.output)["gen-sum-hrs"][1] == pytest.approx(2.0, abs=1e-6)


class TestSweep:
    def test_example_2(self, runner, tmp_path):
        out = tmp_path / "sweep.csv"
        res = runner.invoke(main, ["sweep", "--preset", "example-2", "--families", "gen-sum-hrs",
                                   "--grid", "0:1.5707963:5", "--out", str(out)])
        assert res.exit_code == 0, res.output
        lines = out.read_bytes().decode("utf-8").split("\n")
        assert lines[0] == "theta,var_a,var_b,family,lhs,rhs,slack,satisfied"
        data = [line.split(",") for line in lines[1:] if line]
        thetas = np.array([float(r[0]) for r in data])
        rhs = np.array([float(r[5]) for r in data])
        assert np.allclose(rhs, 1 + np.abs(np.cos(2 * thetas)), atol=1e-11)
        # the closed form 2cos^2 agrees on the first half of the range only
        assert np.allclose(rhs[:3], 2 * np.cos(thetas[:3]) ** 2, atol=1e-11)

    def test_example_1_constant(self, runner, tmp_path):
        out = tmp_path / "s.csv"
        runner.invoke(main, ["sweep", "--preset", "example-1", "--families", "mp-plus",
                             "--grid", "0:3:7", "--out", str(out)])
        rhs = [float(line.split(",")[5]) for line in out.read_text().splitlines()[1:]]
        assert np.allclose(rhs, 1.0, atol=1e-11)

    def test_single_point(self, runner, tmp_path):
        out = tmp_path / "s.csv"
        runner.invoke(main, ["sweep", "--preset", "example-1", "--families", "hr", "--grid", "0.2:0.2:1",
                             "--out", str(out)])
        assert len(out.read_text().splitlines()) == 2

    def test_byte_identical(self, runner, tmp_path):
        args = ["sweep", "--preset", "example-2", "--families", "hr,mp-minus,gen-product-hr", "--grid", "0:1.5:11"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        runner.invoke(main, args + ["--out", str(a)])
        runner.invoke(main, args + ["--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_unwritable(self, runner, tmp_path):
        res = runner.invoke(main, ["sweep", "--preset", "example-1", "--families", "hr", "--grid", "0:1:2",
                                   "--out", str(tmp_path / "missing" / "x.csv")])
        assert res.exit_code == 2

    @pytest.mark.parametrize("args", [["--families", "bogus", "--grid", "0:1:2"],
                                      ["--families", "hr", "--grid", "0:1"]])
    def test_bad_input(self, runner, tmp_path, args):
        res = runner.invoke(main, ["sweep", "--preset", "example-1", "--out", str(tmp_path / "x.csv")] + args)
        assert res.exit_code == 2


class TestVerify:
    def test_small_run(self, runner):
        res = runner.invoke(main, ["verify", "--dims", "2,3", "--count", "30", "--seed", "1"])
        assert res.exit_code == 0
        assert "example-1-variance-factor" in res.output and "refuted" in res.output

    def test_deterministic_json(self, runner):
        args = ["verify", "--dims", "2,3", "--count", "20", "--seed", "1", "--json"]
        a, b = runner.invoke(main, args), runner.invoke(main, args)
        assert a.output == b.output
        assert json.loads(a.output)["passed"]

    def test_family_filter(self, runner):
        res = runner.invoke(main, ["verify", "--dims", "3", "--count", "5", "--families", "hr", "--json"])
        checks = json.loads(res.output)["checks"]
        assert "hr-validity" in checks and "mp-plus-validity" not in checks

    def test_bad_dims(self, runner):
        assert runner.invoke(main, ["verify", "--dims", "1"]).exit_code == 2


class TestOptimize:
    def test_ground_state(self, runner, tmp_path):
        sc = example_1(["gen-sum-hrs"])
        sc["state"] = {"preset": "spin-basis", "j": 1, "m": 0}
        sc["perp"] = {"optimize": {"objective": "gen-sum-hrs"}}
        res = runner.invoke(main, ["optimize", write(tmp_path, sc)])
        assert res.exit_code == 0
        best = float(res.output.split("best_rhs:")[1].split()[0])
        assert best == pytest.approx(2.0, abs=1e-6)

    def test_two_dim(self, runner, tmp_path):
        from uncertainty_bounds.bounds import evaluate
        from uncertainty_bounds.scenario import dump_scenario, parse_scenario
        from uncertainty_bounds.verify import random_instance

        inst = random_instance(2, 3)
        lit = lambda v: [[float(c.real), float(c.imag)] for c in v]
        sc = {"dimension": 2, "state": lit(inst.psi.amplitudes),
              "operator_a": [lit(r) for r in inst.a.matrix], "operator_b": [lit(r) for r in inst.b.matrix],
              "perp": {"optimize": {"objective": "mp-plus", "restarts": 2}}, "bounds": ["hr"]}
        res = runner.invoke(main, ["optimize", write(tmp_path, sc)])
        best = float(res.output.split("best_rhs:")[1].split()[0])
        direct = evaluate("mp-plus", inst.a, inst.b, inst.psi, inst.psi_perp).rhs
        assert best == pytest.approx(direct, rel=1e-9)

    def test_perp_free_objective(self, runner, tmp_path):
        sc = example_1(["hr"])
        sc["perp"] = {"optimize": {"objective": "hr"}}
        res = runner.invoke(main, ["optimize", write(tmp_path, sc)])
        assert res.exit_code == 2
        assert "does not depend on the perpendicular state" in res.output

    def test_requires_optimize_perp(self, runner, tmp_path):
        res = runner.invoke(main, ["optimize", write(tmp_path, example_1(["hr"]))])
        assert res.exit_code == 2


def test_module_entry_point_exit_codes(tmp_path):
    ok = subprocess.run([sys.executable, "-m", "uncertainty_bounds", "bounds", write(tmp_path, example_1(["hr"]))],
                        capture_output=True, text=True)
    assert ok.returncode == 0
    bad = subprocess.run([sys.executable, "-m", "uncertainty_bounds", "frobnicate"], capture_output=True, text=True)
    assert bad.returncode == 2
