import csv
import json
import subprocess
import sys

import pytest

from repmut.cli import EXIT_USAGE, ScenarioSpec, SpecError, main


def write_spec(tmp_path, doc, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


GAUSS = {"kind": "Gaussian", "a": 1.0, "m": 0.0}


class TestSolve:
    def test_extinction_scenario(self, tmp_path):
        spec = write_spec(tmp_path, {"name": "ext", "times": [0.5, 0.9, 0.99],
                                     "profile": {"kind": "ExponentialTail", "alpha": 1}})
        out = tmp_path / "out"
        assert main(["solve", "--spec", spec, "--out", str(out), "--quiet"]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["status"] == "Extinct" and summary["after"] == 1.0
        sups = [f["sup_u"] for f in summary["frames"]]
        assert sups == sorted(sups, reverse=True)
        with open(out / "frames.csv") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "x", "u"]
        assert len(rows) == 1 + 3 * 4096

    def test_heavy_tail_exit_code(self, tmp_path):
        spec = write_spec(tmp_path, {"name": "alg", "times": [0.5],
                                     "profile": {"kind": "AlgebraicTail", "p": 2}})
        out = tmp_path / "out"
        assert main(["solve", "--spec", spec, "--out", str(out), "--quiet"]) == 2
        assert json.loads((out / "summary.json").read_text()) == {"status": "NeverDefined", "T": 0}
        assert not (out / "frames.csv").exists()

    def test_frames_past_extinction_are_zero(self, tmp_path):
        spec = write_spec(tmp_path, {"name": "ext", "times": [1.0, 2.0],
                                     "profile": {"kind": "ExponentialTail", "alpha": 1}})
        out = tmp_path / "out"
        assert main(["solve", "--spec", spec, "--out", str(out), "--quiet", "--grid-n", "16"]) == 0
        frames = json.loads((out / "summary.json").read_text())["frames"]
        assert [f["status"] for f in frames] == ["LifespanBoundary", "Extinct"]
        assert frames[0]["u_bar"] == "inf"

    def test_outputs_are_byte_identical(self, tmp_path):
        spec = write_spec(tmp_path, {"name": "g", "times": [0.1, 0.5], "profile": GAUSS})
        for d in ("a", "b"):
            assert main(["solve", "--spec", spec, "--out", str(tmp_path / d),
                         "--quiet", "--grid-n", "256"]) == 0
        for f in ("frames.csv", "summary.json"):
            assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()

    def test_seventeen_digit_floats(self, tmp_path):
        spec = write_spec(tmp_path, {"name": "g", "times": [0.3], "profile": GAUSS})
        main(["solve", "--spec", spec, "--out", str(tmp_path), "--quiet", "--grid-n", "8"])
        with open(tmp_path / "frames.csv") as fh:
            rows = list(csv.reader(fh))[1:]
        for row in rows:
            for v in row:
                assert float(format(float(v), ".17g")) == float(v)

    def test_output_selection(self, tmp_path):
        spec = write_spec(tmp_path, {"name": "g", "times": [0.3], "profile": GAUSS,
                                     "outputs": ["summary.json"]})
        main(["solve", "--spec", spec, "--out", str(tmp_path / "o"), "--quiet", "--grid-n", "8"])
        assert sorted(p.name for p in (tmp_path / "o").iterdir()) == ["summary.json"]


class TestOtherCommands:
    def test_classify(self, tmp_path, capsys):
        spec = write_spec(tmp_path, {"name": "g", "times": [], "profile": GAUSS})
        assert main(["classify", "--spec", spec]) == 0
        assert json.loads(capsys.readouterr().out) == {"class": "VeryLight", "T": "inf"}

    def test_oracle(self, tmp_path):
        spec = write_spec(tmp_path, {"name": "o", "times": [0.1, 0.25, 0.5], "profile": GAUSS,
                                     "oracle": {"n": 2048, "dt": 1e-4}})
        out = tmp_path / "out"
        assert main(["oracle", "--spec", spec, "--out", str(out), "--quiet"]) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["report"]["max_sup_du"] <= 1e-3
        manifest = json.loads((out / "manifest.json").read_text())
        assert "integrate_s" in manifest["timings"]

    def test_oracle_numeric_failure(self, tmp_path):
        spec = write_spec(tmp_path, {"name": "o", "times": [0.5], "profile": GAUSS,
                                     "oracle": {"x_lo": -5, "x_hi": 5, "n": 512, "dt": 1e-4}})
        assert main(["oracle", "--spec", spec, "--quiet"]) == 3

    def test_oracle_heavy_tail(self, tmp_path):
        spec = write_spec(tmp_path, {"name": "o", "times": [0.5], "oracle": {},
                                     "profile": {"kind": "AlgebraicTail", "p": 3}})
        assert main(["run", "--spec", spec, "--quiet"]) == 2

    def test_quadratic(self, tmp_path):
        spec = write_spec(tmp_path, {"name": "q", "times": [0.5, 1.0], "profile": GAUSS,
                                     "weight": "Quadratic"})
        out = tmp_path / "out"
        assert main(["quadratic", "--spec", spec, "--out", str(out), "--quiet"]) == 0
        rows = json.loads((out / "summary.json").read_text())["frames"]
        assert max(r["drift_from_u0"] for r in rows) <= 1e-8

    def test_wave(self, tmp_path):
        out = tmp_path / "w"
        assert main(["wave", "--c", "1", "--out", str(out), "--quiet"]) == 0
        assert (out / "wave.csv").read_text().startswith("x,psi\n")
        report = json.loads((out / "summary.json").read_text())
        assert report["residual"] <= 1e-5 and report["min_value"] < 0

    def test_wave_without_speed_limit(self, capsys):
        assert main(["wave", "--c", "0"]) == 1
        assert "no solitary wave" in capsys.readouterr().err

    def test_selftest(self):
        assert main(["selftest", "--quiet"]) == 0


class TestMalformed:
    @pytest.mark.parametrize("doc", [
        {"times": [0.1], "profile": GAUSS},
        {"name": "", "times": [0.1], "profile": GAUSS},
        {"name": "x", "times": [0.5, 0.1], "profile": GAUSS},
        {"name": "x", "times": [0.1], "profile": {"kind": "Cauchy"}},
        {"name": "x", "times": [0.1], "profile": {"kind": "Gaussian", "sigma": 1}},
        {"name": "x", "times": [0.1], "profile": GAUSS, "weight": "Cubic"},
        {"name": "x", "times": [0.1], "profile": GAUSS, "outputs": ["plot.png"]},
        {"name": "x", "times": [0.1], "profile": GAUSS, "colour": "red"},
        [1, 2, 3],
    ])
    def test_bad_scenarios(self, tmp_path, doc, capsys):
        spec = write_spec(tmp_path, doc)
        assert main(["solve", "--spec", spec]) == EXIT_USAGE
        assert "malformed" in capsys.readouterr().err

    def test_not_json(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text("{nope")
        assert main(["solve", "--spec", str(path)]) == EXIT_USAGE

    def test_missing_file(self, tmp_path):
        assert main(["solve", "--spec", str(tmp_path / "none.json")]) == EXIT_USAGE

    def test_missing_spec_flag(self):
        assert main(["solve"]) == EXIT_USAGE

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == EXIT_USAGE

    def test_from_dict_direct(self):
        with pytest.raises(SpecError):
            ScenarioSpec.from_dict({"name": "x", "times": ["a"], "profile": GAUSS})


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "repmut.cli", "wave", "--c", "-1"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
