"""Command-line interface: artifacts, exit codes, determinism."""
import json
from dataclasses import replace

import numpy as np
import pytest

from fhnlab.cli import (
    CSV_VERSION,
    EXIT_BRACKET,
    EXIT_CONFIG,
    EXIT_GUARD,
    main,
)
from fhnlab.config import ModelConfig, RunConfig, preset


def write_cfg(tmp_path, cfg, name="run.ini"):
    path = tmp_path / name
    path.write_text(cfg.to_ini())
    return str(path)


def toy_cfg():
    return RunConfig(
        model=ModelConfig(kind="toy_nonlinear", alpha=1.0),
        dt=1e-4, t_end=0.5, h=0.05, record_every=1000,
    )


class TestSimulate:
    def test_writes_versioned_artifacts(self, tmp_path):
        cfg_path = write_cfg(tmp_path, toy_cfg())
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg_path, "--out", str(out)]) == 0
        snap = (out / "snapshots.csv").read_text()
        assert snap.startswith(f"# {CSV_VERSION} schema=snapshot\n")
        assert snap.splitlines()[1] == "t,x,u,v"
        assert (out / "diagnostics.csv").exists()

    def test_reruns_are_identical(self, tmp_path):
        cfg_path = write_cfg(tmp_path, toy_cfg())
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["simulate", "--config", cfg_path, "--out", str(out_a)])
        main(["simulate", "--config", cfg_path, "--out", str(out_b)])
        assert (out_a / "snapshots.csv").read_bytes() == (
            out_b / "snapshots.csv"
        ).read_bytes()

    def test_missing_config_is_a_config_error(self, tmp_path):
        out = tmp_path / "out"
        assert main(["simulate", "--out", str(out)]) == EXIT_CONFIG
        payload = json.loads((out / "error.json").read_text())
        assert payload["error"] == "config"

    def test_unstable_dt_is_a_guard_error(self, tmp_path):
        cfg = replace(toy_cfg(), dt=1e-2)
        cfg_path = write_cfg(tmp_path, cfg)
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg_path, "--out", str(out)]) == EXIT_GUARD
        assert (out / "error.json").exists()

    def test_ode_run_writes_trajectory(self, tmp_path):
        cfg_path = write_cfg(tmp_path, preset("ode_c-1.5"))
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg_path, "--out", str(out)]) == 0
        lines = (out / "trajectory.csv").read_text().splitlines()
        assert lines[1] == "t,u,v"
        assert len(lines) > 10


class TestSpectrum:
    def fhn_cfg(self):
        return RunConfig(
            model=ModelConfig(kind="const_c_fhn", epsilon=0.1, c=0.0,
                              a=0.0, b=1.0),
            h=0.001, n_modes=8,
        )

    def test_constant_c_summary(self, tmp_path):
        cfg_path = write_cfg(tmp_path, self.fhn_cfg())
        out = tmp_path / "out"
        assert main(["spectrum", "--config", cfg_path, "--out", str(out)]) == 0
        summary = json.loads((out / "spectrum_summary.json").read_text())
        assert summary["lambda_0"] == pytest.approx(-3.0, abs=1e-5)
        assert summary["unstable_count"] == 1
        rows = (out / "spectrum.csv").read_text().splitlines()[2:]
        assert len(rows) == 8

    def test_toy_model_rejected(self, tmp_path):
        cfg_path = write_cfg(tmp_path, toy_cfg())
        out = tmp_path / "out"
        assert main(["spectrum", "--config", cfg_path, "--out", str(out)]) == EXIT_CONFIG


class TestBifurcate:
    def test_alpha_sweep_reports_crossings(self, tmp_path):
        cfg_path = write_cfg(tmp_path, toy_cfg())
        out = tmp_path / "out"
        code = main(["bifurcate", "--config", cfg_path, "--out", str(out),
                     "--param", "alpha", "--lo", "-1", "--hi", "45",
                     "--samples", "5", "--k-max", "4"])
        assert code == 0
        summary = json.loads((out / "cascade_summary.json").read_text())
        alphas = [c["alpha"] for c in summary["crossings"]]
        assert alphas == pytest.approx([0.0, np.pi ** 2, 4 * np.pi ** 2])
        rows = (out / "cascade.csv").read_text().splitlines()[2:]
        assert len(rows) == 5 * 5

    def test_bad_threshold_bracket(self, tmp_path):
        cfg = RunConfig(
            model=ModelConfig(kind="nh_fhn", epsilon=0.1, profile="well",
                              p=1.0, a=-2.0, b=2.0),
            h=0.01,
        )
        cfg_path = write_cfg(tmp_path, cfg)
        out = tmp_path / "out"
        code = main(["bifurcate", "--config", cfg_path, "--out", str(out),
                     "--param", "p", "--lo", "0.5", "--hi", "2", "--samples", "2",
                     "--k-max", "1", "--p-star"])
        assert code == EXIT_BRACKET
        assert json.loads((out / "error.json").read_text())["error"] == "bracket"


class TestReproduceAndVerify:
    def test_ode_preset_verdict(self, tmp_path):
        out = tmp_path / "out"
        assert main(["reproduce", "ode_c-1.5", "--out", str(out)]) == 0
        verdict = json.loads((out / "verdict.json").read_text())
        assert verdict["passed"] is True

    def test_unknown_preset_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["reproduce", "fig9"])
        assert exc.value.code == 2

    def test_lemmas_suite_passes(self, tmp_path):
        out = tmp_path / "out"
        assert main(["verify", "lemmas", "--out", str(out)]) == 0
        report = json.loads((out / "verify_lemmas.json").read_text())
        assert report["passed"] is True
