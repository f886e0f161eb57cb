"""Experiment configs: parsing, round-trips, initial-condition recipes."""
import numpy as np
import pytest

from fhnlab.config import (
    IcConfig,
    ModelConfig,
    PRESET_NAMES,
    RunConfig,
    build_ic,
    preset,
)
from fhnlab.errors import ConfigError
from fhnlab.grid import UniformGrid
from fhnlab.model import stationary_solution
from fhnlab.spectral import analyze


class TestRoundTrip:
    def test_ini_round_trip_is_idempotent(self):
        cfg = preset("fig2")
        ini = cfg.to_ini()
        assert RunConfig.from_ini(ini) == cfg
        assert RunConfig.from_ini(ini).to_ini() == ini

    def test_round_trip_preserves_tuples(self):
        cfg = preset("nhfhn_p2")
        back = RunConfig.from_ini(cfg.to_ini())
        assert back.probes == cfg.probes
        assert back.ic == cfg.ic

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text(preset("fig1").to_ini())
        assert RunConfig.load(str(path)) == preset("fig1")


class TestValidation:
    def test_unknown_key_rejected(self):
        ini = preset("fig1").to_ini() + "\nturbo = yes\n"
        with pytest.raises(ConfigError, match="turbo"):
            RunConfig.from_ini(ini)

    def test_unknown_section_rejected(self):
        ini = preset("fig1").to_ini() + "\n[plotting]\ncolor = red\n"
        with pytest.raises(ConfigError):
            RunConfig.from_ini(ini)

    def test_unknown_model_kind_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig(model=ModelConfig(kind="navier_stokes")).resolve()

    def test_bad_grid_spacing_rejected(self):
        with pytest.raises(ConfigError):
            RunConfig(h=0.03).grid()  # does not divide the unit interval

    def test_malformed_number_rejected(self):
        ini = "\n".join(
            "dt = ten" if line.startswith("dt = ") else line
            for line in preset("fig1").to_ini().splitlines()
        )
        with pytest.raises(ConfigError):
            RunConfig.from_ini(ini)


class TestInitialConditions:
    def setup_method(self):
        self.cfg = preset("fig1")
        self.spec = self.cfg.model.to_spec()
        self.grid = self.cfg.grid()

    def test_step_ic(self):
        ic = IcConfig(kind="step", left=1.0, right=-0.5, v_from_u=True)
        state = build_ic(ic, self.spec, self.grid)
        assert state.u.values[0] == 1.0
        assert state.u.values[-1] == -0.5
        mid = self.grid.n // 2
        assert state.u.values[mid] == pytest.approx(0.25)
        assert np.array_equal(state.v.values, state.u.values)

    def test_step_ic_without_v(self):
        ic = IcConfig(kind="step", left=1.0, right=-1.0, v_from_u=False)
        state = build_ic(ic, self.spec, self.grid)
        assert np.all(state.v.values == 0.0)

    def test_modes_ic(self):
        ic = IcConfig(kind="modes", modes=((0, 0.1, 0.2), (2, -0.3, 0.0)))
        state = build_ic(ic, self.spec, self.grid)
        cu = analyze(state.u, 4)
        cv = analyze(state.v, 4)
        assert cu[0] == pytest.approx(0.1, abs=1e-10)
        assert cu[2] == pytest.approx(-0.3, abs=1e-6)
        assert cv[0] == pytest.approx(0.2, abs=1e-10)
        assert np.max(np.abs(cu[[1, 3, 4]])) <= 1e-8

    def test_random_ic_is_seeded(self):
        ic = IcConfig(kind="random", n_modes=3, seed=11)
        a = build_ic(ic, self.spec, self.grid)
        b = build_ic(ic, self.spec, self.grid)
        c = build_ic(IcConfig(kind="random", n_modes=3, seed=12),
                     self.spec, self.grid)
        assert np.array_equal(a.u.values, b.u.values)
        assert not np.array_equal(a.u.values, c.u.values)
        assert np.all(a.v.values == 0.0)

    def test_stationary_ic_with_perturbation(self):
        cfg = preset("nhfhn_p2")
        spec = cfg.model.to_spec()
        grid = cfg.grid()
        base = stationary_solution(spec, grid.n)
        state = build_ic(cfg.ic, spec, grid)
        bump = state.u.values - base.u.values
        assert np.max(np.abs(bump)) > 0.0
        assert np.max(np.abs(bump)) <= abs(cfg.ic.amplitude) * np.sqrt(2) + 1e-9
        assert np.array_equal(state.v.values, base.v.values)

    def test_from_file_ic(self, tmp_path):
        path = tmp_path / "ic.txt"
        u = np.linspace(-1.0, 1.0, self.grid.n)
        v = np.zeros(self.grid.n)
        np.savetxt(path, np.column_stack([u, v]))
        ic = IcConfig(kind="from_file", path=str(path))
        state = build_ic(ic, self.spec, self.grid)
        assert np.allclose(state.u.values, u, atol=1e-12)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigError):
            build_ic(IcConfig(kind="solitons"), self.spec, self.grid)


class TestPresets:
    @pytest.mark.parametrize("name", PRESET_NAMES)
    def test_presets_resolve(self, name):
        cfg = preset(name, fast=True)
        spec = cfg.model.to_spec()
        if cfg.model.kind != "ode_fhn":
            cfg.grid()
        cfg.sim_config()
        assert spec is not None

    def test_unknown_preset_rejected(self):
        with pytest.raises(ConfigError):
            preset("fig9")

    def test_fast_variant_is_cheaper(self):
        full = preset("nhfhn_p1.1")
        fast = preset("nhfhn_p1.1", fast=True)
        assert fast.t_end < full.t_end
        assert fast.h > full.h
