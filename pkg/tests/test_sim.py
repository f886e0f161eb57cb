"""Time stepping, guards, and the trajectory diagnostics."""
import numpy as np
import pytest
from scipy.integrate import solve_ivp

from fhnlab.errors import BlowUpError, DetectionError, GuardError
from fhnlab.grid import (
    GridFunction,
    Parity,
    StateField,
    UniformGrid,
    quad,
    state_norm,
)
from fhnlab.model import (
    ConstantProfile,
    ModelKind,
    ModelSpec,
    WellProfile,
    cubic_f,
    stationary_solution,
    toy_spec,
)
from fhnlab.sim import (
    Periodicity,
    SimConfig,
    cfl_limit,
    detect_periodicity,
    energy_trace,
    h1_energy_trace,
    propagation_metric,
    rk4_step,
    simulate,
    simulate_ode,
    spatial_profile_stats,
    symmetry_invariance_check,
)
from fhnlab.spectral import SpectralState, synthesize


def toy_ic(grid, coeffs_u, coeffs_v=None):
    u = synthesize(np.asarray(coeffs_u, dtype=float), grid)
    if coeffs_v is None:
        v = GridFunction(grid, np.zeros(grid.n))
    else:
        v = synthesize(np.asarray(coeffs_v, dtype=float), grid)
    return StateField(u, v)


class TestRk4:
    def test_fourth_order_convergence(self):
        # y' = -y over [0, 1]
        def rhs(y):
            return -y

        errs = []
        for dt in (0.1, 0.05):
            y = np.array([1.0])
            for _ in range(int(round(1.0 / dt))):
                y = rk4_step(y, dt, rhs)
            errs.append(abs(y[0] - np.exp(-1.0)))
        ratio = errs[0] / errs[1]
        assert 12.0 < ratio < 20.0

    def test_cfl_limit_scales_with_h_squared(self):
        spec = toy_spec(1.0)
        assert cfl_limit(spec, 0.01) == pytest.approx(cfl_limit(spec, 0.02) / 4.0)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SimConfig(dt=-1.0, t_end=1.0)
        with pytest.raises(ValueError):
            SimConfig(dt=1e-3, t_end=1.0, record_every=100, series_every=33)
        with pytest.raises(ValueError):
            SimConfig(dt=1e-3, t_end=1.0, backend="pseudo")


class TestSimulateGuards:
    def test_dt_above_diffusion_limit_raises(self):
        spec = toy_spec(1.0)
        grid = UniformGrid(0.0, 1.0, 101)
        ic = toy_ic(grid, [0.1])
        cfg = SimConfig(dt=1e-3, t_end=1.0)
        with pytest.raises(GuardError):
            simulate(spec, ic, cfg)

    def test_blow_up_detected_with_time_stamp(self):
        # the linearized model with a strong gain and no cubic saturation
        spec = toy_spec(80.0, linear=True)
        grid = UniformGrid(0.0, 1.0, 21)
        ic = toy_ic(grid, [1e6])
        cfg = SimConfig(dt=1e-3, t_end=50.0, record_every=100)
        with pytest.raises(BlowUpError) as exc:
            simulate(spec, ic, cfg)
        assert exc.value.t > 0.0


class TestSimulateBasics:
    def test_deterministic_rerun_is_bitwise_equal(self):
        spec = toy_spec(1.0)
        grid = UniformGrid(0.0, 1.0, 51)
        cfg = SimConfig(dt=1e-4, t_end=0.5, record_every=1000)
        a = simulate(spec, toy_ic(grid, [0.3, 0.2]), cfg)
        b = simulate(spec, toy_ic(grid, [0.3, 0.2]), cfg)
        assert np.array_equal(a.states[-1].u.values, b.states[-1].u.values)
        assert np.array_equal(a.states[-1].v.values, b.states[-1].v.values)

    def test_stationary_state_does_not_drift(self):
        spec = ModelSpec(
            kind=ModelKind.NH_FHN, epsilon=0.1, d=1.0, a=-2.0, b=2.0,
            c_profile=WellProfile(2.0),
        )
        ic = stationary_solution(spec, 41)
        cfg = SimConfig(dt=1e-4, t_end=1.0, record_every=10000)
        traj = simulate(spec, ic, cfg)
        drift = np.max(np.abs(traj.states[-1].u.values - ic.u.values))
        assert drift <= 1e-8

    def test_series_include_energy_channels(self):
        spec = toy_spec(1.0)
        grid = UniformGrid(0.0, 1.0, 26)
        cfg = SimConfig(dt=1e-4, t_end=0.1, record_every=100, series_every=10)
        traj = simulate(spec, toy_ic(grid, [0.1, 0.1]), cfg)
        assert "energy" in traj.series and "energy_rate" in traj.series
        assert len(traj.series["energy"]) == len(traj.series_times)

    def test_probe_series_matches_snapshot(self):
        spec = toy_spec(1.0)
        grid = UniformGrid(0.0, 1.0, 51)
        cfg = SimConfig(dt=1e-4, t_end=0.2, record_every=500,
                        probe_positions=(0.5,))
        traj = simulate(spec, toy_ic(grid, [0.0, 0.4]), cfg)
        probe = traj.probe_series(0.5)
        assert len(probe) == len(traj.series_times)
        mid = grid.n // 2
        assert probe[-1] == pytest.approx(traj.states[-1].u.values[mid], abs=1e-12)


class TestBackendAgreement:
    def test_galerkin_matches_finite_differences(self):
        spec = toy_spec(1.0)
        coeffs_u = np.zeros(9)
        coeffs_u[:3] = (0.2, -0.3, 0.1)
        cfg_g = SimConfig(dt=5e-4, t_end=1.0, record_every=2000,
                          backend="galerkin", n_modes=8)
        traj_g = simulate(spec, SpectralState(coeffs_u.copy(), np.zeros(9)), cfg_g)
        grid = UniformGrid(0.0, 1.0, 51)
        cfg_f = SimConfig(dt=1e-4, t_end=1.0, record_every=10000)
        traj_f = simulate(spec, toy_ic(grid, coeffs_u), cfg_f)
        u_g = synthesize(traj_g.spectral_states[-1].u, grid)
        diff = traj_f.states[-1].u.values - u_g.values
        assert np.sqrt(quad(GridFunction(grid, diff ** 2))) <= 1e-3


class TestPlanarModel:
    def make_spec(self, c, eps=0.5):
        return ModelSpec(kind=ModelKind.ODE_FHN, epsilon=eps,
                         c_profile=ConstantProfile(c))

    def test_against_scipy_integrator(self):
        spec = self.make_spec(-1.5)
        cfg = SimConfig(dt=1e-4, t_end=5.0, record_every=1000)
        t, u, v = simulate_ode(spec, (0.0, 0.0), cfg)

        def rhs(_, y):
            return [(cubic_f(y[0]) - y[1]) / 0.5, y[0] - (-1.5)]

        sol = solve_ivp(rhs, (0.0, 5.0), [0.0, 0.0], rtol=1e-10, atol=1e-12)
        assert u[-1] == pytest.approx(sol.y[0, -1], abs=1e-6)
        assert v[-1] == pytest.approx(sol.y[1, -1], abs=1e-6)

    def test_rejects_spatial_models(self):
        with pytest.raises(ValueError):
            simulate_ode(toy_spec(1.0), (0.0, 0.0),
                         SimConfig(dt=1e-3, t_end=1.0))


class TestDiagnostics:
    def test_detect_periodicity_on_synthetic_signal(self):
        t = np.linspace(0.0, 50.0, 5001)
        per = detect_periodicity(t, 2.0 * np.sin(2 * np.pi * t / 5.0))
        assert per.period == pytest.approx(5.0, rel=1e-3)
        assert per.amplitude == pytest.approx(2.0, rel=1e-3)
        assert per.regularity <= 1e-3
        assert per.n_peaks >= 8

    def test_detect_periodicity_windowing(self):
        t = np.linspace(0.0, 40.0, 4001)
        y = np.sin(t) * (t > 20.0)
        per = detect_periodicity(t, y, t_window=(20.0, 40.0))
        assert per.period == pytest.approx(2 * np.pi, rel=1e-2)

    def test_decay_is_not_periodic(self):
        t = np.linspace(0.0, 10.0, 1001)
        with pytest.raises(DetectionError):
            detect_periodicity(t, np.exp(-t))

    def test_spatial_profile_stats(self):
        grid = UniformGrid(0.0, 1.0, 801)
        f = GridFunction(grid, 2.0 + np.sqrt(2) * np.cos(np.pi * grid.x))
        stats = spatial_profile_stats(f)
        assert stats["mean"] == pytest.approx(2.0, abs=1e-6)
        assert stats["std"] == pytest.approx(1.0, abs=1e-4)
        assert stats["max_abs"] == pytest.approx(2.0 + np.sqrt(2), abs=1e-6)

    def test_propagation_metric_reports_quiet_probe(self):
        spec = toy_spec(-0.5)
        grid = UniformGrid(0.0, 1.0, 26)
        cfg = SimConfig(dt=1e-4, t_end=2.0, record_every=200,
                        probe_positions=(0.2,))
        traj = simulate(spec, toy_ic(grid, [0.0, 0.1]), cfg)
        out = propagation_metric(traj, 0.2, (0.0, 2.0))
        assert not out["detected"]
        assert out["amplitude"] == 0.0


class TestEnergyMonitors:
    def test_residual_small_for_smooth_run(self):
        spec = toy_spec(-0.5)
        grid = UniformGrid(0.0, 1.0, 51)
        cfg = SimConfig(dt=1e-5, t_end=0.5, record_every=5000, series_every=100)
        traj = simulate(spec, toy_ic(grid, [0.3, 0.5]), cfg)
        trace = energy_trace(traj)
        inner = trace["residual"][1:-1]
        budget = 1e-4 * np.maximum(1.0, np.abs(trace["rate"][1:-1]))
        assert np.all(inner <= budget)
        assert np.all(trace["energy"] >= 0.0)

    def test_energy_decays_for_negative_gain(self):
        spec = toy_spec(-0.5)
        grid = UniformGrid(0.0, 1.0, 51)
        cfg = SimConfig(dt=1e-5, t_end=0.5, record_every=5000, series_every=100)
        traj = simulate(spec, toy_ic(grid, [0.3, 0.5]), cfg)
        e = energy_trace(traj)["energy"]
        assert np.all(np.diff(e) <= 1e-12)

    def test_h1_trace_zero_state(self):
        spec = toy_spec(1.0)
        grid = UniformGrid(0.0, 1.0, 26)
        cfg = SimConfig(dt=1e-4, t_end=0.05, record_every=50)
        traj = simulate(spec, toy_ic(grid, [0.0]), cfg)
        trace = h1_energy_trace(traj)
        assert np.allclose(trace["energy"], 0.0, atol=1e-14)

    def test_h1_residual_small_for_smooth_run(self):
        spec = toy_spec(-0.5)
        grid = UniformGrid(0.0, 1.0, 101)
        cfg = SimConfig(dt=1e-5, t_end=0.2, record_every=200)
        traj = simulate(spec, toy_ic(grid, [0.0, 0.3]), cfg)
        trace = h1_energy_trace(traj)
        inner = trace["residual"][1:-1]
        budget = 1e-3 * np.maximum(1.0, np.abs(trace["rate"][1:-1]))
        assert np.all(inner <= budget)
        assert np.all(trace["rate"] <= 1e-12)

    def test_h1_trace_rejects_nonhomogeneous_c(self):
        spec = ModelSpec(
            kind=ModelKind.NH_FHN, epsilon=0.1, d=1.0, a=-2.0, b=2.0,
            c_profile=WellProfile(1.0),
        )
        ic = stationary_solution(spec, 41)
        cfg = SimConfig(dt=1e-4, t_end=0.01, record_every=10)
        traj = simulate(spec, ic, cfg)
        with pytest.raises(ValueError):
            h1_energy_trace(traj)


class TestParityInvariance:
    def test_odd_initial_data_stays_odd(self):
        spec = toy_spec(1.0)
        grid = UniformGrid(0.0, 1.0, 21)
        coeffs = np.zeros(4)
        coeffs[1] = 0.8
        coeffs[3] = -0.2
        ic = toy_ic(grid, coeffs, coeffs)
        cfg = SimConfig(dt=1e-3, t_end=2.0, record_every=200)
        out = symmetry_invariance_check(spec, ic, cfg, Parity.ODD)
        assert out["ic_defect"] <= 1e-12
        assert out["max_forbidden_coeff"] <= 1e-10
        assert out["max_defect"] <= 1e-12

    def test_even_initial_data_stays_even(self):
        spec = toy_spec(1.0)
        grid = UniformGrid(0.0, 1.0, 21)
        coeffs = np.zeros(3)
        coeffs[0] = 0.3
        coeffs[2] = 0.4
        ic = toy_ic(grid, coeffs, coeffs)
        cfg = SimConfig(dt=1e-3, t_end=2.0, record_every=200)
        out = symmetry_invariance_check(spec, ic, cfg, Parity.EVEN)
        assert out["max_forbidden_coeff"] <= 1e-10

    def test_asymmetric_data_breaks_parity(self):
        spec = toy_spec(1.0)
        grid = UniformGrid(0.0, 1.0, 21)
        ic = toy_ic(grid, [0.5, 0.5])
        cfg = SimConfig(dt=1e-3, t_end=1.0, record_every=200)
        out = symmetry_invariance_check(spec, ic, cfg, Parity.ODD)
        assert out["max_forbidden_coeff"] > 1e-3
