"""Command-line front end.

Subcommands: simulate, spectrum, bifurcate, reproduce, verify. Data goes to
CSV with a versioned schema comment in the first line; summaries and
verdicts go to JSON. Exit codes: 0 success, 1 failed verification, 2 bad
config, 3 stability-guard violation, 4 blow-up, 5 eigenvalue-solver
failure, 6 invalid bifurcation bracket.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .config import PRESET_NAMES, RunConfig, preset
from .errors import BlowUpError, ConfigError, GuardError, SolverError
from .grid import GridFunction
from .model import ModelKind, cubic_f, cubic_f_prime, stationary_solution
from .sim import detect_periodicity, propagation_metric, simulate, simulate_ode
from .stability import (
    classify_mode,
    find_p_star,
    hopf_cascade_toy,
    mode_eigenvalues,
    well_sl_problem,
)
from .sturm import SlProblem, linf_uniformity_stats, sl_spectrum, weyl_ratio
from .verify import SUITE_NAMES, run_suite
from .errors import DetectionError

CSV_VERSION = "fhnlab-csv v1"

EXIT_VERIFY_FAIL = 1
EXIT_CONFIG = 2
EXIT_GUARD = 3
EXIT_BLOWUP = 4
EXIT_SOLVER = 5
EXIT_BRACKET = 6


def _setup_threads():
    raw = os.environ.get("FHN_THREADS")
    if not raw:
        return
    try:
        n = max(1, int(raw))
    except ValueError:
        return
    try:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
    except ImportError:
        pass


def _write_csv(path: Path, schema: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {CSV_VERSION} schema={schema}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{x:.17g}" if isinstance(x, float) else str(x)
                              for x in row) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")


def _fail(out: Path, code: int, kind: str, message: str) -> int:
    payload = {"error": kind, "message": message, "exit_code": code}
    try:
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "error.json", payload)
    except OSError:
        pass
    print(json.dumps(payload), file=sys.stderr)
    return code


def _load_config(args) -> RunConfig:
    if args.config:
        return RunConfig.load(args.config)
    raise ConfigError("--config PATH is required for this command")


def _dump_trajectory(traj, out: Path) -> None:
    grid = traj.states[0].grid
    rows = []
    for t, s in zip(traj.times, traj.states):
        for j in range(grid.n):
            rows.append((float(t), float(grid.x[j]),
                         float(s.u.values[j]), float(s.v.values[j])))
    _write_csv(out / "snapshots.csv", "snapshot", ["t", "x", "u", "v"], rows)

    names = sorted(traj.series)
    rows = [
        (float(t), *[float(traj.series[n][i]) for n in names])
        for i, t in enumerate(traj.series_times)
    ]
    _write_csv(out / "diagnostics.csv", "diagnostics", ["t", *names], rows)


def cmd_simulate(args) -> int:
    out = Path(args.out)
    try:
        cfg = _load_config(args)
        if args.seed is not None:
            from dataclasses import replace

            cfg = replace(cfg, ic=replace(cfg.ic, seed=args.seed))
        if cfg.model.kind == "ode_fhn":
            spec = cfg.model.to_spec()
            if not cfg.ic.modes:
                raise ConfigError("planar runs take the IC from [ic] modes")
            _, u0, v0 = cfg.ic.modes[0]
            out.mkdir(parents=True, exist_ok=True)
            t, u, v = simulate_ode(spec, (u0, v0), cfg.sim_config())
            _write_csv(out / "trajectory.csv", "ode", ["t", "u", "v"],
                       zip(t.tolist(), u.tolist(), v.tolist()))
            return 0
        spec, ic, sim_cfg = cfg.resolve()
    except ConfigError as exc:
        return _fail(out, EXIT_CONFIG, "config", str(exc))
    try:
        out.mkdir(parents=True, exist_ok=True)
        traj = simulate(spec, ic, sim_cfg)
    except GuardError as exc:
        return _fail(out, EXIT_GUARD, "guard", str(exc))
    except BlowUpError as exc:
        return _fail(out, EXIT_BLOWUP, "blowup", str(exc))
    _dump_trajectory(traj, out)
    return 0


def cmd_spectrum(args) -> int:
    out = Path(args.out)
    try:
        cfg = _load_config(args)
        if cfg.model.kind not in ("const_c_fhn", "nh_fhn"):
            raise ConfigError("spectrum needs a const_c_fhn or nh_fhn model")
        if cfg.n_modes < 1:
            raise ConfigError("n_modes must be >= 1")
        spec = cfg.model.to_spec()
        grid = cfg.grid()
    except ConfigError as exc:
        return _fail(out, EXIT_CONFIG, "config", str(exc))
    try:
        stationary = stationary_solution(spec, grid.n)
        q = GridFunction(grid, cubic_f_prime(stationary.u.values))
        problem = SlProblem(spec.d, q)
        pairs = sl_spectrum(problem, cfg.n_modes)
    except SolverError as exc:
        return _fail(out, EXIT_SOLVER, "solver", str(exc))
    out.mkdir(parents=True, exist_ok=True)
    rows = [(p.k, p.lam, float(np.max(np.abs(p.phi.values)))) for p in pairs]
    _write_csv(out / "spectrum.csv", "spectrum", ["k", "lambda", "max_abs_phi"], rows)
    lams = [p.lam for p in pairs]
    unstable = sum(1 for lam in lams if lam < 0.0)
    summary = {
        "lambda_0": lams[0],
        "unstable_count": unstable,
        "weyl_ratio": weyl_ratio(problem, lams[-1], pairs[-1].k)
        if pairs[-1].k >= 1 else None,
    }
    if len(pairs) >= 5:
        stats = linf_uniformity_stats(pairs)
        stats["max_abs"] = [float(x) for x in stats["max_abs"]]
        summary["linf_stats"] = stats
    _write_json(out / "spectrum_summary.json", summary)
    return 0


def cmd_bifurcate(args) -> int:
    out = Path(args.out)
    try:
        cfg = _load_config(args)
        if args.samples < 1:
            raise ConfigError("need at least one sweep sample")
        spec = cfg.model.to_spec()
    except ConfigError as exc:
        return _fail(out, EXIT_CONFIG, "config", str(exc))
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    values = np.linspace(args.lo, args.hi, args.samples)
    eps = spec.epsilon
    if args.param == "alpha":
        crossings = hopf_cascade_toy((args.lo, args.hi), args.k_max,
                                     (spec.a, spec.b), 1.0)
        for alpha in values:
            for k in range(args.k_max + 1):
                lam_k = (k * np.pi / (spec.b - spec.a)) ** 2
                rows.append(_cascade_row(alpha, mode_eigenvalues(alpha - lam_k, 1.0, k)))
        summary = {"crossings": [{"k": k, "alpha": lam} for k, lam in crossings]}
    else:
        for p in values:
            problem = well_sl_problem(p, (spec.a, spec.b), spec.d,
                                      n=cfg.grid().n)
            try:
                pairs = sl_spectrum(problem, args.k_max + 1)
            except SolverError as exc:
                return _fail(out, EXIT_SOLVER, "solver", str(exc))
            for pr in pairs:
                rows.append(_cascade_row(p, mode_eigenvalues(-pr.lam, eps, pr.k)))
        summary = {}
        if args.p_star:
            try:
                p_star = find_p_star((args.lo, args.hi), (spec.a, spec.b),
                                     spec.d, n=cfg.grid().n)
                star = well_sl_problem(p_star, (spec.a, spec.b), spec.d,
                                       n=cfg.grid().n)
                summary["p_star"] = p_star
                summary["lambda_0_at_p_star"] = sl_spectrum(star, 1)[0].lam
            except ValueError as exc:
                return _fail(out, EXIT_BRACKET, "bracket", str(exc))
    _write_csv(out / "cascade.csv", "cascade",
               ["param", "k", "re_sigma1", "im_sigma1",
                "re_sigma2", "im_sigma2", "class"], rows)
    _write_json(out / "cascade_summary.json", summary)
    return 0


def _cascade_row(param, me):
    cls = classify_mode(me)
    s1, s2 = me.sigma1, me.sigma2
    return (float(param), int(me.k), s1.real, s1.imag, s2.real, s2.imag, cls.name)


def _planar_cycle_amplitude(alpha: float) -> float:
    """Amplitude of the u' = alpha u - u^3 - v, v' = u limit cycle (RK4)."""
    dt = 1e-4
    y = np.array([0.1, 0.0])

    def rhs(z):
        return np.array([alpha * z[0] - z[0] ** 3 - z[1], z[0]])

    n_settle = int(60.0 / dt)
    n_record = int(60.0 / dt)
    for _ in range(n_settle):
        k1 = rhs(y); k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2); k4 = rhs(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    us = np.empty(n_record)
    for i in range(n_record):
        k1 = rhs(y); k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2); k4 = rhs(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        us[i] = y[0]
    return 0.5 * (us.max() - us.min())


def _reproduce_verdict(name: str, cfg: RunConfig, traj_or_ode, fast: bool) -> dict:
    t_end = cfg.t_end
    window = (0.7 * t_end, t_end)
    if name in ("fig1", "fig2", "fig3", "fig4"):
        traj = traj_or_ode
        last = traj.states[-1]
        sup = float(np.max(np.abs(last.u.values)))
        from .sim import spatial_profile_stats

        std_late = spatial_profile_stats(last.u)["std"]
        mean_series = traj.series["mean_u"]
        details = {"sup_u_final": sup, "std_u_final": std_late}
        if name == "fig1":
            even = float(np.max(traj.series["defect_odd_u"]))
            details["max_odd_defect"] = even
            passed = sup < 0.05 and even <= 1e-8
        elif name == "fig2":
            try:
                per = detect_periodicity(traj.series_times, mean_series, window)
                details["mean_cycle_amplitude"] = per.amplitude
                details["regularity"] = per.regularity
                oracle = _planar_cycle_amplitude(cfg.model.alpha)
                details["planar_cycle_amplitude"] = oracle
                rel = abs(per.amplitude - oracle) / oracle
                details["amplitude_rel_err"] = rel
                passed = (std_late <= 1e-3 and per.regularity <= 0.01
                          and rel <= 0.02)
            except DetectionError as exc:
                details["periodicity_error"] = str(exc)
                passed = False
        elif name == "fig4":
            # the alpha=15 mean-mode cycle has a ~27-unit period, so the
            # amplitude is taken as the half peak-to-trough range over the
            # last two-plus cycles rather than from peak detection
            mask = traj.series_times >= 0.4 * t_end
            amp = 0.5 * float(np.ptp(mean_series[mask]))
            details["mean_cycle_amplitude"] = amp
            passed = std_late <= 1e-2 and amp >= 1.0
        else:  # fig3
            window = (0.3 * t_end, t_end)
            std_series = traj.series["std_u"]
            mask = traj.series_times >= window[0]
            details["late_std_max"] = float(np.max(std_series[mask]))
            try:
                per = detect_periodicity(traj.series_times,
                                         traj.series["max_abs_u"], window)
                details["regularity"] = per.regularity
                mean_mode = float(np.max(np.abs(mean_series[mask])))
                details["max_mean_u"] = mean_mode
                passed = (details["late_std_max"] > 0.1
                          and per.regularity <= 0.02 and mean_mode <= 1e-8)
            except DetectionError as exc:
                details["periodicity_error"] = str(exc)
                passed = False
    elif name.startswith("nhfhn"):
        traj = traj_or_ode
        if fast:
            window = (0.5 * t_end, t_end)
        else:
            window = (100.0, 200.0)
        edge = propagation_metric(traj, -46.0, window)
        center = propagation_metric(traj, 0.0, window)
        details = {
            "edge_amplitude": edge["amplitude"],
            "center_amplitude": center["amplitude"],
            "window": list(window),
        }
        if name == "nhfhn_p1.1":
            passed = edge["amplitude"] >= 1.0
        else:
            passed = (center["amplitude"] >= 1.0
                      and (not edge["detected"] or edge["amplitude"] <= 0.2))
    else:  # planar presets
        t, u, v = traj_or_ode
        c = cfg.model.c
        if name == "ode_c-1.5":
            err = float(np.hypot(u[-1] - c, v[-1] - cubic_f(c)))
            details = {"final_distance": err}
            passed = err <= 1e-6
        else:
            per = detect_periodicity(t, u, (0.5 * t[-1], t[-1]))
            details = {"amplitude": per.amplitude, "regularity": per.regularity}
            passed = per.regularity <= 0.005
    return {"preset": name, "passed": bool(passed), **details}


def cmd_reproduce(args) -> int:
    out = Path(args.out)
    try:
        cfg = preset(args.preset, fast=args.fast, seed=args.seed or 0)
    except ConfigError as exc:
        return _fail(out, EXIT_CONFIG, "config", str(exc))
    out.mkdir(parents=True, exist_ok=True)
    try:
        if cfg.model.kind == "ode_fhn":
            spec = cfg.model.to_spec()
            _, u0, v0 = cfg.ic.modes[0]
            result = simulate_ode(spec, (u0, v0), cfg.sim_config())
            t, u, v = result
            _write_csv(out / "trajectory.csv", "ode", ["t", "u", "v"],
                       zip(t.tolist(), u.tolist(), v.tolist()))
        else:
            spec, ic, sim_cfg = cfg.resolve()
            result = simulate(spec, ic, sim_cfg)
            _dump_trajectory(result, out)
    except GuardError as exc:
        return _fail(out, EXIT_GUARD, "guard", str(exc))
    except BlowUpError as exc:
        return _fail(out, EXIT_BLOWUP, "blowup", str(exc))
    verdict = _reproduce_verdict(args.preset, cfg, result, args.fast)
    _write_json(out / "verdict.json", verdict)
    print(f"{args.preset}: {'PASS' if verdict['passed'] else 'FAIL'}")
    return 0 if verdict["passed"] else EXIT_VERIFY_FAIL


def cmd_verify(args) -> int:
    out = Path(args.out)
    try:
        report = run_suite(args.suite)
    except ValueError as exc:
        return _fail(out, EXIT_CONFIG, "config", str(exc))
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / f"verify_{args.suite}.json", report)
    print(json.dumps(report, indent=2, default=float))
    return 0 if report["passed"] else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fhnlab",
        description="Numerical laboratory for a nonhomogeneous "
                    "FitzHugh-Nagumo system and its toy model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="experiment config (INI)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--fast", action="store_true",
                       help="reduced-resolution smoke run")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for random initial conditions")

    p = sub.add_parser("simulate", help="run one experiment from a config")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", help="Sturm-Liouville spectrum of the "
                                        "linearization about the stationary state")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bifurcate", help="parameter sweep of mode eigenvalues")
    common(p)
    p.add_argument("--param", choices=("alpha", "p"), default="alpha")
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--samples", type=int, default=11)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--p-star", action="store_true",
                   help="also bisect for the stability crossing in p")
    p.set_defaults(func=cmd_bifurcate)

    p = sub.add_parser("reproduce", help="run a named experiment preset")
    common(p)
    p.add_argument("preset", choices=PRESET_NAMES)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("verify", help="run a self-check suite")
    common(p)
    p.add_argument("suite", choices=SUITE_NAMES)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    _setup_threads()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
