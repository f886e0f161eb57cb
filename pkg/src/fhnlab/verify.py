"""Self-check suites wiring the analytic oracles to the numerical modules.

Each suite returns a JSON-serializable report: a list of named checks with
the measured error and a pass flag. These are desk-scale runs (seconds,
not minutes); the full-scale versions live in the acceptance test suite.
"""
from __future__ import annotations

import itertools

import numpy as np

from .grid import GridFunction, StateField, UniformGrid, l2_norm
from .model import cubic_f_prime, toy_spec
from .sim import SimConfig, energy_trace, simulate, symmetry_invariance_check
from .spectral import (
    CosineBasis,
    analyze,
    quad_product_nonzero,
    quad_product_value,
    synthesize,
    triple_product,
)
from .sturm import SlProblem, sl_spectrum, weyl_ratio
from .grid import Parity

__all__ = ["run_suite", "SUITE_NAMES"]

SUITE_NAMES = ("lemmas", "sturm", "energy", "backends", "symmetry", "all")


def _check(name: str, passed: bool, **details) -> dict:
    out = {"name": name, "passed": bool(passed)}
    out.update({k: (float(v) if isinstance(v, (int, float, np.floating)) else v)
                for k, v in details.items()})
    return out


def _quad_triple(k: int, m: int, n: int, basis: CosineBasis, x: np.ndarray) -> float:
    w = np.full(x.size, x[1] - x[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return float(np.sum(w * basis.eval(k, x) * basis.eval(m, x) * basis.eval(n, x)))


def suite_lemmas(max_triple: int = 8, max_quad: int = 6) -> list[dict]:
    basis = CosineBasis(0.0, 1.0)
    x = np.linspace(0.0, 1.0, 4001)
    worst_triple = 0.0
    worst_value = 0.0
    for k, m, n in itertools.product(range(1, max_triple + 1), repeat=3):
        closed = triple_product(k, m, n)
        quad = _quad_triple(k, m, n, basis, x)
        worst_triple = max(worst_triple, abs(closed - quad))
        if closed != 0.0:
            worst_value = max(worst_value, abs(abs(closed) - np.sqrt(2.0) / 2.0))
    checks = [
        _check("triple_vs_quadrature", worst_triple <= 1e-8, max_err=worst_triple),
        _check("triple_nonzero_value", worst_value <= 1e-8, max_err=worst_value),
    ]
    worst_pred = True
    for idx in itertools.product(range(1, max_quad + 1), repeat=4):
        value = quad_product_value(*idx)
        predicted = quad_product_nonzero(*idx)
        if predicted != (abs(value) > 1e-8):
            worst_pred = False
    checks.append(_check("quadruple_predicate", worst_pred))
    return checks


def suite_sturm() -> list[dict]:
    checks = []
    grid = UniformGrid(0.0, 1.0, 2001)
    for c in (0.0, -1.5, -2.0):
        q = GridFunction(grid, np.full(grid.n, cubic_f_prime(c)))
        problem = SlProblem(1.0, q)
        pairs = sl_spectrum(problem, 10)
        exact = np.array([k * k * np.pi * np.pi - cubic_f_prime(c) for k in range(10)])
        got = np.array([p.lam for p in pairs])
        rel = np.max(np.abs(got - exact) / np.maximum(1.0, np.abs(exact)))
        checks.append(_check(f"constant_potential_c={c}", rel <= 1e-6, rel_err=rel))
        checks.append(_check(f"lam0_lower_bound_c={c}", got[0] >= -3.0 - 1e-9,
                             lam0=got[0]))
    wr = weyl_ratio(problem, sl_spectrum(problem, 21)[-1].lam, 20)
    checks.append(_check("weyl_ratio_k20", abs(wr - 1.0) <= 0.05, ratio=wr))
    return checks


def suite_energy() -> list[dict]:
    grid = UniformGrid(0.0, 1.0, 51)
    spec = toy_spec(1.0)
    mid = 0.5
    u = np.where(grid.x < mid, 1.0, -0.5)
    u[np.isclose(grid.x, mid)] = 0.25
    ic = StateField(GridFunction(grid, u), GridFunction(grid, u.copy()))
    warm = simulate(spec, ic, SimConfig(dt=1e-5, t_end=2.0, record_every=200000))
    traj = simulate(spec, warm.states[-1],
                    SimConfig(dt=1e-5, t_end=10.0, record_every=100000,
                              series_every=100))
    et = energy_trace(traj)
    ratio = np.nanmax(np.abs(et["residual"][1:-1])
                      / (1e-4 * np.maximum(1.0, np.abs(et["rate"][1:-1]))))
    checks = [_check("residual_budget_fig2", ratio <= 1.0, budget_ratio=ratio)]

    dspec = toy_spec(-0.5)
    basis = CosineBasis(0.0, 1.0)
    rng = np.random.default_rng(7)
    u0 = sum(rng.uniform(-1, 1) * basis.eval(k, grid.x) for k in range(4))
    dic = StateField(GridFunction(grid, u0), GridFunction(grid, np.zeros(grid.n)))
    dtraj = simulate(dspec, dic,
                     SimConfig(dt=1e-5, t_end=10.0, record_every=10000,
                               series_every=10))
    det = energy_trace(dtraj)
    dr = np.nanmax(np.abs(det["residual"][1:-1])
                   / (1e-4 * np.maximum(1.0, np.abs(det["rate"][1:-1]))))
    mono = bool(np.all(np.diff(det["energy"]) <= 1e-12))
    checks.append(_check("residual_budget_decay", dr <= 1.0, budget_ratio=dr))
    checks.append(_check("energy_monotone_decay", mono))
    return checks


def suite_backends() -> list[dict]:
    spec = toy_spec(1.0)
    basis = CosineBasis(0.0, 1.0)
    fine = UniformGrid(0.0, 1.0, 101)
    rng = np.random.default_rng(11)
    coeffs = np.zeros(33)
    coeffs[:6] = rng.uniform(-0.5, 0.5, 6)
    u0 = synthesize(coeffs, fine, basis)
    ic = StateField(u0, GridFunction(fine, np.zeros(fine.n)))
    cfg_fd = SimConfig(dt=2e-5, t_end=5.0, record_every=50000)
    traj_fd = simulate(spec, ic, cfg_fd)
    cfg_g = SimConfig(dt=2e-5, t_end=5.0, record_every=50000,
                      backend="galerkin", n_modes=32)
    traj_g = simulate(spec, ic, cfg_g)
    gal = traj_g.states[-1].u
    fd = traj_fd.states[-1].u
    resampled = np.interp(fd.grid.x, gal.grid.x, gal.values)
    dist = l2_norm(GridFunction(fd.grid, fd.values - resampled))
    return [_check("fd_vs_galerkin_T5", dist <= 1e-3, l2_distance=dist)]


def suite_symmetry() -> list[dict]:
    grid = UniformGrid(0.0, 1.0, 51)
    spec = toy_spec(1.0)
    mid = 0.5
    cfg = SimConfig(dt=1e-5, t_end=5.0, record_every=50000)

    checks = []
    u = np.where(grid.x < mid, 1.0, -1.0)
    u[np.isclose(grid.x, mid)] = 0.0
    odd_ic = StateField(GridFunction(grid, u), GridFunction(grid, u.copy()))
    rep = symmetry_invariance_check(spec, odd_ic, cfg, Parity.ODD)
    checks.append(_check("odd_ic_even_modes", rep["max_forbidden_coeff"] <= 1e-8,
                         max_coeff=rep["max_forbidden_coeff"]))

    basis = CosineBasis(0.0, 1.0)
    even_vals = 0.5 * basis.eval(2, grid.x)
    even_ic = StateField(GridFunction(grid, even_vals),
                         GridFunction(grid, np.zeros(grid.n)))
    rep = symmetry_invariance_check(spec, even_ic, cfg, Parity.EVEN)
    checks.append(_check("even_ic_odd_modes", rep["max_forbidden_coeff"] <= 1e-8,
                         max_coeff=rep["max_forbidden_coeff"]))

    asym = np.where(grid.x < mid, 1.0, -0.5)
    asym[np.isclose(grid.x, mid)] = 0.25
    asym_ic = StateField(GridFunction(grid, asym), GridFunction(grid, asym.copy()))
    traj = simulate(spec, asym_ic, SimConfig(dt=1e-5, t_end=0.1, record_every=10000))
    defect = float(traj.series["defect_odd_u"][0])
    checks.append(_check("asymmetric_negative_control", defect > 0.1, defect=defect))
    return checks


_SUITES = {
    "lemmas": suite_lemmas,
    "sturm": suite_sturm,
    "energy": suite_energy,
    "backends": suite_backends,
    "symmetry": suite_symmetry,
}


def run_suite(name: str) -> dict:
    """Run one named suite (or ``all``); returns a report dict."""
    if name == "all":
        reports = [run_suite(s) for s in _SUITES]
        return {
            "suite": "all",
            "passed": all(r["passed"] for r in reports),
            "suites": reports,
        }
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITE_NAMES}")
    checks = _SUITES[name]()
    return {
        "suite": name,
        "passed": all(c["passed"] for c in checks),
        "checks": checks,
    }
