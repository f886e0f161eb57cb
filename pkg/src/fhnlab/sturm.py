"""Regular Sturm-Liouville eigensolver via the Pruefer phase equation.

Operator convention: L u = -d u_xx - q(x) u with q = f'(ubar) and Neumann
conditions, so the eigenvalues form an increasing sequence with lambda_0 >=
-max q >= -3 and Weyl growth d k^2 pi^2 / (b-a)^2. With this convention the
phase equation theta' = cos^2(theta) + ((q + lambda)/d) sin^2(theta),
theta(a) = pi/2, hits theta(b) = pi/2 + k pi exactly at lambda = lambda_k,
and theta(b) is strictly increasing in lambda, so bracketing plus bisection
is robust.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import SolverError
from .grid import (
    GridFunction,
    UniformGrid,
    first_derivative,
    l2_norm,
    quad,
)

__all__ = [
    "SlProblem",
    "EigenPair",
    "prufer_theta_end",
    "sl_eigenvalue",
    "sl_eigenfunction",
    "sl_spectrum",
    "weyl_ratio",
    "rayleigh_quotient",
    "linf_uniformity_stats",
]

_BISECT_TOL = 1e-9
# The unscaled phase equation has rate up to max(1, (q+lam)/d); RK4 substeps
# cap the per-step phase advance at this many radians.
_MAX_PHASE_PER_STEP = 0.05


@dataclass(frozen=True)
class SlProblem:
    """-d u'' - q(x) u = lambda u on the potential's grid, Neumann both ends."""

    d: float
    potential: GridFunction

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError("diffusion coefficient must be positive")

    @property
    def grid(self) -> UniformGrid:
        return self.potential.grid

    @property
    def domain(self) -> tuple[float, float]:
        return (self.grid.a, self.grid.b)


@dataclass(frozen=True)
class EigenPair:
    k: int
    lam: float
    phi: GridFunction


def _substeps(problem: SlProblem, lam: float) -> int:
    """RK4 substeps per grid cell resolving the fastest local oscillation."""
    q_max = float(np.max(problem.potential.values))
    rate = max((q_max + abs(lam)) / problem.d, 1.0)
    h = problem.grid.h
    return max(2, int(np.ceil(rate * h / _MAX_PHASE_PER_STEP)))


def _potential_half_samples(problem: SlProblem, m: int) -> tuple[np.ndarray, float]:
    """Potential at half-step resolution for m substeps per cell."""
    grid = problem.grid
    n_steps = m * (grid.n - 1)
    xs = np.linspace(grid.a, grid.b, 2 * n_steps + 1)
    q = np.interp(xs, grid.x, problem.potential.values)
    return q, (grid.b - grid.a) / n_steps


def prufer_theta_end(problem: SlProblem, lam: float) -> float:
    """Terminal phase theta(b; lambda) from theta(a) = pi/2."""
    m = _substeps(problem, lam)
    q_half, h_step = _potential_half_samples(problem, m)
    return float(_kernels.theta_end(q_half, h_step, lam, problem.d))


def sl_eigenvalue(problem: SlProblem, k: int, tol: float = _BISECT_TOL) -> float:
    """The unique lambda with theta(b; lambda) = pi/2 + k pi, by bisection."""
    if k < 0:
        raise ValueError("mode index must be nonnegative")
    target = np.pi / 2.0 + k * np.pi
    length = problem.grid.b - problem.grid.a
    q_mean = quad(problem.potential) / length
    q_span = float(np.ptp(problem.potential.values))
    guess = problem.d * (k * np.pi / length) ** 2 - q_mean
    width = max(q_span, 1.0)

    lo, hi = guess - width, guess + width
    for _ in range(80):
        if prufer_theta_end(problem, lo) < target:
            break
        width *= 2.0
        lo = guess - width
    else:
        raise SolverError(
            f"bracket expansion failed below (k={k}, lo={lo:.3g}, "
            f"theta(b)={prufer_theta_end(problem, lo):.6g}, target={target:.6g})"
        )
    for _ in range(80):
        if prufer_theta_end(problem, hi) > target:
            break
        width *= 2.0
        hi = guess + width
    else:
        raise SolverError(
            f"bracket expansion failed above (k={k}, hi={hi:.3g}, "
            f"theta(b)={prufer_theta_end(problem, hi):.6g}, target={target:.6g})"
        )

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if prufer_theta_end(problem, mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sl_eigenfunction(problem: SlProblem, k: int, lam: float) -> EigenPair:
    """Reconstruct u = r sin(theta) on the grid nodes, normalized in L2.

    The amplitude is integrated in log form to avoid overflow; the sign
    convention u(a) > 0 is automatic from r(a) = 1, theta(a) = pi/2.
    """
    m = _substeps(problem, lam)
    q_half, h_step = _potential_half_samples(problem, m)
    thetas, logrs = _kernels.theta_logr_path(q_half, h_step, lam, problem.d, m)
    logrs = logrs - np.max(logrs)
    vals = np.exp(logrs) * np.sin(thetas)
    phi = GridFunction(problem.grid, vals)
    norm = l2_norm(phi)
    if norm == 0.0:
        raise SolverError(f"degenerate eigenfunction for k={k}, lambda={lam}")
    return EigenPair(k, lam, GridFunction(problem.grid, vals / norm))


def sl_spectrum(problem: SlProblem, n_modes: int) -> list[EigenPair]:
    """First n_modes eigenpairs, with monotonicity and lower-bound checks."""
    if n_modes < 1:
        raise ValueError("need n_modes >= 1")
    pairs = []
    q_max = float(np.max(problem.potential.values))
    prev = -np.inf
    for k in range(n_modes):
        lam = sl_eigenvalue(problem, k)
        if lam <= prev:
            raise SolverError(f"spectrum not strictly increasing at k={k}")
        if lam < -q_max - 1e-6:
            raise SolverError(f"lambda_{k}={lam} below the -max(q) bound")
        pairs.append(sl_eigenfunction(problem, k, lam))
        prev = lam
    return pairs


def weyl_ratio(problem: SlProblem, lam: float, k: int) -> float:
    """lambda_k over its leading Weyl term d k^2 pi^2 / (b-a)^2."""
    if k < 1:
        raise ValueError("Weyl ratio needs k >= 1")
    length = problem.grid.b - problem.grid.a
    return lam / (problem.d * (k * np.pi / length) ** 2)


def rayleigh_quotient(problem: SlProblem, u: GridFunction) -> float:
    """(d int u_x^2 - int q u^2) / int u^2; >= lambda_0 up to O(h^2)."""
    nrm2 = l2_norm(u) ** 2
    if nrm2 == 0.0:
        raise ValueError("Rayleigh quotient of the zero function")
    ux = first_derivative(u)
    num = problem.d * l2_norm(ux) ** 2 - quad(
        GridFunction(u.grid, problem.potential.values * u.values ** 2)
    )
    return num / nrm2


def linf_uniformity_stats(spectrum: list[EigenPair]) -> dict:
    """Sup-norm per eigenfunction and the growth ratio over the first five."""
    if len(spectrum) < 5:
        raise ValueError("need at least 5 eigenpairs")
    max_abs = np.array([np.max(np.abs(p.phi.values)) for p in spectrum])
    head = float(np.max(max_abs[:5]))
    ratio = float(np.max(max_abs)) / head
    return {
        "max_abs": max_abs,
        "ratio_to_first5": ratio,
        "growing": bool(max_abs[-1] > 1.5 * head),
    }
