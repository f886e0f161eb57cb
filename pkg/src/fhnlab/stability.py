"""Mode-wise linear stability and the Hopf-bifurcation cascades.

Every projected mode is a planar system eps s^2 - mu s + 1 = 0 where mu is
the mode gain: alpha - lambda_k for the toy model (eps = 1), f'(c) - d
lambda_k for constant c, and -lambda_k^SL for the nonhomogeneous system. A
mode destabilizes exactly when mu crosses 0, which is a Hopf crossing since
the root product 1/eps stays positive.
"""
from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .grid import GridFunction, UniformGrid, quad
from .model import WellProfile, c_eval, cubic_f, cubic_f_prime
from .spectral import cosine_eigenvalue
from .sturm import EigenPair, SlProblem, rayleigh_quotient, sl_eigenvalue

__all__ = [
    "ModeEigenvalues",
    "ModeClass",
    "CascadeReport",
    "mode_eigenvalues",
    "classify_mode",
    "hopf_cascade_toy",
    "toy_unstable_count",
    "unstable_mode_count_nhfhn",
    "integral_instability_criterion",
    "well_sl_problem",
    "find_p_star",
    "ode_hopf_analysis",
]

CENTER_TOL = 1e-12


@dataclass(frozen=True)
class ModeEigenvalues:
    k: int
    sigma1: complex
    sigma2: complex


class ModeClass(enum.Enum):
    SOURCE = "source"
    SINK = "sink"
    CENTER = "center"


@dataclass(frozen=True)
class CascadeReport:
    parameter: float
    modes: tuple[ModeEigenvalues, ...]
    classes: tuple[ModeClass, ...]
    unstable_count: int
    truncation_saturated: bool = True


def mode_eigenvalues(mu: float, epsilon: float = 1.0, k: int = 0) -> ModeEigenvalues:
    """Roots of eps s^2 - mu s + 1 = 0: s = (mu +- sqrt(mu^2 - 4 eps)) / (2 eps)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    disc = cmath.sqrt(complex(mu * mu - 4.0 * epsilon))
    s1 = (mu - disc) / (2.0 * epsilon)
    s2 = (mu + disc) / (2.0 * epsilon)
    return ModeEigenvalues(k, s1, s2)


def classify_mode(me: ModeEigenvalues, center_tol: float = CENTER_TOL) -> ModeClass:
    top = max(me.sigma1.real, me.sigma2.real)
    if abs(top) <= center_tol:
        return ModeClass.CENTER
    return ModeClass.SOURCE if top > 0 else ModeClass.SINK


def hopf_cascade_toy(
    alpha_range: tuple[float, float],
    k_max: int,
    domain: tuple[float, float] = (0.0, 1.0),
    d: float = 1.0,
) -> list[tuple[int, float]]:
    """Crossing locations alpha = lambda_k inside the range, as (k, alpha)."""
    lo, hi = alpha_range
    out = []
    for k in range(k_max + 1):
        lam = cosine_eigenvalue(k, domain, d)
        if lo < lam < hi:
            out.append((k, lam))
    return out


def toy_unstable_count(
    alpha: float, k_max: int, domain: tuple[float, float] = (0.0, 1.0), d: float = 1.0
) -> int:
    """Number of modes k <= k_max with positive mode gain alpha - lambda_k."""
    return sum(
        1 for k in range(k_max + 1) if alpha - cosine_eigenvalue(k, domain, d) > 0
    )


def unstable_mode_count_nhfhn(
    sl_lambdas: list[float], epsilon: float
) -> CascadeReport:
    """Classify nhFHN modes from an SL spectrum (mode gain mu_k = -lambda_k).

    The growth-rate ceiling 3/eps follows from lambda_0 >= -3; it is asserted
    here. The count is saturated only if the last retained lambda is already
    positive.
    """
    modes = tuple(
        mode_eigenvalues(-lam, epsilon, k) for k, lam in enumerate(sl_lambdas)
    )
    ceiling = 3.0 / epsilon + 1e-9
    for me in modes:
        if max(me.sigma1.real, me.sigma2.real) > ceiling:
            raise SolverError(
                f"mode {me.k} growth rate exceeds 3/eps: {me.sigma2.real:.6g}"
            )
    classes = tuple(classify_mode(me) for me in modes)
    count = sum(1 for c in classes if c is ModeClass.SOURCE)
    saturated = sl_lambdas[-1] > 0
    return CascadeReport(float("nan"), modes, classes, count, saturated)


def integral_instability_criterion(problem: SlProblem) -> tuple[bool, float]:
    """(predicate, margin) for int f'(ubar) dx > 0.

    When the predicate holds, the constant test function certifies
    lambda_0 <= -mean(f'(ubar)) < 0 through the Rayleigh quotient.
    """
    margin = quad(problem.potential)
    unstable = margin > 0
    if unstable:
        const = GridFunction(problem.grid, np.ones(problem.grid.n))
        rq = rayleigh_quotient(problem, const)
        if rq >= 0:
            raise SolverError(
                f"integral criterion positive but Rayleigh bound {rq:.6g} >= 0"
            )
    return unstable, margin


def well_sl_problem(
    p: float, domain: tuple[float, float], d: float = 1.0, n: int = 2001
) -> SlProblem:
    """SL problem with potential f'(c_p(x)) for the quartic well family."""
    grid = UniformGrid(domain[0], domain[1], n)
    ubar = c_eval(WellProfile(p), grid.x, domain)
    return SlProblem(d, GridFunction(grid, cubic_f_prime(ubar)))


def find_p_star(
    bracket: tuple[float, float],
    domain: tuple[float, float] = (-50.0, 50.0),
    d: float = 1.0,
    n: int = 2001,
    tol: float = 1e-6,
) -> float:
    """Excitability threshold p* where the ground SL eigenvalue crosses zero.

    Bisection on p over the bracket; requires lambda_0(p_lo) < 0 <
    lambda_0(p_hi). lambda_0 is increasing in p (deeper wells shrink the
    region where f'(c) > 0).
    """
    p_lo, p_hi = bracket
    lam0 = lambda p: sl_eigenvalue(well_sl_problem(p, domain, d, n), 0)
    f_lo, f_hi = lam0(p_lo), lam0(p_hi)
    if not (f_lo < 0 < f_hi):
        raise ValueError(
            f"bracket does not straddle the crossing: lambda_0({p_lo})={f_lo:.6g}, "
            f"lambda_0({p_hi})={f_hi:.6g}"
        )
    for _ in range(200):
        p_mid = 0.5 * (p_lo + p_hi)
        f_mid = lam0(p_mid)
        if abs(f_mid) <= tol:
            return p_mid
        if f_mid < 0:
            p_lo = p_mid
        else:
            p_hi = p_mid
    raise SolverError("p* bisection did not converge")


def ode_hopf_analysis(c: float, epsilon: float = 1.0) -> dict:
    """Stability of the planar fixed point (c, f(c)).

    Jacobian [[f'(c)/eps, -1/eps], [1, 0]]: trace f'(c)/eps, determinant
    1/eps > 0, so the trace sign decides and the trace vanishes exactly at
    |c| = 1.
    """
    fp = cubic_f_prime(c)
    me = mode_eigenvalues(fp, epsilon)
    return {
        "fixed_point": (c, cubic_f(c)),
        "trace": fp / epsilon,
        "eigenvalues": (me.sigma1, me.sigma2),
        "hopf": fp == 0.0,
        "stable": fp < 0.0,
    }
