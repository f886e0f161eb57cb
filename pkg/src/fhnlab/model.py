"""Model family: cubic nonlinearity, excitability profiles c(x), stationary states.

Five systems are covered by one spec type: the planar oscillator
(eps u' = f(u) - v, v' = u - c), the linear and nonlinear cosine-basis toy
models on (0,1), and the cubic reaction-diffusion system with constant or
space-dependent recovery target c(x) on a general interval.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np

from .grid import GridFunction, StateField, UniformGrid, neumann_laplacian

__all__ = [
    "ModelKind",
    "ConstantProfile",
    "WellProfile",
    "TabulatedProfile",
    "CProfile",
    "ModelSpec",
    "toy_spec",
    "cubic_f",
    "cubic_f_prime",
    "cubic_f_second",
    "c_eval",
    "validate_c_profile",
    "stationary_solution",
    "ode_rhs",
]


def cubic_f(u):
    """Cubic reaction term -u^3 + 3u (odd; folds at u = +-1)."""
    u = np.asarray(u, dtype=float)
    out = -u ** 3 + 3.0 * u
    return float(out) if out.ndim == 0 else out


def cubic_f_prime(u):
    """-3u^2 + 3; even, bounded above by 3 (attained at u = 0)."""
    u = np.asarray(u, dtype=float)
    out = -3.0 * u ** 2 + 3.0
    return float(out) if out.ndim == 0 else out


def cubic_f_second(u):
    """-6u."""
    u = np.asarray(u, dtype=float)
    out = -6.0 * u
    return float(out) if out.ndim == 0 else out


class ModelKind(enum.Enum):
    ODE_FHN = "ode_fhn"
    TOY_LINEAR = "toy_linear"
    TOY_NONLINEAR = "toy_nonlinear"
    CONST_C_FHN = "const_c_fhn"
    NH_FHN = "nh_fhn"


@dataclass(frozen=True)
class ConstantProfile:
    c: float


@dataclass(frozen=True)
class WellProfile:
    """Quartic excitability well c(x) = p (xh^4 - 2 xh^2) in the normalized
    coordinate xh = (x - midpoint) / half_width.

    Normalizing the argument makes c(a) = c(b) = -p and c(midpoint) = 0 hold
    on any interval, and keeps the well conditions (sign, monotone halves,
    flat endpoints, pointwise decreasing in p) independent of the domain.
    """

    p: float

    def __post_init__(self):
        if self.p <= 0:
            raise ValueError(f"well depth p must be positive, got {self.p}")


@dataclass(frozen=True)
class TabulatedProfile:
    """Measured/custom excitability map; linear interpolation between samples."""

    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n,):
            raise ValueError("tabulated profile length must match its grid")
        object.__setattr__(self, "values", vals)


CProfile = Union[ConstantProfile, WellProfile, TabulatedProfile]


@dataclass(frozen=True)
class ModelSpec:
    """Which system, its parameters, its domain, and its c profile.

    Toy models fix epsilon = d = 1 on (0,1); alpha only applies to them.
    FHN variants carry a c profile (a plain constant for CONST_C_FHN).
    """

    kind: ModelKind
    epsilon: float = 1.0
    d: float = 1.0
    alpha: float = 0.0
    a: float = 0.0
    b: float = 1.0
    c_profile: CProfile | None = None

    def __post_init__(self):
        if self.epsilon <= 0 or self.d <= 0:
            raise ValueError("epsilon and d must be positive")
        if not self.a < self.b:
            raise ValueError(f"need a < b, got ({self.a}, {self.b})")
        if self.kind in (ModelKind.ODE_FHN, ModelKind.CONST_C_FHN, ModelKind.NH_FHN):
            if self.c_profile is None:
                raise ValueError(f"{self.kind.value} requires a c profile")

    @property
    def domain(self) -> tuple[float, float]:
        return (self.a, self.b)

    def c_values(self, grid: UniformGrid) -> np.ndarray:
        if self.c_profile is None:
            return np.zeros(grid.n)
        return c_eval(self.c_profile, grid.x, self.domain)

    @property
    def c_constant(self) -> float:
        """The constant c for ODE/constant-c variants."""
        if not isinstance(self.c_profile, ConstantProfile):
            raise ValueError("model does not have a constant c profile")
        return self.c_profile.c


def toy_spec(alpha: float, linear: bool = False) -> ModelSpec:
    """Toy model on (0,1) with epsilon = d = 1."""
    kind = ModelKind.TOY_LINEAR if linear else ModelKind.TOY_NONLINEAR
    return ModelSpec(kind=kind, alpha=alpha)


def c_eval(profile: CProfile, x, domain: tuple[float, float]):
    """Evaluate a c profile at position(s) x in [a, b]."""
    a, b = domain
    xs = np.asarray(x, dtype=float)
    if np.any(xs < a - 1e-12 * (b - a)) or np.any(xs > b + 1e-12 * (b - a)):
        raise ValueError(f"position outside domain [{a}, {b}]")
    if isinstance(profile, ConstantProfile):
        out = np.full_like(xs, profile.c)
    elif isinstance(profile, WellProfile):
        xh = (xs - 0.5 * (a + b)) / (0.5 * (b - a))
        out = profile.p * (xh ** 4 - 2.0 * xh ** 2)
    elif isinstance(profile, TabulatedProfile):
        out = np.interp(xs, profile.grid.x, profile.values)
    else:
        raise TypeError(f"unknown profile type {type(profile)!r}")
    return float(out) if out.ndim == 0 else out


def validate_c_profile(
    profile: CProfile, domain: tuple[float, float], n: int = 2001
) -> list[str]:
    """Check the seven well conditions on a sample grid; return violations.

    Conditions: c <= 0; c(mid) = 0; c increasing left / decreasing right of
    the midpoint; c'(a) = c'(b) = 0; and, for parametric families, c pointwise
    decreasing in p with limits 0 (p -> 0) and -inf (p -> inf) off the
    midpoint. Violations are data, not errors.
    """
    a, b = domain
    grid = UniformGrid(a, b, n)
    c = c_eval(profile, grid.x, domain)
    h = grid.h
    scale = max(np.max(np.abs(c)), 1.0)
    tol = 1e-9 * scale
    violations: list[str] = []

    if np.any(c > tol):
        violations.append("nonpositivity: c(x) > 0 somewhere on (a,b)")
    mid = 0.5 * (a + b)
    if abs(c_eval(profile, mid, domain)) > tol:
        violations.append("midpoint: c((a+b)/2) != 0")

    # Centered interior derivative; one-sided second-order at the endpoints.
    dc = np.empty_like(c)
    dc[1:-1] = (c[2:] - c[:-2]) / (2 * h)
    dc[0] = (-3 * c[0] + 4 * c[1] - c[2]) / (2 * h)
    dc[-1] = (3 * c[-1] - 4 * c[-2] + c[-3]) / (2 * h)
    left = (grid.x > a + h) & (grid.x < mid - h)
    right = (grid.x > mid + h) & (grid.x < b - h)
    if np.any(dc[left] <= 0):
        violations.append("monotonicity: c not increasing on the left half")
    if np.any(dc[right] >= 0):
        violations.append("monotonicity: c not decreasing on the right half")
    # One-sided endpoint derivatives are O(h^2); allow that much slack.
    end_tol = max(10.0 * scale * h ** 2 / (b - a) ** 2 * 4, 1e-8)
    if abs(dc[0]) > end_tol or abs(dc[-1]) > end_tol:
        violations.append("flat endpoints: c'(a) or c'(b) != 0")

    if isinstance(profile, WellProfile):
        # c = p * s(x) with s <= 0: decreasing in p wherever s < 0, and the
        # p -> 0 / p -> +inf limits follow from linearity in p. Verify
        # monotonicity by direct evaluation at a larger p.
        bigger = c_eval(WellProfile(2.0 * profile.p), grid.x, domain)
        off_mid = np.abs(grid.x - mid) > h
        if np.any(bigger[off_mid] > c[off_mid] + tol):
            violations.append("p-monotonicity: c not decreasing in p off midpoint")
    else:
        violations.append("p-dependence: profile has no excitability parameter p")
    return violations


def stationary_solution(spec: ModelSpec, n: int) -> StateField:
    """Discrete stationary state: ubar = c(x), vbar = f(ubar) + d * Lap ubar.

    Uses the same discrete Neumann Laplacian as the simulator so the result is
    an exact fixed point of the discrete dynamics.
    """
    if spec.kind not in (ModelKind.CONST_C_FHN, ModelKind.NH_FHN):
        raise ValueError("stationary_solution applies to the FHN PDE variants")
    if spec.kind is ModelKind.NH_FHN:
        bad = validate_c_profile(spec.c_profile, spec.domain)
        if bad:
            warnings.warn(f"c profile violates well conditions: {bad}", stacklevel=2)
    grid = UniformGrid(spec.a, spec.b, n)
    ubar = GridFunction(grid, spec.c_values(grid))
    vbar_vals = cubic_f(ubar.values) + spec.d * neumann_laplacian(ubar).values
    return StateField(ubar, GridFunction(grid, vbar_vals))


def ode_rhs(spec: ModelSpec, state: tuple[float, float]) -> tuple[float, float]:
    """Planar system: du = (f(u) - v)/eps, dv = u - c."""
    if spec.kind is not ModelKind.ODE_FHN:
        raise ValueError("ode_rhs applies to the planar model only")
    u, v = state
    du = (cubic_f(u) - v) / spec.epsilon
    dv = u - spec.c_constant
    return (du, dv)
