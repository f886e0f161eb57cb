"""Uniform spatial grid, Neumann Laplacian, quadrature, norms, and parity utilities.

All operations are pure functions over immutable inputs. The Laplacian uses
ghost-node reflection at both ends so that it is self-adjoint with respect to
trapezoid quadrature; the discrete energy identities used elsewhere depend on
this integration-by-parts structure.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ResolutionError

__all__ = [
    "UniformGrid",
    "GridFunction",
    "StateField",
    "Parity",
    "neumann_laplacian",
    "first_derivative",
    "quad",
    "l2_norm",
    "h1_seminorm",
    "state_norm",
    "reflect",
    "symmetry_defect",
]


@dataclass(frozen=True)
class UniformGrid:
    """Uniform grid of ``n`` nodes on [a, b], spacing h = (b - a) / (n - 1)."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got ({self.a}, {self.b})")
        if self.n < 3:
            raise ResolutionError(f"need at least 3 nodes, got n={self.n}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.n)

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)


@dataclass(frozen=True)
class GridFunction:
    """Real-valued samples on a uniform grid."""

    grid: UniformGrid
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid function contains non-finite values")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class StateField:
    """The pair (u, v) on a shared grid."""

    u: GridFunction
    v: GridFunction

    def __post_init__(self):
        if self.u.grid != self.v.grid:
            raise ValueError("u and v must share a grid")

    @property
    def grid(self) -> UniformGrid:
        return self.u.grid


class Parity(enum.Enum):
    ODD = "odd"
    EVEN = "even"


def neumann_laplacian(f: GridFunction) -> GridFunction:
    """Second difference with ghost-node reflection at both ends.

    Interior: (f[i-1] - 2 f[i] + f[i+1]) / h^2.  Endpoints use the reflected
    ghost values f[-1] = f[1] and f[n] = f[n-2], giving 2 (f[1] - f[0]) / h^2
    and 2 (f[n-2] - f[n-1]) / h^2.
    """
    v = f.values
    h2 = f.grid.h ** 2
    out = np.empty_like(v)
    out[1:-1] = ((v[:-2] + v[2:]) - 2.0 * v[1:-1]) / h2
    out[0] = 2.0 * (v[1] - v[0]) / h2
    out[-1] = 2.0 * (v[-2] - v[-1]) / h2
    return GridFunction(f.grid, out)


def first_derivative(f: GridFunction) -> GridFunction:
    """Centered first difference; second-order one-sided stencils at the ends."""
    v = f.values
    h = f.grid.h
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    out[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    return GridFunction(f.grid, out)


def quad(f: GridFunction) -> float:
    """Composite trapezoid value of the integral over [a, b]."""
    return float(np.trapezoid(f.values, dx=f.grid.h))


def _quad_values(values: np.ndarray, h: float) -> float:
    return float(np.trapezoid(values, dx=h))


def l2_norm(f: GridFunction) -> float:
    return np.sqrt(max(_quad_values(f.values ** 2, f.grid.h), 0.0))


def h1_seminorm(f: GridFunction) -> float:
    return l2_norm(first_derivative(f))


def state_norm(s: StateField, epsilon: float = 1.0) -> float:
    """sqrt(eps ||u||^2 + ||v||^2); eps = 1 gives the plain product norm."""
    return float(np.sqrt(epsilon * l2_norm(s.u) ** 2 + l2_norm(s.v) ** 2))


def reflect(f: GridFunction) -> GridFunction:
    """Mirror about the interval midpoint (exact index reversal)."""
    return GridFunction(f.grid, f.values[::-1].copy())


def symmetry_defect(f: GridFunction, parity: Parity) -> float:
    """L2 size of the component violating the requested parity about the midpoint.

    Odd: ||f(x) + f(a+b-x)||; Even: ||f(x) - f(a+b-x)||.
    """
    mirrored = f.values[::-1]
    if parity is Parity.ODD:
        diff = f.values + mirrored
    else:
        diff = f.values - mirrored
    return np.sqrt(max(_quad_values(diff ** 2, f.grid.h), 0.0))
