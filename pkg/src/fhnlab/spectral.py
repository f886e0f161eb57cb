"""Cosine eigenbasis of the Neumann Laplacian and the truncated toy dynamics.

The basis on (a, b) is phi_0 = 1/sqrt(b-a), phi_k = sqrt(2/(b-a)) cos(k pi
(x-a)/(b-a)) with eigenvalues d k^2 pi^2 / (b-a)^2; on (0,1) with d = 1 this
reduces to the sqrt(2) cos(k pi x) family. Triple products of positive-index
modes have the closed value sqrt(2)/2 when exactly one index equals the sum of
the other two; quadruple products only get a zero/nonzero predicate here, with
values always computed by quadrature.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResolutionError
from .grid import GridFunction, UniformGrid

__all__ = [
    "CosineBasis",
    "SpectralState",
    "cosine_eigenvalue",
    "basis_eval",
    "analyze",
    "synthesize",
    "triple_product",
    "quad_product_nonzero",
    "quad_product_value",
    "ToyGalerkin",
    "galerkin_rhs",
    "tail_bound_check",
]


@dataclass(frozen=True)
class CosineBasis:
    """Neumann cosine basis on (a, b) with diffusion coefficient d."""

    a: float = 0.0
    b: float = 1.0
    d: float = 1.0

    @property
    def length(self) -> float:
        return self.b - self.a

    def eigenvalue(self, k: int) -> float:
        return cosine_eigenvalue(k, (self.a, self.b), self.d)

    def eval(self, k: int, x):
        return basis_eval(k, x, (self.a, self.b))

    def eval_matrix(self, grid: UniformGrid, n_modes: int) -> np.ndarray:
        """(grid.n, n_modes + 1) matrix of phi_k sampled on the grid."""
        return np.column_stack([self.eval(k, grid.x) for k in range(n_modes + 1)])


def cosine_eigenvalue(k: int, domain: tuple[float, float] = (0.0, 1.0), d: float = 1.0) -> float:
    """d k^2 pi^2 / (b - a)^2."""
    if k < 0:
        raise ValueError("mode index must be nonnegative")
    a, b = domain
    return d * (k * np.pi / (b - a)) ** 2


def basis_eval(k: int, x, domain: tuple[float, float] = (0.0, 1.0)):
    """L2-normalized Neumann cosine mode phi_k at x."""
    if k < 0:
        raise ValueError("mode index must be nonnegative")
    a, b = domain
    xs = np.asarray(x, dtype=float)
    if k == 0:
        out = np.full_like(xs, 1.0 / np.sqrt(b - a))
    else:
        out = np.sqrt(2.0 / (b - a)) * np.cos(k * np.pi * (xs - a) / (b - a))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SpectralState:
    """Truncated coefficient pair (u_k, v_k), k = 0..N."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if u.shape != v.shape or u.ndim != 1:
            raise ValueError("u and v coefficient vectors must be 1-d and equal length")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def order(self) -> int:
        return self.u.shape[0] - 1


def _trapezoid_weights(grid: UniformGrid) -> np.ndarray:
    w = np.full(grid.n, grid.h)
    w[0] = w[-1] = 0.5 * grid.h
    return w


def analyze(f: GridFunction, n_modes: int, basis: CosineBasis | None = None) -> np.ndarray:
    """Coefficients c_k = quad(f * phi_k) for k = 0..n_modes."""
    basis = basis or CosineBasis(f.grid.a, f.grid.b)
    if n_modes >= f.grid.n - 1:
        raise ResolutionError(
            f"grid with n={f.grid.n} nodes cannot resolve mode {n_modes}"
        )
    phi = basis.eval_matrix(f.grid, n_modes)
    w = _trapezoid_weights(f.grid)
    return phi.T @ (w * f.values)


def synthesize(coeffs: np.ndarray, grid: UniformGrid, basis: CosineBasis | None = None) -> GridFunction:
    """Sum c_k phi_k sampled on the grid."""
    basis = basis or CosineBasis(grid.a, grid.b)
    coeffs = np.asarray(coeffs, dtype=float)
    phi = basis.eval_matrix(grid, coeffs.shape[0] - 1)
    return GridFunction(grid, phi @ coeffs)


def _quadrature_product(indices: tuple[int, ...], n: int = 4001) -> float:
    grid = UniformGrid(0.0, 1.0, n)
    prod = np.ones(n)
    for k in indices:
        prod *= basis_eval(k, grid.x)
    return float(np.trapezoid(prod, dx=grid.h))


def triple_product(k: int, m: int, n: int) -> float:
    """int_0^1 phi_k phi_m phi_n for positive indices: sqrt(2)/2 when exactly
    one of k+m=n, k+n=m, m+n=k holds, else 0.

    Any zero index falls back to quadrature (the closed value only covers
    positive indices).
    """
    if min(k, m, n) < 0:
        raise ValueError("indices must be nonnegative")
    if min(k, m, n) == 0:
        return _quadrature_product((k, m, n))
    hits = sum((k + m == n, k + n == m, m + n == k))
    return np.sqrt(2.0) / 2.0 if hits == 1 else 0.0


def quad_product_nonzero(k: int, l: int, m: int, n: int) -> bool:
    """Zero/nonzero predicate for int_0^1 phi_k phi_l phi_m phi_n, positive
    indices: true iff some signed combination +-k +-l +-m +-n vanishes."""
    if min(k, l, m, n) < 1:
        raise ValueError("predicate defined for positive indices only")
    return (
        k + l + m == n or k + l + n == m or k + m + n == l or l + m + n == k
        or k + l == m + n or k + m == l + n or k + n == l + m
    )


def quad_product_value(k: int, l: int, m: int, n: int, n_quad: int = 4001) -> float:
    """Quadruple product value by high-resolution quadrature (no closed form
    is used; the index conditions only decide zero vs nonzero)."""
    return _quadrature_product((k, l, m, n), n_quad)


class ToyGalerkin:
    """Truncated projection of u_t = alpha u - u^3 - v + u_xx, v_t = u.

    The cubic is evaluated pseudo-spectrally: synthesize on a dealiasing grid
    of at least 4N points, cube pointwise, re-analyze. For trigonometric
    polynomials of degree N the cube has degree 3N, so that grid represents it
    exactly up to quadrature error.
    """

    def __init__(self, n_modes: int, alpha: float, basis: CosineBasis | None = None,
                 dealias_points: int | None = None):
        if n_modes < 1:
            raise ValueError("need at least one nonconstant mode")
        self.basis = basis or CosineBasis()
        self.n_modes = n_modes
        self.alpha = alpha
        n_grid = dealias_points if dealias_points is not None else 4 * n_modes + 1
        if n_grid < 4 * n_modes + 1:
            raise ResolutionError(
                f"dealiasing grid with {n_grid} points is too coarse for N={n_modes}"
            )
        self.grid = UniformGrid(self.basis.a, self.basis.b, n_grid)
        self._phi = self.basis.eval_matrix(self.grid, n_modes)
        self._wphi = self._phi * _trapezoid_weights(self.grid)[:, None]
        self._lam = np.array([self.basis.eigenvalue(k) for k in range(n_modes + 1)])

    def cubic_coeffs(self, u_coeffs: np.ndarray) -> np.ndarray:
        """Exact projection of (sum u_k phi_k)^3 onto the retained modes."""
        u_phys = self._phi @ u_coeffs
        return self._wphi.T @ (u_phys ** 3)

    def rhs(self, state: SpectralState) -> SpectralState:
        du = (self.alpha - self._lam) * state.u - state.v - self.cubic_coeffs(state.u)
        return SpectralState(du, state.u.copy())

    def rhs_linear(self, state: SpectralState) -> SpectralState:
        """Cubic disabled: each mode evolves under its own 2x2 system."""
        du = (self.alpha - self._lam) * state.u - state.v
        return SpectralState(du, state.u.copy())


def galerkin_rhs(state: SpectralState, alpha: float, basis: CosineBasis | None = None) -> SpectralState:
    """One-shot wrapper around :class:`ToyGalerkin` for a single evaluation."""
    op = ToyGalerkin(state.order, alpha, basis)
    return op.rhs(state)


def tail_bound_check(state: SpectralState, alpha: float = 0.0,
                     basis: CosineBasis | None = None) -> dict:
    """Compare the measured mode remainders against (7/2) sum|u_i| sum|u_j|^2.

    The remainder g_k is the difference between the exact projected cubic and
    the explicit terms kept in the mode equations: u_0^3 + 3 u_0 sum u_i^2 for
    mode 0, and 3 u_0^2 u_k + (9 sqrt2 / 2) u_0 sum_i u_i u_{k+i} for k >= 1.
    Sums run over positive indices retained in the state.
    """
    n_modes = state.order
    op = ToyGalerkin(max(n_modes, 1), alpha, basis,
                     dealias_points=max(4 * n_modes + 1, 64))
    exact = op.cubic_coeffs(state.u)
    u0 = state.u[0]
    tail = state.u[1:]
    sum_abs = float(np.sum(np.abs(tail)))
    sum_sq = float(np.sum(tail ** 2))
    bound = 3.5 * sum_abs * sum_sq

    g = np.empty(n_modes + 1)
    g[0] = exact[0] - (u0 ** 3 + 3.0 * u0 * sum_sq)
    for k in range(1, n_modes + 1):
        # sum_i u_i u_{k+i} over pairs retained in the truncation
        i = np.arange(1, n_modes - k + 1)
        cross = float(np.sum(state.u[i] * state.u[i + k])) if i.size else 0.0
        g[k] = exact[k] - (3.0 * u0 ** 2 * state.u[k]
                           + 4.5 * np.sqrt(2.0) * u0 * cross)
    return {
        "sum_abs_tail": sum_abs,
        "sum_sq_tail": sum_sq,
        "bound": bound,
        "g": g,
        "within_bound": np.abs(g) <= bound + 1e-15,
    }
