"""Cosine basis, product identities, and the Galerkin projection."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fhnlab.errors import ResolutionError
from fhnlab.grid import GridFunction, UniformGrid, quad
from fhnlab.spectral import (
    CosineBasis,
    SpectralState,
    ToyGalerkin,
    analyze,
    basis_eval,
    cosine_eigenvalue,
    galerkin_rhs,
    quad_product_nonzero,
    quad_product_value,
    synthesize,
    tail_bound_check,
    triple_product,
)


class TestBasis:
    def test_eigenvalues_closed_form(self):
        for k in range(21):
            assert cosine_eigenvalue(k) == pytest.approx(k ** 2 * np.pi ** 2, rel=1e-14)

    def test_eigenvalue_scaling(self):
        assert cosine_eigenvalue(2, (-50.0, 50.0), d=1.0) == pytest.approx(
            (2 * np.pi / 100.0) ** 2, rel=1e-12
        )
        assert cosine_eigenvalue(1, d=4.0) == pytest.approx(4 * np.pi ** 2, rel=1e-12)

    def test_orthonormality(self):
        grid = UniformGrid(0.0, 1.0, 1001)
        basis = CosineBasis()
        phi = basis.eval_matrix(grid, 20)
        w = np.full(grid.n, grid.h)
        w[0] = w[-1] = grid.h / 2.0
        gram = phi.T @ (phi * w[:, None])
        assert np.max(np.abs(gram - np.eye(21))) <= 1e-6

    def test_mode_zero_is_constant_one(self):
        assert basis_eval(0, 0.37) == pytest.approx(1.0, abs=1e-14)

    def test_analyze_synthesize_round_trip(self):
        grid = UniformGrid(0.0, 1.0, 801)
        coeffs = np.array([0.3, -1.0, 0.0, 0.5, 0.2])
        f = synthesize(coeffs, grid)
        assert np.max(np.abs(analyze(f, 4) - coeffs)) <= 1e-6


class TestProductIdentities:
    def test_triple_nonzero_value(self):
        assert triple_product(1, 1, 2) == pytest.approx(np.sqrt(2) / 2, abs=1e-12)
        assert triple_product(2, 3, 5) == pytest.approx(np.sqrt(2) / 2, abs=1e-12)

    def test_triple_selection_rule_against_quadrature(self):
        grid = UniformGrid(0.0, 1.0, 4001)
        basis = CosineBasis()
        for k in range(1, 7):
            for m in range(1, 7):
                for n in range(1, 7):
                    vals = (basis.eval(k, grid.x) * basis.eval(m, grid.x)
                            * basis.eval(n, grid.x))
                    direct = quad(GridFunction(grid, vals))
                    assert triple_product(k, m, n) == pytest.approx(direct, abs=1e-8)

    def test_quadruple_predicate_matches_quadrature(self):
        for k in range(1, 5):
            for l in range(1, 5):
                for m in range(1, 5):
                    for n in range(1, 5):
                        val = quad_product_value(k, l, m, n)
                        assert quad_product_nonzero(k, l, m, n) == (abs(val) > 1e-8)


class TestGalerkin:
    def test_cubic_projection_against_quadrature(self):
        rng = np.random.default_rng(5)
        n_modes = 6
        coeffs = rng.uniform(-0.5, 0.5, n_modes + 1)
        op = ToyGalerkin(n_modes, alpha=1.0)
        proj = op.cubic_coeffs(coeffs)
        grid = UniformGrid(0.0, 1.0, 4001)
        cubed = synthesize(coeffs, grid).values ** 3
        direct = analyze(GridFunction(grid, cubed), n_modes)
        assert np.max(np.abs(proj - direct)) <= 1e-8

    def test_linear_rhs_is_diagonal(self):
        op = ToyGalerkin(4, alpha=2.0)
        u = np.array([1.0, 0.5, 0.0, 0.0, 0.0])
        v = np.array([0.0, 0.0, 1.0, 0.0, 0.0])
        out = op.rhs_linear(SpectralState(u, v))
        lam = np.array([cosine_eigenvalue(k) for k in range(5)])
        assert np.allclose(out.u, (2.0 - lam) * u - v, atol=1e-12)
        assert np.array_equal(out.v, u)

    def test_full_rhs_adds_the_cubic(self):
        op = ToyGalerkin(4, alpha=2.0)
        state = SpectralState(np.array([0.3, 0.1, 0.0, 0.0, 0.0]), np.zeros(5))
        lin = op.rhs_linear(state)
        full = op.rhs(state)
        assert np.allclose(lin.u - full.u, op.cubic_coeffs(state.u), atol=1e-12)

    def test_galerkin_rhs_wrapper_matches_operator(self):
        state = SpectralState(np.array([0.2, -0.4, 0.1]), np.array([0.0, 0.3, 0.0]))
        a = galerkin_rhs(state, alpha=1.0)
        b = ToyGalerkin(2, alpha=1.0).rhs(state)
        assert np.allclose(a.u, b.u, atol=1e-12)

    def test_coarse_dealiasing_grid_rejected(self):
        with pytest.raises(ResolutionError):
            ToyGalerkin(8, alpha=0.0, dealias_points=16)

    def test_spectral_state_shape_checked(self):
        with pytest.raises(ValueError):
            SpectralState(np.zeros(3), np.zeros(4))


mean_free_tails = arrays(
    np.float64, st.integers(min_value=3, max_value=8),
    elements=st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
)


class TestTailBound:
    @given(mean_free_tails)
    @settings(max_examples=60, deadline=None)
    def test_remainders_within_bound_for_mean_free_states(self, tail):
        # The displayed remainder decomposition is self-consistent only when
        # the mean coefficient vanishes; that is the quantified regime.
        u = np.concatenate(([0.0], tail))
        report = tail_bound_check(SpectralState(u, np.zeros_like(u)))
        assert bool(np.all(report["within_bound"]))

    def test_report_contents(self):
        u = np.array([0.0, 0.2, -0.1, 0.05])
        report = tail_bound_check(SpectralState(u, np.zeros_like(u)))
        assert report["sum_abs_tail"] == pytest.approx(0.35)
        assert report["sum_sq_tail"] == pytest.approx(0.0525)
        assert report["bound"] == pytest.approx(3.5 * 0.35 * 0.0525)
        assert report["g"].shape == (4,)
