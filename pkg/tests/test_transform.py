import numpy as np
import pytest
from numpy.testing import assert_allclose

from models.errors import DomainError
from models.grid import Grid, GridFunction, QuadraticForm
from numerics.spectral import OperatorKind, OperatorSpec, matrix_operator
from numerics.stencils import discrete_hessian, hessian_field
from numerics.transform import (add_reference_quadratic, check_discrete_convexity, discrete_legendre,
                                eval_quadratic, hessian_shift, normalize_quotient, reference_quadratic,
                                subtract_reference_quadratic)

DIAGONAL = np.diag([1.0, 2.0])


class TestReferenceQuadratic:

    def test_values(self, grid3):
        x = grid3.points()
        assert_allclose(reference_quadratic(grid3), np.sum(x * x, axis=-1) / 4.0, rtol=1e-15)

    def test_needs_two_dimensions(self):
        with pytest.raises(DomainError):
            reference_quadratic(Grid.centered(1, 5))

    def test_paraboloid_maps_to_sigma2_solution(self, paraboloid3):
        v = subtract_reference_quadratic(paraboloid3)
        H = hessian_field(v)
        assert_allclose(H, np.broadcast_to(0.5 * np.eye(3), H.shape), atol=1e-12)
        center = discrete_hessian(v, v.grid.origin_index)
        assert matrix_operator(center, OperatorSpec.sigma(2)) == pytest.approx(0.75, rel=1e-11)

    def test_add_undoes_subtract(self, paraboloid3):
        back = add_reference_quadratic(subtract_reference_quadratic(paraboloid3))
        assert_allclose(back.values, paraboloid3.values, atol=1e-15)

    def test_commutes_with_discrete_hessian(self, rng):
        grid = Grid.centered(2, 9)
        u = GridFunction(grid, rng.standard_normal(grid.shape))
        shifted = hessian_field(subtract_reference_quadratic(u))
        expected = hessian_field(u) - np.eye(2)
        assert np.abs(shifted - expected).max() <= 1e-12 * (1.0 + np.abs(hessian_field(u)).max())


class TestHessianShift:

    def test_identity(self):
        assert_allclose(hessian_shift(np.eye(3), 3).entries, 0.5 * np.eye(3))

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            hessian_shift(np.eye(3), 2)


class TestNormalizeQuotient:

    def test_scales_to_rhs(self):
        A = normalize_quotient(np.diag([2.0, 1.0, 0.5]), rhs=3.0)
        assert matrix_operator(A, OperatorSpec(OperatorKind.QUOTIENT_21)) == pytest.approx(3.0, rel=1e-14)

    def test_rejects_outside_gamma2(self):
        with pytest.raises(DomainError):
            normalize_quotient(np.diag([1.0, -1.0]))


class TestEvalQuadratic:

    def test_matches_pointwise_evaluation(self, grid3):
        q = QuadraticForm(A=np.eye(3), b=[1.0, 0.0, -1.0], c=2.0)
        u = eval_quadratic(q, grid3)
        assert u.values[grid3.origin_index] == 2.0
        assert u.values[(0, 0, 0)] == pytest.approx(1.5 + (-1.0 + 1.0) + 2.0)

    def test_dimension_mismatch(self, grid3):
        with pytest.raises(DomainError):
            eval_quadratic(QuadraticForm(A=np.eye(2)), grid3)


class TestDiscreteLegendre:

    def test_rejects_non_convex_input(self):
        grid = Grid.centered(2, 9)
        x = grid.points()
        saddle = GridFunction(grid, 0.5 * (x[..., 0] ** 2 - x[..., 1] ** 2))
        with pytest.raises(DomainError, match="not positive definite"):
            check_discrete_convexity(saddle)
        with pytest.raises(DomainError):
            discrete_legendre(saddle)

    @pytest.mark.parametrize("m", [9, 17])
    def test_diagonal_quadratic_is_exact_on_nodes(self, m):
        grid = Grid.centered(2, m)
        result = discrete_legendre(eval_quadratic(QuadraticForm(DIAGONAL), grid))
        assert_allclose(result.gradient_box[0], [-1.0, -2.0], atol=1e-12)
        assert_allclose(result.gradient_box[1], [1.0, 2.0], atol=1e-12)
        y = result.conjugate.grid.points()
        expected = 0.5 * (y[..., 0] ** 2 + 0.5 * y[..., 1] ** 2)
        assert np.abs(result.conjugate.values - expected).max() <= 1e-12

    def test_usable_window_excludes_boundary_maximizers(self):
        grid = Grid.centered(2, 9)
        result = discrete_legendre(eval_quadratic(QuadraticForm(DIAGONAL), grid))
        assert np.array_equal(result.usable, ~result.conjugate.grid.boundary_mask())
        assert result.usable_fraction == pytest.approx(49 / 81)

    def test_involution(self):
        grid = Grid.centered(2, 17)
        u = eval_quadratic(QuadraticForm(DIAGONAL), grid)
        w = discrete_legendre(u).conjugate
        back = discrete_legendre(w, check_convexity=False).conjugate
        assert np.abs(back.values - u.values).max() <= 1e-10 * (1.0 + u.sup_norm())

    def test_conjugate_hessian_is_inverse(self):
        grid = Grid.centered(2, 17)
        w = discrete_legendre(eval_quadratic(QuadraticForm(DIAGONAL), grid)).conjugate
        H = discrete_hessian(w, (8, 8)).entries
        assert_allclose(H, np.linalg.inv(DIAGONAL), atol=1e-8)

    def test_rotated_quadratic_within_nearest_node_bound(self):
        A = np.array([[2.0, 0.5], [0.5, 1.0]])
        grid = Grid.centered(2, 33)
        h = grid.spacing[0]
        result = discrete_legendre(eval_quadratic(QuadraticForm(A), grid))
        y = result.conjugate.grid.points()
        maximizer = y @ np.linalg.inv(A)
        exact = 0.5 * np.sum(y * maximizer, axis=-1)
        window = result.usable & np.all(np.abs(maximizer) <= 1.0 - h, axis=-1)
        assert window.any()
        bound = np.linalg.eigvalsh(A)[-1] * 2 * h * h / 8.0
        assert np.abs(result.conjugate.values - exact)[window].max() <= bound

    @pytest.mark.parametrize("m", [9, 13])
    def test_three_dimensional_conjugate_solves_quotient_equation(self, m):
        # D²w = diag(1, 1/2, 1/3), so σ₂/σ₁(D²w) = 1 / (11/6)
        A = np.diag([1.0, 2.0, 3.0])
        w = discrete_legendre(eval_quadratic(QuadraticForm(A), Grid.centered(3, m))).conjugate
        H = discrete_hessian(w, (m // 2,) * 3)
        assert_allclose(H.entries, np.linalg.inv(A), atol=1e-8)
        assert matrix_operator(H, OperatorSpec(OperatorKind.QUOTIENT_21)) == pytest.approx(6 / 11, rel=1e-8)
