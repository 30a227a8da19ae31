"""
Finite-difference Dirichlet solver for σ₂/σ₁(D²u) = f and σ₂(D²u) = f on boxes.

Damped Newton on the interior values with an admissibility-guarded line
search and continuation in the boundary data. The discretization is the
plain central-difference one; it is not a monotone scheme and is meant
for smooth (classical) solutions only.
"""

import time
from dataclasses import dataclass, field
from typing import Dict, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import LinearOperator, splu

from config import Config
from models.errors import (DomainError, IterationCap, LinearSolveFailure,
                           NonAdmissibleStart, Stagnation)
from models.grid import Grid, GridFunction
from models.problem import PDEOperator, ProblemSpec, SolveReport
from numerics.stencils import (apply_weights, discrete_hessian, hessian_field,
                               shifted_view, stencil_weights)
from numerics.symfun import (cone_margin_values, quotient_21_gradient_values,
                             sigma_2_gradient_values, sigma_table)
from utils.logger import setup_logger

logger = setup_logger(__name__)

__all__ = [
    'discrete_hessian', 'hessian_field', 'residual', 'linearize', 'newton_solve',
    'admissibility_margin', 'LinearizedOperator',
]


def _operator_values(lam: np.ndarray, operator: PDEOperator) -> np.ndarray:
    table = sigma_table(lam, 2)
    if operator is PDEOperator.QUOTIENT21:
        return table[..., 2] / table[..., 1]
    return table[..., 2]


def _operator_gradient(lam: np.ndarray, operator: PDEOperator) -> np.ndarray:
    if operator is PDEOperator.QUOTIENT21:
        return quotient_21_gradient_values(lam)
    return sigma_2_gradient_values(lam)


def _require_admissible(lam: np.ndarray) -> None:
    margin = cone_margin_values(lam, 2)
    if np.all(margin > 0):
        return
    worst = np.unravel_index(np.argmin(margin), margin.shape)
    node = tuple(int(i) + 1 for i in worst)
    count = int(np.sum(margin <= 0))
    raise DomainError(
        f"discrete Hessian outside Gamma_2 at {count} interior node(s); worst node {node} "
        f"with spectrum {lam[worst].tolist()} (margin {float(margin[worst])!r})"
    )


def admissibility_margin(u: GridFunction) -> float:
    """min over interior nodes of min(σ₁, σ₂) of the discrete Hessian"""
    lam = np.linalg.eigvalsh(hessian_field(u))
    return float(np.min(cone_margin_values(lam, 2)))


def residual(u: GridFunction, spec: ProblemSpec) -> np.ndarray:
    """operator(D²u) − rhs at each interior node, shape grid.interior_shape"""
    lam = np.linalg.eigvalsh(hessian_field(u))
    _require_admissible(lam)
    return _operator_values(lam, spec.operator) - spec.rhs


@dataclass(eq=False)
class LinearizedOperator:
    """
    Jacobian of `residual` with respect to the values of u.

    ``apply`` acts on full-grid perturbations; ``matvec`` and ``assemble``
    act on interior values only (boundary perturbation zero).
    """
    grid: Grid
    coefficients: np.ndarray  # Fⁱʲ per interior node, interior_shape + (n, n)
    weights: Dict[Tuple[int, ...], np.ndarray] = field(init=False)

    def __post_init__(self):
        self.weights = stencil_weights(self.grid, self.coefficients)

    @property
    def size(self) -> int:
        return int(np.prod(self.grid.interior_shape))

    def apply(self, w: Union[GridFunction, np.ndarray]) -> np.ndarray:
        values = w.values if isinstance(w, GridFunction) else np.asarray(w, dtype=float)
        return apply_weights(values.reshape(self.grid.shape), self.weights)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        full = np.zeros(self.grid.shape)
        full[self.grid.interior] = np.asarray(x, dtype=float).reshape(self.grid.interior_shape)
        return self.apply(full).reshape(-1)

    def as_linear_operator(self) -> LinearOperator:
        return LinearOperator((self.size, self.size), matvec=self.matvec, dtype=float)

    def assemble(self) -> sparse.csc_matrix:
        grid = self.grid
        index = np.full(grid.shape, -1, dtype=np.int64)
        index[grid.interior] = np.arange(self.size).reshape(grid.interior_shape)
        row_ids = index[grid.interior]
        rows, cols, data = [], [], []
        for offset in sorted(self.weights):
            neighbor = shifted_view(index, offset)
            keep = neighbor >= 0
            rows.append(row_ids[keep])
            cols.append(neighbor[keep])
            data.append(self.weights[offset][keep])
        matrix = sparse.coo_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.size, self.size),
        )
        return matrix.tocsc()


def linearize(u: GridFunction, spec: ProblemSpec) -> LinearizedOperator:
    """Fⁱʲ = Σ_k f_k(λ) q_i^(k) q_j^(k) composed with the Hessian stencil"""
    lam, Q = np.linalg.eigh(hessian_field(u))
    _require_admissible(lam)
    f = _operator_gradient(lam, spec.operator)
    F = np.einsum('...ik,...k,...jk->...ij', Q, f, Q)
    return LinearizedOperator(grid=u.grid, coefficients=F)


def _solve_linear(matrix: sparse.csc_matrix, rhs: np.ndarray, report: SolveReport) -> np.ndarray:
    try:
        x = splu(matrix).solve(rhs)
    except RuntimeError as e:
        report.error = LinearSolveFailure.__name__
        raise LinearSolveFailure(f"sparse LU factorization failed: {e}", report)
    if not np.all(np.isfinite(x)):
        report.error = LinearSolveFailure.__name__
        raise LinearSolveFailure("sparse LU solve produced non-finite values", report)
    return x


def _initial_scale(spec: ProblemSpec) -> float:
    """a with operator(a·I) = rhs"""
    n = spec.grid.n
    if spec.operator is PDEOperator.QUOTIENT21:
        return 2.0 * spec.rhs / (n - 1)
    return float(np.sqrt(2.0 * spec.rhs / (n * (n - 1))))


def _margin(grid: Grid, values: np.ndarray) -> float:
    lam = np.linalg.eigvalsh(hessian_field(GridFunction(grid, values)))
    return float(np.min(cone_margin_values(lam, 2)))


def _predict(values: np.ndarray, target: np.ndarray, spec: ProblemSpec,
             report: SolveReport) -> np.ndarray:
    """Move the boundary to `target`, extending the increment by the tangent predictor"""
    grid = spec.grid
    boundary = grid.boundary_mask()
    delta = np.where(boundary, target - values, 0.0)
    if not np.any(delta):
        return values

    lin = linearize(GridFunction(grid, values), spec)
    dx = _solve_linear(lin.assemble(), -lin.apply(delta).reshape(-1), report)
    shifted = values + delta
    predicted = shifted.copy()
    predicted[grid.interior] += dx.reshape(grid.interior_shape)

    if _margin(grid, predicted) >= Config.ADMISSIBILITY_MARGIN:
        return predicted
    if _margin(grid, shifted) >= Config.ADMISSIBILITY_MARGIN:
        logger.debug("tangent predictor left Gamma_2, keeping the previous interior")
        return shifted
    report.error = NonAdmissibleStart.__name__
    raise NonAdmissibleStart("continuation step leaves Gamma_2; increase continuation_steps", report)


def _newton_stage(values: np.ndarray, spec: ProblemSpec, tol: float,
                  report: SolveReport) -> Tuple[np.ndarray, int]:
    grid = spec.grid
    r = residual(GridFunction(grid, values), spec)
    norm = float(np.max(np.abs(r)))
    report.residual_history.append(norm)

    for iteration in range(Config.NEWTON_MAX_ITERATIONS):
        if norm <= tol:
            return values, iteration

        lin = linearize(GridFunction(grid, values), spec)
        dx = _solve_linear(lin.assemble(), -r.reshape(-1), report).reshape(grid.interior_shape)

        step = 1.0
        for _ in range(Config.LINE_SEARCH_MAX_HALVINGS + 1):
            trial = values.copy()
            trial[grid.interior] += step * dx
            if _margin(grid, trial) >= Config.ADMISSIBILITY_MARGIN:
                r_trial = residual(GridFunction(grid, trial), spec)
                norm_trial = float(np.max(np.abs(r_trial)))
                if norm_trial <= Config.LINE_SEARCH_DECREASE * norm:
                    break
            step *= 0.5
        else:
            report.error = Stagnation.__name__
            raise Stagnation(
                f"no admissible decrease after {Config.LINE_SEARCH_MAX_HALVINGS} halvings "
                f"(residual {norm:.3e})", report
            )

        values, r, norm = trial, r_trial, norm_trial
        report.iterations += 1
        report.residual_history.append(norm)
        report.damping_history.append(step)
        logger.debug(f"newton iteration {report.iterations}: residual {norm:.3e}, step {step:g}")

    if norm <= tol:
        return values, Config.NEWTON_MAX_ITERATIONS
    report.error = IterationCap.__name__
    raise IterationCap(
        f"residual {norm:.3e} above tolerance {tol:.1e} after "
        f"{Config.NEWTON_MAX_ITERATIONS} iterations", report
    )


def _hessian_stats(u: GridFunction) -> Dict[str, float]:
    H = hessian_field(u)
    lam = np.linalg.eigvalsh(H)
    return {
        'lambda_min': float(lam[..., 0].min()),
        'lambda_max': float(lam[..., -1].max()),
        'max_abs_entry': float(np.max(np.abs(H))),
        'max_spread': float(np.max(np.abs(H - H.mean(axis=tuple(range(u.n)))))),
    }


def newton_solve(spec: ProblemSpec) -> Tuple[GridFunction, SolveReport]:
    """
    Solve operator(D²u) = rhs with Dirichlet data on the box.

    Starts from ½a|x|² with operator(aI) = rhs and blends the boundary data
    from that quadratic's trace to the target in `continuation_steps`
    stages, Newton-solving each. The Newton cap applies per stage.
    """
    started = time.perf_counter()
    grid = spec.grid
    n = grid.n
    report = SolveReport(operator=spec.operator.value, n=n, m=grid.m, rhs=spec.rhs)
    tol = Config.NEWTON_TOLERANCE_FACTOR * (1.0 + spec.rhs)

    a = _initial_scale(spec)
    x = grid.points()
    values = 0.5 * a * np.sum(x * x, axis=-1)
    trace0 = values.copy()
    target = spec.boundary_values()

    if _margin(grid, values) < Config.ADMISSIBILITY_MARGIN:
        report.error = NonAdmissibleStart.__name__
        raise NonAdmissibleStart("initial quadratic is not admissible", report)

    steps = spec.continuation_steps
    try:
        for stage in range(1, steps + 1):
            t = stage / steps
            stage_target = target if stage == steps else (1.0 - t) * trace0 + t * target
            values = _predict(values, stage_target, spec, report)
            values, iterations = _newton_stage(values, spec, tol, report)
            report.stage_iterations.append(iterations)
            logger.debug(f"continuation stage {stage}/{steps}: {iterations} Newton step(s)")
    except DomainError as e:
        # residual rejected an iterate that passed the margin check
        report.error = NonAdmissibleStart.__name__
        raise NonAdmissibleStart(str(e), report) from e
    finally:
        report.wall_time = time.perf_counter() - started

    boundary = grid.boundary_mask()
    values[boundary] = target[boundary]
    u = GridFunction(grid, values)
    report.final_residual = report.residual_history[-1]
    report.admissibility_margin = admissibility_margin(u)
    report.hessian_stats = _hessian_stats(u)
    report.converged = True
    logger.info(f"✓ {spec.operator.value} solve n={n} m={grid.m}: {report.iterations} Newton step(s), "
                f"residual {report.final_residual:.2e}, {report.wall_time:.2f}s")
    return u, report
