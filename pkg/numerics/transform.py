"""
Solution-level transformations.

- v = u − |x|²/(2(n−1)) turns σ₂/σ₁(D²u) = 1 into σ₂(D²v) = n/(2(n−1)).
- D²v = D²u − I/(n−1), the matching matrix shift.
- The discrete Legendre–Fenchel conjugate, which swaps D²u for its inverse
  and σ₂/σ₁ for σ_{n−2}/σ_{n−1}.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from models.errors import DomainError
from models.grid import Grid, GridFunction, QuadraticForm
from models.matrix import SymMatrix
from numerics.spectral import MatrixLike, as_sym_matrix
from numerics.stencils import hessian_field
from numerics.symfun import sigma_table
from utils.logger import setup_logger

logger = setup_logger(__name__)

# conjugate sup is evaluated for this many output nodes at a time
LEGENDRE_CHUNK = 512
MAX_REPORTED_NODES = 10


def reference_quadratic(grid: Grid) -> np.ndarray:
    """|x|²/(2(n−1)) at every node"""
    if grid.n < 2:
        raise DomainError("the reference quadratic needs n >= 2")
    x = grid.points()
    return np.sum(x * x, axis=-1) / (2.0 * (grid.n - 1))


def subtract_reference_quadratic(u: GridFunction) -> GridFunction:
    """v(x) = u(x) − |x|²/(2(n−1))"""
    return u.with_values(u.values - reference_quadratic(u.grid))


def add_reference_quadratic(v: GridFunction) -> GridFunction:
    """Inverse of subtract_reference_quadratic"""
    return v.with_values(v.values + reference_quadratic(v.grid))


def hessian_shift(S: MatrixLike, n: int) -> SymMatrix:
    """S − I/(n−1)"""
    matrix = as_sym_matrix(S)
    if matrix.n != n:
        raise DomainError(f"hessian_shift: matrix is {matrix.n}x{matrix.n}, expected n={n}")
    if n < 2:
        raise DomainError("hessian_shift needs n >= 2")
    return SymMatrix(matrix.entries - np.eye(n) / (n - 1))


def eval_quadratic(q: QuadraticForm, grid: Grid) -> GridFunction:
    if q.n != grid.n:
        raise DomainError(f"quadratic of dimension {q.n} on a grid of dimension {grid.n}")
    return GridFunction(grid, q(grid.points()))


def normalize_quotient(A: MatrixLike, rhs: float = 1.0) -> np.ndarray:
    """Scale a Γ₂ matrix by t so that σ₂/σ₁(tA) = rhs"""
    matrix = as_sym_matrix(A)
    lam = np.linalg.eigvalsh(matrix.entries)
    table = sigma_table(lam, 2)
    if not (table[1] > 0 and table[2] > 0):
        raise DomainError(f"normalize_quotient needs lambda(A) in Gamma_2, got {lam.tolist()}")
    return matrix.entries * (rhs * table[1] / table[2])


@dataclass(eq=False)
class LegendreResult:
    """Conjugate sampled over the gradient-range box"""
    conjugate: GridFunction
    gradient_box: Tuple[Tuple[float, ...], Tuple[float, ...]]
    usable: np.ndarray  # output nodes whose maximizer is an interior input node

    @property
    def usable_fraction(self) -> float:
        return float(np.mean(self.usable))


def check_discrete_convexity(u: GridFunction) -> None:
    """Raise DomainError listing interior nodes whose discrete Hessian is not positive definite"""
    lam_min = np.linalg.eigvalsh(hessian_field(u))[..., 0]
    bad = np.argwhere(lam_min <= 0)
    if bad.size:
        nodes = [tuple(int(i) + 1 for i in idx) for idx in bad[:MAX_REPORTED_NODES]]
        raise DomainError(
            f"discrete Hessian not positive definite at {len(bad)} interior node(s), "
            f"first {len(nodes)}: {nodes}"
        )


def discrete_legendre(u: GridFunction, check_convexity: bool = True) -> LegendreResult:
    """
    Brute-force discrete conjugate w(y) = max over nodes x of ⟨x, y⟩ − u(x).

    Output nodes form a grid with the input's node count per axis over the
    box hull of the discrete gradient range. Only nodes flagged `usable`
    are faithful to the continuous conjugate.
    """
    grid = u.grid
    if check_convexity:
        check_discrete_convexity(u)

    h = grid.spacing
    gradients = np.gradient(u.values, *h, edge_order=2)
    if grid.n == 1:
        gradients = [gradients]
    lower = tuple(float(g.min()) for g in gradients)
    upper = tuple(float(g.max()) for g in gradients)
    out_grid = Grid(n=grid.n, m=grid.m, lower=lower, upper=upper)

    x = grid.points().reshape(-1, grid.n)
    u_flat = u.values.reshape(-1)
    y = out_grid.points().reshape(-1, grid.n)
    interior_flat = ~grid.boundary_mask().reshape(-1)

    w = np.empty(y.shape[0])
    argmax = np.empty(y.shape[0], dtype=np.int64)
    for start in range(0, y.shape[0], LEGENDRE_CHUNK):
        block = y[start:start + LEGENDRE_CHUNK] @ x.T - u_flat
        idx = np.argmax(block, axis=1)
        argmax[start:start + LEGENDRE_CHUNK] = idx
        w[start:start + LEGENDRE_CHUNK] = block[np.arange(block.shape[0]), idx]

    usable = interior_flat[argmax].reshape(out_grid.shape)
    logger.debug(f"Legendre conjugate on {out_grid.node_count} nodes, "
                 f"{usable.mean():.1%} usable")
    return LegendreResult(conjugate=GridFunction(out_grid, w),
                          gradient_box=(lower, upper),
                          usable=usable)
