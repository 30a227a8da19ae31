"""
Second-order central-difference stencils on uniform tensor grids.

All stencils are exact on quadratic polynomials.
"""

from itertools import combinations, product
from typing import Dict, Sequence, Tuple

import numpy as np

from models.errors import DomainError
from models.grid import Grid, GridFunction
from models.matrix import SymMatrix


def shifted_view(values: np.ndarray, offset: Sequence[int]) -> np.ndarray:
    """Interior-sized view of `values` displaced by `offset` ∈ {−1,0,1}ⁿ"""
    m = values.shape[0]
    return values[tuple(slice(1 + o, m - 1 + o) for o in offset)]


def _unit(n: int, *pairs: Tuple[int, int]) -> Tuple[int, ...]:
    offset = [0] * n
    for axis, sign in pairs:
        offset[axis] += sign
    return tuple(offset)


def hessian_field(u: GridFunction) -> np.ndarray:
    """Discrete Hessians at every interior node, shape interior_shape + (n, n)"""
    grid = u.grid
    n, h = grid.n, grid.spacing
    V = u.values
    center = V[grid.interior]
    H = np.empty(grid.interior_shape + (n, n))
    for i in range(n):
        H[..., i, i] = (shifted_view(V, _unit(n, (i, 1))) - 2.0 * center
                        + shifted_view(V, _unit(n, (i, -1)))) / h[i] ** 2
    for i, j in combinations(range(n), 2):
        mixed = (shifted_view(V, _unit(n, (i, 1), (j, 1))) - shifted_view(V, _unit(n, (i, 1), (j, -1)))
                 - shifted_view(V, _unit(n, (i, -1), (j, 1))) + shifted_view(V, _unit(n, (i, -1), (j, -1))))
        H[..., i, j] = H[..., j, i] = mixed / (4.0 * h[i] * h[j])
    return H


def discrete_hessian(u: GridFunction, node: Sequence[int]) -> SymMatrix:
    """Discrete Hessian at one interior node"""
    grid = u.grid
    node = tuple(int(i) for i in node)
    if not grid.is_interior(node):
        raise DomainError(f"node {node} has no full stencil on a grid with m={grid.m}")
    n, h = grid.n, grid.spacing
    V = u.values
    H = np.empty((n, n))

    def at(offset):
        return V[tuple(p + o for p, o in zip(node, offset))]

    for i in range(n):
        H[i, i] = (at(_unit(n, (i, 1))) - 2.0 * V[node] + at(_unit(n, (i, -1)))) / h[i] ** 2
    for i, j in combinations(range(n), 2):
        H[i, j] = H[j, i] = (at(_unit(n, (i, 1), (j, 1))) - at(_unit(n, (i, 1), (j, -1)))
                             - at(_unit(n, (i, -1), (j, 1))) + at(_unit(n, (i, -1), (j, -1)))
                             ) / (4.0 * h[i] * h[j])
    return SymMatrix(H)


def stencil_weights(grid: Grid, F: np.ndarray) -> Dict[Tuple[int, ...], np.ndarray]:
    """
    Per-offset weights of u ↦ Σᵢⱼ Fⁱʲ (D²u)ᵢⱼ at interior nodes.

    F has shape interior_shape + (n, n) and is symmetric in its last two axes.
    """
    n, h = grid.n, grid.spacing
    weights: Dict[Tuple[int, ...], np.ndarray] = {}
    center = np.zeros(grid.interior_shape)
    for i in range(n):
        w = F[..., i, i] / h[i] ** 2
        center -= 2.0 * w
        weights[_unit(n, (i, 1))] = w
        weights[_unit(n, (i, -1))] = w
    weights[(0,) * n] = center
    for i, j in combinations(range(n), 2):
        w = 2.0 * F[..., i, j] / (4.0 * h[i] * h[j])
        for si, sj in product((1, -1), repeat=2):
            weights[_unit(n, (i, si), (j, sj))] = si * sj * w
    return weights


def apply_weights(values: np.ndarray, weights: Dict[Tuple[int, ...], np.ndarray]) -> np.ndarray:
    """Apply stencil weights to a full-grid value array; returns interior values"""
    out = None
    for offset in sorted(weights):
        term = weights[offset] * shifted_view(values, offset)
        out = term if out is None else out + term
    return out


def edge_lipschitz(u: GridFunction) -> float:
    """max over axis-aligned grid edges of |Δu|/h"""
    h = u.grid.spacing
    slopes = [np.max(np.abs(np.diff(u.values, axis=i))) / h[i] for i in range(u.n)]
    return float(max(slopes))
