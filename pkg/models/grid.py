from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from models.errors import DomainError
from models.matrix import SymMatrix

MIN_NODES_PER_AXIS = 5


@dataclass(frozen=True)
class Grid:
    """
    Uniform tensor grid over a box, m nodes per axis.

    Node values are stored as arrays of shape (m,)*n with axis 0 ↔ x₁
    (``indexing='ij'``); flattening is row-major, last axis fastest.
    """
    n: int
    m: int
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"Grid dimension must be positive, got {self.n}")
        lower = tuple(float(v) for v in np.broadcast_to(self.lower, (self.n,)))
        upper = tuple(float(v) for v in np.broadcast_to(self.upper, (self.n,)))
        if self.m < MIN_NODES_PER_AXIS:
            raise DomainError(f"Grid needs m >= {MIN_NODES_PER_AXIS} nodes per axis, got {self.m}")
        if not all(np.isfinite(lower + upper)):
            raise DomainError("Grid box must be finite")
        if any(hi <= lo for lo, hi in zip(lower, upper)):
            raise DomainError(f"Grid box is empty: lower={lower}, upper={upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def centered(cls, n: int, m: int, half_width: float = 1.0) -> "Grid":
        """Box [−L, L]ⁿ with the origin as a node (m odd)"""
        if m % 2 == 0:
            raise DomainError(f"Centered grids need an odd node count, got m={m}")
        if half_width <= 0:
            raise DomainError(f"Half width must be positive, got {half_width}")
        return cls(n=n, m=m, lower=(-half_width,) * n, upper=(half_width,) * n)

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.m,) * self.n

    @property
    def interior_shape(self) -> Tuple[int, ...]:
        return (self.m - 2,) * self.n

    @property
    def interior(self) -> Tuple[slice, ...]:
        return (slice(1, -1),) * self.n

    @property
    def node_count(self) -> int:
        return self.m ** self.n

    @property
    def spacing(self) -> np.ndarray:
        return (np.asarray(self.upper) - np.asarray(self.lower)) / (self.m - 1)

    @property
    def is_centered(self) -> bool:
        return (self.m % 2 == 1 and len(set(self.upper)) == 1
                and all(lo == -hi for lo, hi in zip(self.lower, self.upper)))

    @property
    def half_width(self) -> float:
        if not self.is_centered:
            raise DomainError("Half width is only defined for centered grids")
        return self.upper[0]

    @property
    def origin_index(self) -> Tuple[int, ...]:
        if not self.is_centered:
            raise DomainError("Origin is a node only on centered grids")
        return (self.m // 2,) * self.n

    def axes(self) -> List[np.ndarray]:
        return [np.linspace(lo, hi, self.m) for lo, hi in zip(self.lower, self.upper)]

    def points(self) -> np.ndarray:
        """Node coordinates, shape (m,)*n + (n,)"""
        return np.stack(np.meshgrid(*self.axes(), indexing='ij'), axis=-1)

    def boundary_mask(self) -> np.ndarray:
        mask = np.ones(self.shape, dtype=bool)
        mask[self.interior] = False
        return mask

    def is_interior(self, node: Sequence[int]) -> bool:
        return len(node) == self.n and all(1 <= i <= self.m - 2 for i in node)

    def to_dict(self) -> dict:
        return {'n': self.n, 'm': self.m, 'lower': list(self.lower), 'upper': list(self.upper)}


@dataclass(eq=False)
class GridFunction:
    """Real values on every node of a grid"""
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.size != self.grid.node_count:
            raise DomainError(
                f"GridFunction has {values.size} values for {self.grid.node_count} nodes"
            )
        values = values.reshape(self.grid.shape)
        if not np.all(np.isfinite(values)):
            raise DomainError("GridFunction values must be finite")
        self.values = values

    @property
    def n(self) -> int:
        return self.grid.n

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.grid, values)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        if other.grid != self.grid:
            raise DomainError("GridFunctions live on different grids")
        return GridFunction(self.grid, self.values - other.values)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        if other.grid != self.grid:
            raise DomainError("GridFunctions live on different grids")
        return GridFunction(self.grid, self.values + other.values)


@dataclass(eq=False)
class QuadraticForm:
    """q(x) = ½xᵀAx + bᵀx + c"""
    A: np.ndarray
    b: Optional[np.ndarray] = None
    c: float = 0.0

    def __post_init__(self):
        A = SymMatrix(self.A).entries.copy()
        self.A = A
        n = A.shape[0]
        b = np.zeros(n) if self.b is None else np.array(self.b, dtype=float).reshape(-1)
        if b.size != n:
            raise DomainError(f"QuadraticForm: b has length {b.size}, expected {n}")
        if not np.all(np.isfinite(b)) or not np.isfinite(self.c):
            raise DomainError("QuadraticForm coefficients must be finite")
        self.b = b
        self.c = float(self.c)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at points of shape (..., n)"""
        x = np.asarray(points, dtype=float)
        return 0.5 * np.einsum('...i,ij,...j->...', x, self.A, x) + x @ self.b + self.c

    def to_dict(self) -> dict:
        return {'A': self.A.tolist(), 'b': self.b.tolist(), 'c': self.c}

    @classmethod
    def from_dict(cls, data: dict) -> "QuadraticForm":
        return cls(A=np.asarray(data['A'], dtype=float),
                   b=None if data.get('b') is None else np.asarray(data['b'], dtype=float),
                   c=float(data.get('c', 0.0)))
