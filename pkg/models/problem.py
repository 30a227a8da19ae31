from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Union

import numpy as np

from config import Config
from models.errors import DomainError
from models.grid import Grid, GridFunction, QuadraticForm


class PDEOperator(str, Enum):
    QUOTIENT21 = "quotient21"   # σ₂/σ₁(D²u)
    SIGMA2 = "sigma2"           # σ₂(D²u)


Boundary = Union[QuadraticForm, GridFunction]


@dataclass(eq=False)
class ProblemSpec:
    """Dirichlet problem operator(D²u) = rhs on a box"""
    grid: Grid
    operator: PDEOperator
    rhs: float
    boundary: Boundary
    continuation_steps: int = Config.CONTINUATION_STEPS

    def __post_init__(self):
        self.operator = PDEOperator(self.operator)
        if self.grid.n < 2:
            raise DomainError(f"problems need dimension n >= 2, got {self.grid.n}")
        if not np.isfinite(self.rhs) or self.rhs <= 0:
            raise DomainError(f"right-hand side must be a positive real, got {self.rhs!r}")
        if self.continuation_steps < 1:
            raise DomainError(f"continuation steps must be positive, got {self.continuation_steps}")
        if isinstance(self.boundary, QuadraticForm):
            if self.boundary.n != self.grid.n:
                raise DomainError("boundary quadratic dimension does not match the grid")
        elif isinstance(self.boundary, GridFunction):
            if self.boundary.grid != self.grid:
                raise DomainError("tabulated boundary lives on a different grid")
        else:
            raise DomainError(f"unsupported boundary data {type(self.boundary).__name__}")

    def boundary_values(self) -> np.ndarray:
        """Full-grid array carrying the boundary data (interior entries are not meaningful)"""
        if isinstance(self.boundary, QuadraticForm):
            return self.boundary(self.grid.points())
        return self.boundary.values.copy()

    def to_dict(self) -> dict:
        boundary = (self.boundary.to_dict() if isinstance(self.boundary, QuadraticForm)
                    else {'tabulated': True})
        return {
            'grid': self.grid.to_dict(),
            'operator': self.operator.value,
            'rhs': self.rhs,
            'boundary': boundary,
            'continuation_steps': self.continuation_steps,
        }


@dataclass
class SolveReport:
    """Convergence record of one newton_solve call"""
    operator: str
    n: int
    m: int
    rhs: float
    iterations: int = 0
    residual_history: List[float] = field(default_factory=list)
    damping_history: List[float] = field(default_factory=list)
    stage_iterations: List[int] = field(default_factory=list)
    final_residual: Optional[float] = None
    admissibility_margin: Optional[float] = None
    hessian_stats: Dict[str, float] = field(default_factory=dict)
    converged: bool = False
    error: Optional[str] = None
    wall_time: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        """Export; wall time is left out by default so reports are reproducible"""
        data = {
            'operator': self.operator,
            'n': self.n,
            'm': self.m,
            'rhs': self.rhs,
            'iterations': self.iterations,
            'residual_history': list(self.residual_history),
            'damping_history': list(self.damping_history),
            'stage_iterations': list(self.stage_iterations),
            'final_residual': self.final_residual,
            'admissibility_margin': self.admissibility_margin,
            'hessian_stats': dict(self.hessian_stats),
            'converged': self.converged,
            'error': self.error,
        }
        if include_timing:
            data['wall_time'] = self.wall_time
        return data
