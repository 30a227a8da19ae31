"""
Named boundary-data families for the Liouville and interior-estimate experiments.

Every family is built around a quadratic whose Hessian A satisfies
σ₂/σ₁(A) = rhs; the non-quadratic families add a small smooth term on top of
the isotropic one.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from models.errors import DomainError
from models.grid import Grid, GridFunction, QuadraticForm
from models.problem import Boundary
from numerics.transform import normalize_quotient

ROTATION_ANGLE = 0.3


def _isotropic(n: int) -> np.ndarray:
    return np.eye(n)


def _anisotropic(n: int) -> np.ndarray:
    return np.diag(2.0 ** -np.arange(-1, n - 1))  # diag(2, 1, 1/2, ...)


def _rotated(n: int) -> np.ndarray:
    c, s = np.cos(ROTATION_ANGLE), np.sin(ROTATION_ANGLE)
    R = np.eye(n)
    R[:2, :2] = [[c, -s], [s, c]]
    return R @ _anisotropic(n) @ R.T


def _wave(x: np.ndarray) -> np.ndarray:
    k = 2.0 ** -np.arange(x.shape[-1])  # (1, 1/2, 1/4, ...)
    return np.sin(x @ k)


def _harmonic_cubic(x: np.ndarray) -> np.ndarray:
    return x[..., 0] ** 3 - 3.0 * x[..., 0] * x[..., 1] ** 2


def _exp_tilt(x: np.ndarray) -> np.ndarray:
    return np.exp(0.5 * (x[..., 0] + x[..., 1]))


@dataclass(frozen=True)
class BoundaryFamily:
    """Boundary data g = q + amplitude·φ with q an exact quadratic solution"""
    family_id: str
    description: str
    base: Callable[[int], np.ndarray]
    linear: float = 0.0
    constant: float = 0.0
    perturbation: Optional[Callable[[np.ndarray], np.ndarray]] = None
    amplitude: float = 0.0

    @property
    def is_quadratic(self) -> bool:
        return self.perturbation is None

    def quadratic(self, n: int, rhs: float = 1.0) -> QuadraticForm:
        if n < 2:
            raise DomainError(f"boundary families need n >= 2, got {n}")
        b = self.linear * np.array([(-1.0) ** i * (i + 1) for i in range(n)])
        return QuadraticForm(A=normalize_quotient(self.base(n), rhs), b=b, c=self.constant)

    def boundary(self, grid: Grid, rhs: float = 1.0) -> Boundary:
        q = self.quadratic(grid.n, rhs)
        if self.is_quadratic:
            return q
        x = grid.points()
        return GridFunction(grid, q(x) + self.amplitude * self.perturbation(x))


BOUNDARY_FAMILIES: Dict[str, BoundaryFamily] = {
    family.family_id: family for family in (
        BoundaryFamily('quad_iso', 'isotropic paraboloid', _isotropic),
        BoundaryFamily('quad_aniso', 'diagonal anisotropic quadratic', _anisotropic),
        BoundaryFamily('quad_rotated', 'rotated anisotropic quadratic with affine part',
                       _rotated, linear=0.1, constant=0.25),
        BoundaryFamily('wave', 'paraboloid plus 0.1 sin(k.x)', _isotropic,
                       perturbation=_wave, amplitude=0.1),
        BoundaryFamily('harmonic_cubic', 'paraboloid plus 0.05 (x1^3 - 3 x1 x2^2)', _isotropic,
                       perturbation=_harmonic_cubic, amplitude=0.05),
        BoundaryFamily('exp_tilt', 'paraboloid plus 0.05 exp((x1 + x2)/2)', _isotropic,
                       perturbation=_exp_tilt, amplitude=0.05),
    )
}


def get_family(family_id: str) -> BoundaryFamily:
    try:
        return BOUNDARY_FAMILIES[family_id]
    except KeyError:
        raise DomainError(
            f"unknown boundary family {family_id!r}; known: {sorted(BOUNDARY_FAMILIES)}"
        ) from None


def quadratic_families() -> List[str]:
    return [fid for fid, family in BOUNDARY_FAMILIES.items() if family.is_quadratic]
