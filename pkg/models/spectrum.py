from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from models.errors import DomainError


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ordered real eigenvalue vector λ ∈ ℝⁿ, n ≥ 2"""
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size < 2:
            raise DomainError(f"Spectrum needs at least 2 entries, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise DomainError(f"Spectrum entries must be finite: {values.tolist()}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.size

    def __eq__(self, other):
        if isinstance(other, Spectrum):
            return np.array_equal(self.values, other.values)
        return False

    def __hash__(self):
        return hash(self.values.tobytes())


SpectrumLike = Union[Spectrum, np.ndarray, Iterable[float]]


def as_spectrum(lam: SpectrumLike) -> Spectrum:
    """Coerce an array-like into a validated Spectrum"""
    if isinstance(lam, Spectrum):
        return lam
    return Spectrum(np.asarray(lam, dtype=float))


@dataclass(frozen=True)
class ConeLabel:
    """Gårding cone Γ_k in ambient dimension n"""
    k: int
    n: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise DomainError(f"Cone index k={self.k} outside 1..{self.n}")

    def __str__(self):
        return f"Gamma_{self.k}(R^{self.n})"
