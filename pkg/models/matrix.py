from dataclasses import dataclass

import numpy as np

from models.errors import DomainError
from models.spectrum import Spectrum


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Dense symmetric n×n real matrix, symmetrized on ingest"""
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DomainError(f"SymMatrix needs a square matrix, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise DomainError("SymMatrix entries must be finite")
        entries = 0.5 * (entries + entries.T)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, n: int) -> "SymMatrix":
        return cls(np.eye(n))

    @classmethod
    def diag(cls, *values: float) -> "SymMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))

    def __eq__(self, other):
        if isinstance(other, SymMatrix):
            return np.array_equal(self.entries, other.entries)
        return False

    def __hash__(self):
        return hash(self.entries.tobytes())


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Ascending eigenvalues with orthonormal eigenvector columns"""
    eigenvalues: Spectrum
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues.values) @ q.T
