"""
Symmetric-function operators on symmetric matrices through their eigenvalues.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from models.errors import DomainError
from models.matrix import EigenDecomposition, SymMatrix
from models.spectrum import Spectrum
from numerics.symfun import sigma_table
from utils.logger import setup_logger

logger = setup_logger(__name__)

MatrixLike = Union[SymMatrix, np.ndarray]


class OperatorKind(str, Enum):
    SIGMA_K = "sigma_k"
    QUOTIENT_21 = "quotient21"                        # σ₂/σ₁ on Γ₂
    QUOTIENT_DUAL = "quotient_dual"                   # σ_{n−1}/σ_{n−2} on Γ_{n−1}
    QUOTIENT_DUAL_INVERSE = "quotient_dual_inverse"   # σ_{n−2}/σ_{n−1} on Γ_{n−1}


@dataclass(frozen=True)
class OperatorSpec:
    """Operator descriptor for matrix_operator"""
    kind: OperatorKind
    k: Optional[int] = None

    @classmethod
    def sigma(cls, k: int) -> "OperatorSpec":
        return cls(OperatorKind.SIGMA_K, k)

    def indices(self, n: int) -> Tuple[int, int, int]:
        """(numerator index, denominator index, cone index); denominator −1 means none"""
        if self.kind is OperatorKind.SIGMA_K:
            if self.k is None or not 0 <= self.k <= n:
                raise DomainError(f"sigma_k descriptor needs 0 <= k <= {n}, got {self.k}")
            return self.k, -1, 0
        if n < 2:
            raise DomainError("quotient operators need n >= 2")
        if self.kind is OperatorKind.QUOTIENT_21:
            return 2, 1, 2
        if self.kind is OperatorKind.QUOTIENT_DUAL:
            return n - 1, n - 2, n - 1
        return n - 2, n - 1, n - 1

    def __str__(self):
        if self.kind is OperatorKind.SIGMA_K:
            return f"sigma_{self.k}"
        return self.kind.value


def as_sym_matrix(S: MatrixLike) -> SymMatrix:
    return S if isinstance(S, SymMatrix) else SymMatrix(np.asarray(S, dtype=float))


def eigenvalues(S: MatrixLike) -> np.ndarray:
    return np.linalg.eigvalsh(as_sym_matrix(S).entries)


def eigen(S: MatrixLike) -> EigenDecomposition:
    """Ascending eigen-decomposition via LAPACK syevd"""
    matrix = as_sym_matrix(S)
    w, q = np.linalg.eigh(matrix.entries)
    return EigenDecomposition(eigenvalues=Spectrum(w), eigenvectors=q)


def matrix_operator(S: MatrixLike, op: OperatorSpec) -> float:
    """Operator value at λ(S); quotients require λ(S) in their domain cone"""
    lam = eigenvalues(S)
    n = lam.size
    top, bottom, cone = op.indices(n)
    table = sigma_table(lam, n)
    for l in range(1, cone + 1):
        if not table[l] > 0:
            raise DomainError(
                f"{op}: lambda(S) not in Gamma_{cone}, sigma_{l} = {table[l]!r} "
                f"at spectrum {lam.tolist()}"
            )
    if bottom < 0:
        return float(table[top])
    return float(table[top] / table[bottom])


def matrix_admissible(S: MatrixLike, k: int) -> bool:
    lam = eigenvalues(S)
    if not 1 <= k <= lam.size:
        raise DomainError(f"cone index k={k} outside 1..{lam.size}")
    return bool(np.all(sigma_table(lam, k)[1:] > 0))


def semiconvexity_constant(S: MatrixLike) -> float:
    """Smallest K ≥ 0 with S ≥ −K·I"""
    return float(max(0.0, -eigenvalues(S)[0]))


def duality_pair(S: MatrixLike) -> Tuple[float, float]:
    """
    (σ₂/σ₁ at λ(S⁻¹), σ_{n−2}/σ_{n−1} at λ(S)) for positive definite S.

    λ(S⁻¹) is taken as the reciprocals of λ(S); no inversion happens.
    """
    lam = eigenvalues(S)
    n = lam.size
    if n < 2:
        raise DomainError("duality_pair needs n >= 2")
    if lam[0] <= 0:
        raise DomainError(f"duality_pair needs a positive definite matrix, lambda_min = {lam[0]!r}")
    inv = sigma_table(1.0 / lam, 2)
    table = sigma_table(lam, n)
    return float(inv[2] / inv[1]), float(table[n - 2] / table[n - 1])


def normalize_dual_quotient(S: MatrixLike, rhs: float = 1.0) -> np.ndarray:
    """Scale S so that σ_{n−1}/σ_{n−2}(tS) = rhs (degree-1 homogeneity)"""
    matrix = as_sym_matrix(S)
    value = matrix_operator(matrix, OperatorSpec(OperatorKind.QUOTIENT_DUAL))
    return matrix.entries * (rhs / value)


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-like orthogonal matrix: QR of a Gaussian matrix with sign fix"""
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diag(r))


def random_spd(rng: np.random.Generator, n: int,
               low: float = 0.1, high: float = 10.0) -> np.ndarray:
    q = random_orthogonal(rng, n)
    d = low + (high - low) * rng.random(n)
    return (q * d) @ q.T
