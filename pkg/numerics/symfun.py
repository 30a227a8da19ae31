"""
Elementary symmetric functions of eigenvalue vectors.

σ_k, its derivatives, Gårding cone membership, the quotient σ₂/σ₁ and the
eigenvalue shift that rewrites σ₂/σ₁ = q as σ₂ = n/(2(n−1))·q².

Spectrum-level functions take a single spectrum; the ``*_values`` kernels
act on the last axis of arrays of shape (..., n) and back the solver and
the verification suites.
"""

from itertools import combinations
from math import prod

import numpy as np

from config import Config
from models.errors import DomainError
from models.spectrum import Spectrum, SpectrumLike, as_spectrum
from utils.logger import setup_logger

logger = setup_logger(__name__)


# ---------------------------------------------------------------------------
# vectorized kernels
# ---------------------------------------------------------------------------

def sigma_table(values: np.ndarray, k: int) -> np.ndarray:
    """
    σ_0..σ_k over the last axis by the prefix recurrence
    e_j(λ₁..λ_m) = e_j(λ₁..λ_{m−1}) + λ_m·e_{j−1}(λ₁..λ_{m−1}).

    Returns an array of shape (..., k+1).
    """
    vals = np.asarray(values, dtype=float)
    n = vals.shape[-1]
    if not 0 <= k <= n:
        raise DomainError(f"sigma index k={k} outside 0..{n}")
    table = np.zeros(vals.shape[:-1] + (k + 1,))
    table[..., 0] = 1.0
    for m in range(n):
        x = vals[..., m]
        for j in range(min(m + 1, k), 0, -1):
            table[..., j] += x * table[..., j - 1]
    return table


def quotient_21_values(values: np.ndarray) -> np.ndarray:
    table = sigma_table(values, 2)
    s1, s2 = table[..., 1], table[..., 2]
    if np.any(s1 <= 0):
        raise DomainError("sigma_2/sigma_1 is undefined where sigma_1 <= 0")
    return s2 / s1


def quotient_21_gradient_values(values: np.ndarray) -> np.ndarray:
    """∂(σ₂/σ₁)/∂λᵢ = (σ₁(λ|i)·σ₁ − σ₂)/σ₁², with σ₁(λ|i) = σ₁ − λᵢ"""
    vals = np.asarray(values, dtype=float)
    table = sigma_table(vals, 2)
    s1, s2 = table[..., 1:2], table[..., 2:3]
    if np.any(s1 <= 0):
        raise DomainError("sigma_2/sigma_1 is undefined where sigma_1 <= 0")
    return ((s1 - vals) * s1 - s2) / s1 ** 2


def sigma_2_gradient_values(values: np.ndarray) -> np.ndarray:
    """∂σ₂/∂λᵢ = σ₁ − λᵢ"""
    vals = np.asarray(values, dtype=float)
    return vals.sum(axis=-1, keepdims=True) - vals


def lemma_shift_values(values: np.ndarray) -> np.ndarray:
    """μ = λ − q/(n−1)·(1,…,1) with q = σ₂/σ₁(λ); no cone check"""
    vals = np.asarray(values, dtype=float)
    n = vals.shape[-1]
    q = quotient_21_values(vals)
    return vals - (q / (n - 1))[..., None]


def cone_margin_values(values: np.ndarray, k: int) -> np.ndarray:
    """min over l = 1..k of σ_l; positive exactly on Γ_k"""
    return sigma_table(values, k)[..., 1:].min(axis=-1)


# ---------------------------------------------------------------------------
# spectrum-level operations
# ---------------------------------------------------------------------------

def _check_k(k: int, n: int, lowest: int = 0):
    if not lowest <= k <= n:
        raise DomainError(f"sigma index k={k} outside {lowest}..{n}")


def sigma_k(lam: SpectrumLike, k: int) -> float:
    """σ_k(λ) = Σ_{i₁<…<i_k} λ_{i₁}⋯λ_{i_k}, with σ₀ = 1"""
    spectrum = as_spectrum(lam)
    _check_k(k, spectrum.n)
    return float(sigma_table(spectrum.values, k)[k])


def sigma_k_enumerate(lam: SpectrumLike, k: int) -> float:
    """Naive subset enumeration; oracle for sigma_k"""
    spectrum = as_spectrum(lam)
    _check_k(k, spectrum.n)
    return float(sum(prod(c) for c in combinations(spectrum.values.tolist(), k)))


def sigma_k_partial(lam: SpectrumLike, k: int, i: int) -> float:
    """∂σ_k/∂λᵢ = σ_{k−1}(λ|i), the entry i (0-based) deleted"""
    spectrum = as_spectrum(lam)
    n = spectrum.n
    _check_k(k, n, lowest=1)
    if not 0 <= i < n:
        raise DomainError(f"index i={i} outside 0..{n - 1}")
    reduced = np.delete(spectrum.values, i)
    return float(sigma_table(reduced, k - 1)[k - 1])


def in_gamma_k(lam: SpectrumLike, k: int) -> bool:
    """λ ∈ Γ_k, i.e. σ_l(λ) > 0 for every l = 1..k (strict, no tolerance)"""
    spectrum = as_spectrum(lam)
    _check_k(k, spectrum.n, lowest=1)
    return bool(np.all(sigma_table(spectrum.values, k)[1:] > 0))


def cone_margin(lam: SpectrumLike, k: int) -> float:
    """min over l ≤ k of σ_l(λ); callers wanting a safety margin compare this"""
    spectrum = as_spectrum(lam)
    _check_k(k, spectrum.n, lowest=1)
    return float(cone_margin_values(spectrum.values, k))


def newton_maclaurin_gap(lam: SpectrumLike) -> float:
    """(n−1)/(2n)·σ₁² − σ₂, nonnegative for every real λ"""
    spectrum = as_spectrum(lam)
    n = spectrum.n
    table = sigma_table(spectrum.values, 2)
    return float((n - 1) / (2 * n) * table[1] ** 2 - table[2])


def quotient_21(lam: SpectrumLike) -> float:
    spectrum = as_spectrum(lam)
    return float(quotient_21_values(spectrum.values))


def quotient_21_gradient(lam: SpectrumLike) -> np.ndarray:
    spectrum = as_spectrum(lam)
    return quotient_21_gradient_values(spectrum.values)


def lemma_shift(lam: SpectrumLike) -> Spectrum:
    """
    Shift λ ∈ Γ₂ by q/(n−1) along (1,…,1), q = σ₂/σ₁(λ).

    The result μ satisfies σ₂(μ) = n/(2(n−1))·q², σ₁(μ) ≥ ½σ₁(λ) and μ ∈ Γ₂.
    Boundary inputs (σ₂ = 0) are rejected.
    """
    spectrum = as_spectrum(lam)
    if not in_gamma_k(spectrum, 2):
        raise DomainError(f"lemma_shift needs lambda in Gamma_2, got {spectrum.values.tolist()}")
    return Spectrum(lemma_shift_values(spectrum.values))


def sample_gamma2(rng: np.random.Generator, n: int, count: int,
                  low: float = None, high: float = None) -> np.ndarray:
    """
    Rejection-sample `count` spectra from [low, high)ⁿ restricted to Γ₂.

    Returns an array of shape (count, n); draws happen in fixed-size chunks
    so the stream is reproducible for a given generator state.
    """
    low = Config.GAMMA2_SAMPLE_LOW if low is None else low
    high = Config.GAMMA2_SAMPLE_HIGH if high is None else high
    if count == 0:
        return np.empty((0, n))
    accepted = []
    have = 0
    chunk = max(64, 2 * count)
    while have < count:
        draw = low + (high - low) * rng.random((chunk, n))
        keep = draw[cone_margin_values(draw, 2) > 0]
        accepted.append(keep)
        have += keep.shape[0]
    samples = np.concatenate(accepted)[:count]
    logger.debug(f"sampled {count} Gamma_2 spectra in dimension {n}")
    return samples
