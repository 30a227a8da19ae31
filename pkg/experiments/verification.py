"""
Property suites behind ``hql verify``.

Each suite samples inputs from a keyed Philox stream, evaluates an exact
algebraic identity or inequality in vectorized form, and reports the worst
normalized violation against a fixed tolerance. Suites with ``strict=True``
pass only when the worst violation is strictly below the tolerance (used for
open-cone memberships, where the violation is −margin).
"""

from itertools import combinations
from typing import Callable, List, Sequence

import mpmath
import numpy as np
from scipy.ndimage import minimum_filter

from config import Config
from models.grid import Grid, GridFunction, QuadraticForm
from models.reports import PropertyResult
from models.run_config import VerifyConfig
from experiments.analysis import c_of_n
from numerics.spectral import (OperatorKind, OperatorSpec, duality_pair, eigen, matrix_operator,
                               normalize_dual_quotient, random_orthogonal, random_spd)
from numerics.stencils import hessian_field
from numerics.symfun import (cone_margin_values, lemma_shift_values, quotient_21_gradient_values,
                             sample_gamma2, sigma_table)
from numerics.transform import (discrete_legendre, eval_quadratic, hessian_shift,
                                subtract_reference_quadratic)
from utils.logger import setup_logger
from utils.rng import keyed_rng

logger = setup_logger(__name__)

BRUTE_FORCE_MAX_DIMENSION = 8
BRUTE_FORCE_SAMPLES = 500
NEWTON_MACLAURIN_BOX = 10.0
C_OF_N_DIGITS = 40
C_OF_N_LIMIT_FROM = 16  # next correction term is 1/(4 sqrt(3) n^2)
LEGENDRE_ROTATED = np.array([[2.0, 0.5], [0.5, 1.0]])
LEGENDRE_DIAGONAL = np.diag([1.0, 2.0])


def _result(name: str, n, samples: int, violations, tolerance: float,
            strict: bool = False, detail: str = None) -> PropertyResult:
    violations = np.asarray(violations, dtype=float)
    worst = float(np.max(violations)) if violations.size else 0.0
    passed = worst < tolerance if strict else worst <= tolerance
    return PropertyResult(name=name, dimension=n, samples=int(samples), worst_violation=worst,
                          tolerance=tolerance, passed=bool(passed), detail=detail)


def _relative(diff: np.ndarray, scale: np.ndarray) -> np.ndarray:
    scale = np.asarray(scale, dtype=float)
    return np.abs(diff) / np.where(scale > 0, scale, 1.0)


# ---------------------------------------------------------------------------
# symfun
# ---------------------------------------------------------------------------

def lemma_suite(n: int, samples: int, rng: np.random.Generator) -> List[PropertyResult]:
    """Shift identity, σ₁ half bound, cone preservation and ellipticity on one Γ₂ sample"""
    lam = sample_gamma2(rng, n, samples)
    table = sigma_table(lam, 2)
    s1, s2 = table[:, 1], table[:, 2]
    q = s2 / s1
    mu = lemma_shift_values(lam)
    mu_table = sigma_table(mu, 2)

    results = [
        _result('lemma_identity', n, samples,
                np.abs(mu_table[:, 2] - n / (2.0 * (n - 1)) * q ** 2) / (1.0 + s1 ** 2), 1e-12),
        _result('lemma_sigma1_half_bound', n, samples, (0.5 * s1 - mu_table[:, 1]) / s1, 1e-12),
        _result('lemma_cone_preservation', n, samples, -cone_margin_values(mu, 2), 0.0, strict=True),
        _result('quotient_ellipticity', n, samples,
                -quotient_21_gradient_values(lam).min(axis=-1), 0.0, strict=True),
    ]
    if n == 2:
        # σ₂/σ₁ = 1 becomes det = 1 after the shift
        unit = lam / q[:, None]
        shifted = lemma_shift_values(unit)
        det = shifted[:, 0] * shifted[:, 1]
        results.append(_result('monge_ampere_reduction', n, samples,
                               np.abs(det - 1.0) / (1.0 + unit.sum(axis=1) ** 2), 1e-12))
    return results


def newton_maclaurin_suite(n: int, samples: int, rng: np.random.Generator) -> List[PropertyResult]:
    lam = -NEWTON_MACLAURIN_BOX + 2.0 * NEWTON_MACLAURIN_BOX * rng.random((samples, n))
    table = sigma_table(lam, 2)
    s1, s2 = table[:, 1], table[:, 2]
    gap = (n - 1) / (2.0 * n) * s1 ** 2 - s2
    return [_result('newton_maclaurin', n, samples, -gap / (1.0 + s1 ** 2), 1e-12)]


def _enumerated_sigma(lam: np.ndarray, k: int) -> np.ndarray:
    subsets = np.array(list(combinations(range(lam.shape[-1]), k)), dtype=np.int64)
    return np.prod(lam[:, subsets], axis=-1).sum(axis=-1)


def sigma_k_suite(n: int, samples: int, rng: np.random.Generator) -> List[PropertyResult]:
    """Subset enumeration, permutation invariance and homogeneity for every k"""
    low, high = Config.GAMMA2_SAMPLE_LOW, Config.GAMMA2_SAMPLE_HIGH
    lam = low + (high - low) * rng.random((samples, n))
    table = sigma_table(lam, n)
    scale = sigma_table(np.abs(lam), n)
    results = []

    if n <= BRUTE_FORCE_MAX_DIMENSION:
        count = min(samples, BRUTE_FORCE_SAMPLES)
        brute = np.stack([_enumerated_sigma(lam[:count], k) for k in range(n + 1)], axis=-1)
        results.append(_result('sigma_k_enumeration', n, count,
                               _relative(table[:count] - brute, scale[:count]), 1e-13))

    permuted = rng.permuted(lam, axis=1)
    results.append(_result('sigma_k_permutation', n, samples,
                           _relative(sigma_table(permuted, n) - table, scale), 1e-12))

    t = 0.5 + 1.5 * rng.random(samples)
    powers = t[:, None] ** np.arange(n + 1)
    results.append(_result('sigma_k_homogeneity', n, samples,
                           _relative(sigma_table(t[:, None] * lam, n) - powers * table, powers * scale),
                           1e-12))
    return results


# ---------------------------------------------------------------------------
# spectral
# ---------------------------------------------------------------------------

def duality_suite(n: int, samples: int, rng: np.random.Generator) -> List[PropertyResult]:
    """Inverse-matrix duality and the strictly convex corollary on random SPD matrices"""
    pair_violation = np.empty(samples)
    corollary_violation = np.empty(samples)
    for i in range(samples):
        S = random_spd(rng, n)
        primal, dual = duality_pair(S)
        pair_violation[i] = abs(primal - dual) / abs(dual)
        normalized = normalize_dual_quotient(S)
        corollary_violation[i] = abs(duality_pair(normalized)[0] - 1.0)
    return [
        _result('duality_pair', n, samples, pair_violation, 1e-10),
        _result('dual_quotient_corollary', n, samples, corollary_violation, 1e-10),
    ]


def _operators(n: int) -> List[OperatorSpec]:
    return ([OperatorSpec(OperatorKind.QUOTIENT_21), OperatorSpec(OperatorKind.QUOTIENT_DUAL),
             OperatorSpec(OperatorKind.QUOTIENT_DUAL_INVERSE)]
            + [OperatorSpec.sigma(k) for k in range(1, n + 1)])


def invariance_suite(n: int, samples: int, rng: np.random.Generator) -> List[PropertyResult]:
    """Conjugation invariance, eigen reconstruction, and the spectral form of the Hessian shift"""
    operators = _operators(n)
    invariance = np.empty(samples)
    reconstruction = np.empty(samples)
    orthogonality = np.empty(samples)
    shift = np.empty(samples)

    unit_spectra = sample_gamma2(rng, n, samples)
    table = sigma_table(unit_spectra, 2)
    unit_spectra = unit_spectra / (table[:, 2] / table[:, 1])[:, None]  # σ₂/σ₁ = 1

    for i in range(samples):
        S = random_spd(rng, n)
        R = random_orthogonal(rng, n)
        values = np.array([matrix_operator(S, op) for op in operators])
        rotated = np.array([matrix_operator(R @ S @ R.T, op) for op in operators])
        invariance[i] = np.max(np.abs(rotated - values) / np.abs(values))

        A = rng.standard_normal((n, n))
        G = A + A.T
        decomposition = eigen(G)
        Q = decomposition.eigenvectors
        reconstruction[i] = (np.linalg.norm(decomposition.reconstruct() - G, np.inf)
                             / (1.0 + np.linalg.norm(G, np.inf)))
        orthogonality[i] = np.linalg.norm(Q.T @ Q - np.eye(n), np.inf)

        lam = unit_spectra[i]
        H = (R * lam) @ R.T
        shifted = eigen(hessian_shift(H, n)).eigenvalues.values
        expected = np.sort(lemma_shift_values(lam))
        shift[i] = np.max(np.abs(shifted - expected)) / (1.0 + np.max(np.abs(lam)))

    return [
        _result('orthogonal_invariance', n, samples, invariance, 1e-10),
        _result('eigen_reconstruction', n, samples, reconstruction, 1e-11),
        _result('eigen_orthogonality', n, samples, orthogonality, 1e-12),
        _result('hessian_shift_spectrum', n, samples, shift, 1e-11),
    ]


# ---------------------------------------------------------------------------
# transform
# ---------------------------------------------------------------------------

def commutation_suite(n: int, resolutions: Sequence[int], rng: np.random.Generator) -> List[PropertyResult]:
    """D²(u − |x|²/(2(n−1))) = D²u − I/(n−1) on random fields"""
    violations, nodes = [], 0
    for m in resolutions:
        grid = Grid.centered(n, m)
        u = GridFunction(grid, rng.random(grid.shape))
        lhs = hessian_field(subtract_reference_quadratic(u))
        rhs = hessian_field(u) - np.eye(n) / (n - 1)
        violations.append(np.max(np.abs(lhs - rhs)))
        nodes += grid.node_count
    return [_result('reference_quadratic_commutation', n, nodes, violations, 1e-12)]


def _inside(points: np.ndarray, bound: float) -> np.ndarray:
    return np.all(np.abs(points) <= bound, axis=-1)


def legendre_suite(resolutions: Sequence[int]) -> List[PropertyResult]:
    """
    Planar quadratic fixtures.

    Rotated A: conjugate error over nodes whose continuous maximizer A⁻¹y lies
    one spacing inside the box, normalized by the nearest-node bound λ_max·n·h²/8.
    Diagonal A: output nodes are images of input nodes, so the involution and
    the Hessian duality hold to rounding.
    """
    n = 2
    conjugate_error, involution, hessian_duality = [], [], []
    A_inv = np.linalg.inv(LEGENDRE_ROTATED)
    lam_max = float(np.linalg.eigvalsh(LEGENDRE_ROTATED)[-1])
    target = duality_pair(LEGENDRE_DIAGONAL)[1]

    for m in resolutions:
        grid = Grid.centered(n, m)
        h = float(grid.spacing[0])

        result = discrete_legendre(eval_quadratic(QuadraticForm(LEGENDRE_ROTATED), grid))
        y = result.conjugate.grid.points()
        maximizer = y @ A_inv
        exact = 0.5 * np.einsum('...i,...i->...', y, maximizer)
        window = result.usable & _inside(maximizer, grid.half_width - h)
        error = np.max(np.abs(result.conjugate.values - exact)[window])
        conjugate_error.append(error / (lam_max * n * h * h / 8.0))

        u = eval_quadratic(QuadraticForm(LEGENDRE_DIAGONAL), grid)
        w = discrete_legendre(u)
        back = discrete_legendre(w.conjugate, check_convexity=False).conjugate
        expected = QuadraticForm(LEGENDRE_DIAGONAL)(back.grid.points())
        involution.append(np.max(np.abs(back.values - expected)) / (1.0 + u.sup_norm()))

        stencil_ok = minimum_filter(w.usable.astype(np.int8), size=3, mode='constant')[grid.interior] > 0
        H = hessian_field(w.conjugate)[stencil_ok]
        table = sigma_table(np.linalg.eigvalsh(H), 2)
        hessian_duality.append(np.max(np.abs(table[:, 2] / table[:, 1] - target)) / target)

    total = sum(m ** n for m in resolutions)
    return [
        _result('legendre_conjugate_error', n, total, conjugate_error, 1.0,
                detail='worst error divided by lambda_max * n * h^2 / 8'),
        _result('legendre_involution', n, total, involution, 1e-10),
        _result('legendre_hessian_duality', n, total, hessian_duality, 1e-8),
    ]


# ---------------------------------------------------------------------------
# analysis
# ---------------------------------------------------------------------------

def c_of_n_suite(dimensions: Sequence[int]) -> List[PropertyResult]:
    dims = sorted(dimensions)
    with mpmath.workdps(C_OF_N_DIGITS):
        oracle = [(mpmath.sqrt(3 * n * n + 1) - n + 1) / (2 * n) for n in dims]
        precision = [float(abs((c_of_n(n) - ref) / ref)) for n, ref in zip(dims, oracle)]
    values = np.array([c_of_n(n) for n in dims])
    limit = (np.sqrt(3.0) - 1.0) / 2.0
    largest = dims[-1]
    results = [_result('c_of_n_high_precision', None, len(dims), precision, 1e-14)]
    if len(dims) > 1:
        results.append(_result('c_of_n_monotone', None, len(dims), np.diff(values), 0.0, strict=True))
    if largest >= C_OF_N_LIMIT_FROM:
        results.append(_result('c_of_n_limit', largest, 1, [abs(values[-1] - limit - 1.0 / (2 * largest))], 1e-3,
                               detail='c(n) compared with (sqrt(3) - 1)/2 + 1/(2n)'))
    return results


def _per_dimension(name: str, index: int, dimensions: Sequence[int], seed: int,
                   suite: Callable[[int, np.random.Generator], List[PropertyResult]]) -> List[PropertyResult]:
    results = []
    for n in dimensions:
        logger.debug(f"running {name} suite for n={n}")
        results.extend(suite(n, keyed_rng(seed, index, n)))
    return results


def run_verification(config: VerifyConfig) -> List[PropertyResult]:
    """All property suites in a fixed order; each (suite, dimension) draws from its own stream"""
    seed = config.seed
    results: List[PropertyResult] = []
    results += _per_dimension('lemma', 0, config.dimensions, seed,
                              lambda n, rng: lemma_suite(n, config.samples, rng))
    results += _per_dimension('newton_maclaurin', 1, config.dimensions, seed,
                              lambda n, rng: newton_maclaurin_suite(n, config.samples, rng))
    results += _per_dimension('sigma_k', 2, config.dimensions, seed,
                              lambda n, rng: sigma_k_suite(n, config.samples, rng))
    results += _per_dimension('duality', 3, config.duality_dimensions, seed,
                              lambda n, rng: duality_suite(n, config.duality_samples, rng))
    results += _per_dimension('invariance', 4, config.dimensions, seed,
                              lambda n, rng: invariance_suite(n, config.invariance_samples, rng))
    grid_dims = [n for n in config.dimensions if n in (2, 3)]
    results += _per_dimension('commutation', 5, grid_dims, seed,
                              lambda n, rng: commutation_suite(n, config.transform_resolutions, rng))
    if 2 in config.dimensions:
        results += legendre_suite(config.transform_resolutions)
    results += c_of_n_suite(config.c_dimensions)

    for r in results:
        where = f" n={r.dimension}" if r.dimension is not None else ""
        mark = '✓' if r.passed else '✗'
        logger.info(f"{mark} {r.name}{where}: worst {r.worst_violation:.3e} "
                    f"(tolerance {r.tolerance:g}, {r.samples} samples)")
    return results
