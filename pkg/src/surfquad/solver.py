"""Discrete indicator systems: assembly, Tikhonov least squares, integration.

Vector systems carry one R^n unknown mu_j per sample point (columns grouped
per point); scalar systems use known normals and solve for the elements
tau_j directly. The solve minimizes ||A w - b||^2 + lambda^2 ||w||^2 through
a QR factorization of the regularization-stacked matrix (economy SVD when
the system is wide); plain least squares (lambda = 0) uses an SVD-backed
solve with a rank check.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg as sla

from .errors import IllPosedSystemError, NegativeWeightError, SingularEvaluationError
from .geometry import OrientedSample, PointCloud
from .kernel import KernelConfig, double_layer_block

# queries per assembly chunk; bounds the (chunk, N_Y, n) kernel block memory
_CHUNK = 256

AUTO_REGULARIZATION = None
_AUTO_SCALE = 1e-6


class SystemLayout(Enum):
    VECTOR_UNKNOWNS = "vector_unknowns"
    SCALAR_UNKNOWNS = "scalar_unknowns"
    OFFSET_AUGMENTED = "offset_augmented"


class RhsMode(Enum):
    ON_SURFACE_HALF = "on_surface_half"
    INTERIOR_ONE = "interior_one"
    MIXED_OFFSET = "mixed_offset"


class NegativeWeightPolicy(Enum):
    KEEP = "keep"
    CLAMP_TO_ZERO = "clamp_to_zero"
    ERROR = "error"


@dataclass(frozen=True)
class IndicatorSystem:
    """Assembled linear system: one row per query point."""

    matrix: np.ndarray
    rhs: np.ndarray
    layout: SystemLayout
    sample_count: int

    def __post_init__(self):
        A = np.asarray(self.matrix, dtype=float)
        b = np.asarray(self.rhs, dtype=float)
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "rhs", b)
        if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
            raise ValueError("matrix rows and rhs length must agree")
        if not np.all(np.isin(b, (0.0, 0.5, 1.0))):
            raise ValueError("rhs entries must be 0, 1/2 or 1")

    @property
    def query_count(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SolverConfig:
    """Tikhonov weight lambda, rhs convention, and negative-weight handling.

    regularization=None picks lambda = 1e-6 * max|A| at solve time.
    """

    regularization: float | None = AUTO_REGULARIZATION
    rhs_mode: RhsMode = RhsMode.INTERIOR_ONE
    negative_weight_policy: NegativeWeightPolicy = NegativeWeightPolicy.CLAMP_TO_ZERO

    def __post_init__(self):
        if self.regularization is not None and self.regularization < 0:
            raise ValueError("regularization must be nonnegative")


@dataclass(frozen=True)
class SolveDiagnostics:
    rows: int
    cols: int
    regularization: float
    negative_count: int


@dataclass(frozen=True)
class WeightSolution:
    """Recovered vector elements mu_j, scalar elements tau_j = ||mu_j||."""

    mu: np.ndarray  # (N_Y, n)
    tau: np.ndarray  # (N_Y,)
    residual_norm: float
    diagnostics: SolveDiagnostics
    offset: float | None = None

    def __post_init__(self):
        if np.any(self.tau < 0):
            raise ValueError("tau must be nonnegative")


def _rhs_values(rhs_mode, count: int) -> np.ndarray:
    if isinstance(rhs_mode, RhsMode):
        if rhs_mode is RhsMode.ON_SURFACE_HALF:
            return np.full(count, 0.5)
        if rhs_mode is RhsMode.INTERIOR_ONE:
            return np.ones(count)
        raise ValueError("mixed_offset rhs requires per-row values or the Riemannian assembler")
    vals = np.asarray(rhs_mode, dtype=float)
    if vals.shape != (count,):
        raise ValueError("per-row rhs must have one value per query")
    return vals


def assemble_vector_system(queries: PointCloud, sample: PointCloud,
                           config: KernelConfig, rhs_mode=RhsMode.INTERIOR_ONE) -> IndicatorSystem:
    """Rows K(x_i, y_j)_k over columns (j, k); unknowns are the mu_jk."""
    if queries.dim != sample.dim:
        raise ValueError("queries and sample must share an ambient dimension")
    X, Y = queries.points, sample.points
    n, n_y = sample.dim, len(sample)
    A = np.empty((len(queries), n * n_y))
    for lo in range(0, len(queries), _CHUNK):
        hi = min(lo + _CHUNK, len(queries))
        A[lo:hi] = double_layer_block(X[lo:hi], Y, config).reshape(hi - lo, n * n_y)
    return IndicatorSystem(A, _rhs_values(rhs_mode, len(queries)),
                           SystemLayout.VECTOR_UNKNOWNS, n_y)


def assemble_scalar_system(queries: PointCloud, sample: OrientedSample,
                           config: KernelConfig, rhs_mode=RhsMode.INTERIOR_ONE) -> IndicatorSystem:
    """Rows dot(K(x_i, y_j), N(y_j)); unknowns are the scalars tau_j."""
    if queries.dim != sample.dim:
        raise ValueError("queries and sample must share an ambient dimension")
    X, Y, N = queries.points, sample.points, sample.normals
    A = np.empty((len(queries), len(sample)))
    for lo in range(0, len(queries), _CHUNK):
        hi = min(lo + _CHUNK, len(queries))
        A[lo:hi] = np.einsum("ijk,jk->ij", double_layer_block(X[lo:hi], Y, config), N)
    return IndicatorSystem(A, _rhs_values(rhs_mode, len(queries)),
                           SystemLayout.SCALAR_UNKNOWNS, len(sample))


def _tikhonov_solve(A: np.ndarray, b: np.ndarray, lam: float) -> np.ndarray:
    if lam > 0.0:
        m, n = A.shape
        if m >= n:
            stacked = np.vstack([A, lam * np.eye(n)])
            b_aug = np.concatenate([b, np.zeros(n)])
            Q, R = sla.qr(stacked, mode="economic")
            return sla.solve_triangular(R, Q.T @ b_aug)
        # wide system: economy SVD costs O(m^2 n) instead of QR's O(m n^2)
        U, s, Vt = sla.svd(A, full_matrices=False)
        factors = s / (s * s + lam * lam)
        return Vt.T @ (factors * (U.T @ b))
    w, _, rank, _ = sla.lstsq(A, b, lapack_driver="gelsd")
    if rank < A.shape[1]:
        raise IllPosedSystemError(
            f"system has rank {rank} < {A.shape[1]} unknowns and no regularization")
    return w


def solve_weights(system: IndicatorSystem, config: SolverConfig = SolverConfig(),
                  normals: np.ndarray | None = None) -> WeightSolution:
    """Solve the indicator system and unpack mu/tau per the system layout.

    Scalar layouts need the sample normals to reconstruct mu_j = tau_j N(y_j).
    """
    A, b = system.matrix, system.rhs
    if A.shape[0] < 1:
        raise ValueError("system must have at least one row")
    lam = config.regularization
    if lam is None:
        scale = float(np.max(np.abs(A))) if A.size else 0.0
        lam = _AUTO_SCALE * scale

    w = _tikhonov_solve(A, b, lam)
    residual = float(np.linalg.norm(A @ w - b))

    offset = None
    if system.layout is SystemLayout.VECTOR_UNKNOWNS:
        mu = w.reshape(system.sample_count, -1)
        tau = np.linalg.norm(mu, axis=1)
        negative = 0
    else:
        raw = w
        if system.layout is SystemLayout.OFFSET_AUGMENTED:
            offset = float(w[-1])
            raw = w[:-1]
        if normals is None:
            raise ValueError("scalar layouts need normals to reconstruct mu")
        normals = np.asarray(normals, dtype=float)
        if normals.shape[0] != system.sample_count:
            raise ValueError("normals count must match the sample count")
        negative = int(np.sum(raw < 0))
        policy = config.negative_weight_policy
        if policy is NegativeWeightPolicy.ERROR and negative:
            raise NegativeWeightError(f"{negative} negative raw scalar weights")
        if policy is NegativeWeightPolicy.CLAMP_TO_ZERO:
            tau = np.maximum(raw, 0.0)
        else:
            tau = np.abs(raw)
        mu = tau[:, None] * normals

    diag = SolveDiagnostics(rows=A.shape[0], cols=A.shape[1],
                            regularization=lam, negative_count=negative)
    return WeightSolution(mu=mu, tau=tau, residual_norm=residual,
                          diagnostics=diag, offset=offset)


def indicator_values(queries: PointCloud, sample: PointCloud,
                     solution: WeightSolution, config: KernelConfig) -> np.ndarray:
    """Recovered indicator sum_j dot(K(x, y_j), mu_j) (+ offset) at each query."""
    if queries.dim != sample.dim:
        raise ValueError("queries and sample must share an ambient dimension")
    X, Y = queries.points, sample.points
    out = np.empty(len(queries))
    for lo in range(0, len(queries), _CHUNK):
        hi = min(lo + _CHUNK, len(queries))
        out[lo:hi] = np.einsum("ijk,jk->i", double_layer_block(X[lo:hi], Y, config),
                               solution.mu)
    if solution.offset is not None:
        out += solution.offset
    return out


def evaluate_indicator(x, sample: PointCloud, solution: WeightSolution,
                       config: KernelConfig) -> float:
    """Indicator estimate at a single point."""
    pt = np.asarray(x, dtype=float).reshape(1, -1)
    try:
        return float(indicator_values(PointCloud(pt), sample, solution, config)[0])
    except SingularEvaluationError:
        raise SingularEvaluationError(
            "indicator requested at a sample point with zero softening") from None


def integrate_function(f_values: np.ndarray, solution: WeightSolution) -> float:
    """Riemann-style sum over the sample: sum_j f(y_j) tau_j."""
    f = np.asarray(f_values, dtype=float)
    if f.shape != solution.tau.shape:
        raise ValueError("f_values length must equal the sample count")
    return float(np.dot(f, solution.tau))
