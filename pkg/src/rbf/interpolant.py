"""
RBF space reconstruction with an affine polynomial tail:

    I[u](x) = c0 + c.x + sum_i lambda_i phi(|x - x_i|)

closed by the moment conditions sum_i lambda_i = 0 and sum_i lambda_i x_i = 0.
The saddle-point matrix depends only on the centers, so it is factorized once
(`assemble`) and every time step only back-substitutes (`fit`).
"""
import logging
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np
from scipy.linalg import LinAlgWarning, get_lapack_funcs, lu_factor, lu_solve
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from core.config import settings
from core.exceptions import NonFiniteError, SingularSystemError

from .kernels import KernelSpec

logger = logging.getLogger(__name__)

COINCIDENT_TOL = 1e-12

# cap on the number of entries of one dense (points x centers) block
_BLOCK_ENTRIES = 1 << 22


class Factorization:
    """LU factors of [[Phi, P], [P^T, 0]] for a fixed set of centers."""

    def __init__(self, centers: np.ndarray, kernel: KernelSpec, lu, piv, rcond: float):
        self.centers = centers
        self.kernel = kernel
        self.lu = lu
        self.piv = piv
        self.rcond = rcond

    @property
    def size(self) -> int:
        return self.lu.shape[0]

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    def __repr__(self) -> str:
        return (
            f"Factorization(centers={len(self.centers)}, kernel={self.kernel.describe()}, "
            f"rcond={self.rcond:.3e})"
        )


class Interpolant:
    """A fitted, frozen reconstruction; evaluation is safe from several threads."""

    def __init__(
        self,
        centers: np.ndarray,
        kernel: KernelSpec,
        lam: np.ndarray,
        c0: float,
        c: np.ndarray,
        factorization: Optional[Factorization] = None,
    ):
        self.centers = centers
        self.kernel = kernel
        self.lam = lam
        self.c0 = float(c0)
        self.c = c
        self.factorization = factorization

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    def __call__(self, x) -> np.ndarray:
        return evaluate(self, x)

    def gradient(self, x) -> np.ndarray:
        return evaluate_gradient(self, x)


def _centers_of(nodes) -> np.ndarray:
    centers = getattr(nodes, "all_nodes", nodes)
    centers = np.asarray(centers, dtype=float)
    if centers.ndim != 2:
        raise ValueError("centers must be an (M, dim) array")
    return centers


def assemble(nodes, kernel: KernelSpec) -> Factorization:
    """
    Build and factorize the interpolation system for `nodes` (a NodeSet, whose
    interior nodes and anchors are all centers, or a raw (M, dim) array).

    Raises:
        SingularSystemError: coincident centers, too few or degenerate centers,
            or a numerically singular matrix.
    """
    centers = _centers_of(nodes)
    M, dim = centers.shape
    if M < dim + 1:
        raise SingularSystemError(f"need at least {dim + 1} centers, got {M}")
    if not np.all(np.isfinite(centers)):
        raise ValueError("centers must be finite")

    pairs = cKDTree(centers).query_pairs(r=COINCIDENT_TOL, output_type="ndarray")
    if len(pairs):
        i, j = pairs[0]
        raise SingularSystemError(f"coincident centers {i} and {j}", rcond=0.0)

    n = M + dim + 1
    A = np.zeros((n, n))
    A[:M, :M] = kernel.phi(cdist(centers, centers))
    A[:M, M] = 1.0
    A[:M, M + 1 :] = centers
    A[M, :M] = 1.0
    A[M + 1 :, :M] = centers.T

    anorm = np.linalg.norm(A, 1)
    with warnings.catch_warnings():
        warnings.simplefilter("error", LinAlgWarning)
        try:
            lu, piv = lu_factor(A, check_finite=False)
        except LinAlgWarning as e:
            raise SingularSystemError(f"singular interpolation matrix ({e})", rcond=0.0) from e

    (gecon,) = get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if info != 0 or not rcond > np.finfo(float).eps:
        raise SingularSystemError(
            "interpolation matrix is numerically singular", rcond=float(rcond)
        )

    logger.debug(
        "Factorized %dx%d system (%s), rcond %.3e", n, n, kernel.describe(), rcond
    )
    return Factorization(centers, kernel, lu, piv, float(rcond))


def fit(fact: Factorization, values) -> Interpolant:
    """Solve for (lambda, c0, c) given nodal values, reusing the factorization."""
    values = np.asarray(values, dtype=float)
    M = len(fact.centers)
    if values.shape != (M,):
        raise ValueError(f"expected {M} nodal values, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError("nodal values must be finite")

    rhs = np.concatenate([values, np.zeros(fact.dim + 1)])
    sol = lu_solve((fact.lu, fact.piv), rhs, check_finite=False)
    if not np.all(np.isfinite(sol)):
        raise NonFiniteError("interpolation solve produced non-finite coefficients")
    return Interpolant(fact.centers, fact.kernel, sol[:M], sol[M], sol[M + 1 :], fact)


def _worker_count() -> int:
    return settings.RECON_THREADS or os.cpu_count() or 1


def _map_blocks(func: Callable[[np.ndarray], np.ndarray], x: np.ndarray, n_centers: int):
    rows = max(64, min(settings.EVAL_CHUNK_SIZE, _BLOCK_ENTRIES // max(n_centers, 1)))
    blocks = [x[i : i + rows] for i in range(0, len(x), rows)]
    workers = min(_worker_count(), len(blocks))
    if workers <= 1:
        parts = [func(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(func, blocks))
    return parts


def _as_points(itp: Interpolant, x):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != itp.dim:
        raise ValueError(f"expected points of dimension {itp.dim}, got {x.shape[1]}")
    return x, single


def evaluate(itp: Interpolant, x):
    """I[u](x) for a point (dim,) or a batch (m, dim)."""
    x, single = _as_points(itp, x)
    if len(x) == 0:
        return np.zeros(0)

    def block(xb: np.ndarray) -> np.ndarray:
        r = cdist(xb, itp.centers)
        return itp.c0 + xb @ itp.c + itp.kernel.phi(r) @ itp.lam

    out = np.concatenate(_map_blocks(block, x, len(itp.centers)))
    return out[0] if single else out


def evaluate_gradient(itp: Interpolant, x) -> np.ndarray:
    """Analytic gradient c + sum_i lambda_i phi'(r_i) (x - x_i) / r_i."""
    x, single = _as_points(itp, x)
    if len(x) == 0:
        return np.zeros((0, itp.dim))

    def block(xb: np.ndarray) -> np.ndarray:
        w = itp.kernel.dphi_over_r(cdist(xb, itp.centers)) * itp.lam
        return itp.c + w.sum(axis=1)[:, None] * xb - w @ itp.centers

    out = np.concatenate(_map_blocks(block, x, len(itp.centers)))
    return out[0] if single else out
