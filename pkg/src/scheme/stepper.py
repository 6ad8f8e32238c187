"""
One explicit semi-Lagrangian step for

    u_t = d |Du| div(Du / |Du|) + Dd . Du

at every interior node x. The drift moves the foot to y = x + dt Dd(x); the
diffusion is resolved by averaging the reconstruction I = I[u^n] at points
displaced from y along tangent directions of the level set through x:

    2D          (I(y + h) + I(y - h)) / 2,                  h = sqrt(2 dt d) sigma
    3D          sum over +-  I(y + sqrt(2 dt d)(+-nu1 +- nu2)) / 4

Where |Du| < singular_c * dt**singular_alpha the tangent frame is unreliable
and the isotropic average over +-|h| e_i is used instead (weights 1/4 in 2D,
1/6 in 3D). Nodes with d <= EPS_D (the data points) keep their value, and
anchors are never updated.

The "difference" form evaluates the same quantity as I(y) plus weighted second
differences, e.g. u + dt d / |h|^2 (I(y+h) - 2 I(y) + I(y-h)) + (I(y) - u) in 2D.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from core.exceptions import SchemeDivergenceError
from distancefield import DistanceIndex
from distancefield.index import EPS_D
from gridding import LevelSetState
from rbf import Interpolant

from .models import SchemeConfig
from .tangent import tangent2d_batch, tangent3d_batch

logger = logging.getLogger(__name__)

BRANCH_REGULAR = "non-singular"
BRANCH_SINGULAR = "singular"


def _drift(x: np.ndarray, idx: Optional[DistanceIndex], cfg: SchemeConfig):
    if cfg.override:
        return np.ones(len(x)), np.zeros_like(x)
    if idx is None:
        raise ValueError("a distance index is required unless override mode is on")
    return idx.distance(x), idx.distance_gradient(x)


def _regular_offsets(D: np.ndarray, a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Displacement pairs (n, P, dim) along the tangent frame and the weight divisor."""
    dim = D.shape[1]
    if dim == 2:
        sigma, _ = tangent2d_batch(D)
        return (a[:, None] * sigma)[:, None, :], np.ones(len(D))
    nu1, nu2, _ = tangent3d_batch(D)
    h1 = a[:, None] * (nu1 + nu2)
    h2 = a[:, None] * (nu1 - nu2)
    return np.stack([h1, h2], axis=1), np.ones(len(D))


def _singular_offsets(n: int, dim: int, a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    offsets = a[:, None, None] * np.broadcast_to(np.eye(dim), (n, dim, dim))
    return offsets, np.full(n, float(dim))


def _average(itp: Interpolant, y: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    n, P, dim = offsets.shape
    points = np.concatenate([y[:, None, :] + offsets, y[:, None, :] - offsets], axis=1)
    values = itp(points.reshape(-1, dim)).reshape(n, 2 * P)
    return values.mean(axis=1)


def _difference(
    itp: Interpolant,
    u: np.ndarray,
    y: np.ndarray,
    offsets: np.ndarray,
    divisor: np.ndarray,
    td: np.ndarray,
) -> np.ndarray:
    n, P, dim = offsets.shape
    points = np.concatenate(
        [y[:, None, :], y[:, None, :] + offsets, y[:, None, :] - offsets], axis=1
    )
    values = itp(points.reshape(-1, dim)).reshape(n, 1 + 2 * P)
    at_foot = values[:, 0]
    second = values[:, 1 : 1 + P] - 2.0 * at_foot[:, None] + values[:, 1 + P :]
    h2 = np.einsum("npk,npk->np", offsets, offsets)
    # h = 0 exactly where d = 0; the update there is I(y)
    weight = np.divide(
        td[:, None], divisor[:, None] * h2, out=np.zeros_like(h2), where=h2 > 0
    )
    return u + np.sum(weight * second, axis=1) + (at_foot - u)


def _check_finite(values: np.ndarray, singular: np.ndarray, iteration: int) -> None:
    bad = np.flatnonzero(~np.isfinite(values))
    if len(bad):
        node = int(bad[0])
        branch = BRANCH_SINGULAR if singular[node] else BRANCH_REGULAR
        raise SchemeDivergenceError(node, branch, iteration)


def _step(
    state: LevelSetState,
    itp: Interpolant,
    idx: Optional[DistanceIndex],
    cfg: SchemeConfig,
    dim: int,
) -> LevelSetState:
    K = len(state.values)
    if itp.dim != dim:
        raise ValueError(f"expected a {dim}D interpolant, got {itp.dim}D")
    x = itp.centers[:K]
    u = state.values
    d, Dd = _drift(x, idx, cfg)
    y = x + cfg.dt * Dd
    D = itp.gradient(x)
    singular = np.linalg.norm(D, axis=1) < cfg.singular_threshold
    a = np.sqrt(2.0 * cfg.dt * d)
    td = cfg.dt * d
    # zero distance: no drift, no diffusion
    frozen = d <= EPS_D
    singular &= ~frozen

    new_values = u.copy()
    for mask, is_singular in ((~singular & ~frozen, False), (singular, True)):
        if not mask.any():
            continue
        if is_singular:
            offsets, divisor = _singular_offsets(int(mask.sum()), dim, a[mask])
        else:
            offsets, divisor = _regular_offsets(D[mask], a[mask])
        if cfg.form == "average":
            new_values[mask] = _average(itp, y[mask], offsets)
        else:
            new_values[mask] = _difference(itp, u[mask], y[mask], offsets, divisor, td[mask])

    _check_finite(new_values, singular, state.iteration + 1)
    logger.debug(
        "Step %d: %d singular of %d nodes", state.iteration + 1, int(singular.sum()), K
    )
    return state.advance(new_values)


def step2d(
    state: LevelSetState,
    itp: Interpolant,
    idx: Optional[DistanceIndex],
    cfg: SchemeConfig,
) -> LevelSetState:
    return _step(state, itp, idx, cfg, 2)


def step3d(
    state: LevelSetState,
    itp: Interpolant,
    idx: Optional[DistanceIndex],
    cfg: SchemeConfig,
) -> LevelSetState:
    return _step(state, itp, idx, cfg, 3)


def step(
    state: LevelSetState,
    itp: Interpolant,
    idx: Optional[DistanceIndex],
    cfg: SchemeConfig,
) -> LevelSetState:
    """Advance one time step, dispatching on the interpolant's dimension."""
    if itp.dim == 2:
        return step2d(state, itp, idx, cfg)
    if itp.dim == 3:
        return step3d(state, itp, idx, cfg)
    raise ValueError(f"unsupported dimension {itp.dim}")
