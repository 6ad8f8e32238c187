"""
Euclidean distance to the data set, d(x) = min_p |x - p|, and its gradient Dd.

Queries use a k-d tree (`scipy.spatial.cKDTree`); data sets with fewer than
BRUTE_FORCE_BELOW points are searched exhaustively. All queries accept either a
single point of shape (dim,) or a batch of shape (m, dim).
"""
from typing import Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from pointcloud.models import PointSet

BRUTE_FORCE_BELOW = 32

# below this distance the nearest-point direction is not used
EPS_D = 1e-9


class DistanceIndex:
    """Immutable nearest-point index over a PointSet; safe for concurrent reads."""

    def __init__(self, source: PointSet, dx: float):
        if dx <= 0:
            raise ValueError("dx must be positive")
        self.source = source
        self.dx = float(dx)
        self.dim = source.dim
        self._points = source.points
        self._tree = cKDTree(self._points) if len(source) >= BRUTE_FORCE_BELOW else None

    def __repr__(self) -> str:
        kind = "kd-tree" if self._tree is not None else "brute-force"
        return f"DistanceIndex(n={len(self.source)}, dim={self.dim}, dx={self.dx:g}, {kind})"

    def _as_batch(self, x) -> Tuple[np.ndarray, bool]:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        if x.shape[1] != self.dim:
            raise ValueError(f"expected points of dimension {self.dim}, got {x.shape[1]}")
        return x, single

    def nearest(self, x) -> Tuple[np.ndarray, np.ndarray]:
        """Return (distance, index of a nearest data point) for each query."""
        q, single = self._as_batch(x)
        if self._tree is not None:
            dist, idx = self._tree.query(q, k=1)
        else:
            block = cdist(q, self._points)
            idx = np.argmin(block, axis=1)
            dist = block[np.arange(len(q)), idx]
        if single:
            return dist[0], idx[0]
        return dist, idx

    def distance(self, x):
        return self.nearest(x)[0]

    def distance_gradient(self, x) -> np.ndarray:
        """
        Unit direction away from the nearest data point where d > EPS_D; centred
        finite differences of d (spacing dx) at or next to the data set, scaled
        back to unit length if they exceed it.
        """
        q, single = self._as_batch(x)
        dist, idx = self.nearest(q)
        grad = np.zeros_like(q)

        far = dist > EPS_D
        grad[far] = (q[far] - self._points[idx[far]]) / dist[far, None]

        near = ~far
        if near.any():
            qn = q[near]
            fd = np.empty_like(qn)
            for k in range(self.dim):
                step = np.zeros(self.dim)
                step[k] = self.dx
                fd[:, k] = (self.distance(qn + step) - self.distance(qn - step)) / (2.0 * self.dx)
            norm = np.linalg.norm(fd, axis=1)
            over = norm > 1.0
            fd[over] /= norm[over, None]
            grad[near] = fd

        return grad[0] if single else grad


def distance(idx: DistanceIndex, x):
    return idx.distance(x)


def distance_gradient(idx: DistanceIndex, x) -> np.ndarray:
    return idx.distance_gradient(x)
