import numpy as np

from .models import PointSet


def perturb(ps: PointSet, eta: float, seed: int) -> PointSet:
    """Shift every coordinate by an independent uniform draw in [-eta, eta]."""
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    if eta == 0:
        return PointSet(dim=ps.dim, points=ps.points.copy())
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-eta, eta, size=ps.points.shape)
    return PointSet(dim=ps.dim, points=ps.points + noise)


def subsample(ps: PointSet, stride: int) -> PointSet:
    """Keep every `stride`-th point, starting with the first."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    return PointSet(dim=ps.dim, points=ps.points[::stride].copy())


def fit_points(points: np.ndarray, lo, hi, fill: float = 1.0) -> np.ndarray:
    """
    Uniformly scale and translate `points` so their bounding box is centred in
    the box [lo, hi] and its largest extent spans `fill` of the smallest box side.
    Aspect ratios are preserved.
    """
    points = np.asarray(points, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), points.shape[1:])
    hi = np.broadcast_to(np.asarray(hi, dtype=float), points.shape[1:])
    pmin, pmax = points.min(axis=0), points.max(axis=0)
    extent = float(np.max(pmax - pmin))
    if extent == 0.0:
        raise ValueError("cannot rescale a point set with zero extent")
    scale = fill * float(np.min(hi - lo)) / extent
    return (points - 0.5 * (pmin + pmax)) * scale + 0.5 * (lo + hi)


def fit_to_box(ps: PointSet, lo, hi, fill: float = 0.9) -> PointSet:
    return PointSet(dim=ps.dim, points=fit_points(ps.points, lo, hi, fill))
