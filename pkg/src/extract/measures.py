from typing import Union

import numpy as np
from scipy.spatial import cKDTree

from distancefield import DistanceIndex

from .models import Polyline2D, TriMesh, triangle_areas

Geometry = Union[Polyline2D, TriMesh]


def energy(geometry: Geometry, idx: DistanceIndex) -> float:
    """
    Discrete distance-weighted size of the extracted geometry: sum of
    d(midpoint) * length over segments, or d(centroid) * area over triangles.
    """
    if geometry.is_empty:
        return 0.0
    if isinstance(geometry, Polyline2D):
        seg = geometry.segments()
        if len(seg) == 0:
            return 0.0
        weights = np.linalg.norm(seg[:, 1] - seg[:, 0], axis=1)
        at = seg.mean(axis=1)
    else:
        weights = triangle_areas(geometry.vertices, geometry.triangles)
        at = geometry.vertices[geometry.triangles].mean(axis=1)
    return float(np.sum(idx.distance(at) * weights))


def hausdorff(a, b) -> float:
    """Symmetric Hausdorff distance between two point samples."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if len(a) == 0 or len(b) == 0:
        raise ValueError("both samples must be non-empty")
    ab = cKDTree(b).query(a)[0].max()
    ba = cKDTree(a).query(b)[0].max()
    return float(max(ab, ba))
