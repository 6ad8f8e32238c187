import logging
from typing import Optional

import numpy as np

from pointcloud.models import PointSet

from .models import Box, LevelSetState, NodeSet

logger = logging.getLogger(__name__)

# the default sphere clears the farthest data point by 5%
RADIUS_FACTOR = 1.05


def data_center(S: PointSet) -> np.ndarray:
    """Midpoint of the data set's bounding box."""
    lo, hi = S.bounding_box()
    return (lo + hi) / 2.0


def default_radius(domain: Box, S: Optional[PointSet] = None) -> float:
    """
    RADIUS_FACTOR times the largest distance from `data_center(S)` to a data
    point, or without data 0.9 times the distance from the origin to the
    nearest domain corner.
    """
    if S is None:
        return 0.9 * float(np.min(np.linalg.norm(domain.corners(), axis=1)))
    reach = float(np.max(np.linalg.norm(S.points - data_center(S), axis=1)))
    return RADIUS_FACTOR * reach


def initial_condition(
    nodes: NodeSet,
    R: float,
    C: Optional[float] = None,
    center: Optional[np.ndarray] = None,
) -> LevelSetState:
    """
    u0 = |x - center|^2 - R^2 on interior nodes (center defaults to the origin),
    C on anchors (defaults to the node set's anchor value).
    """
    if R <= 0:
        raise ValueError("R must be positive")
    C = nodes.anchor_value if C is None else float(C)
    center = np.zeros(nodes.dim) if center is None else np.asarray(center, dtype=float)

    values = np.sum((nodes.interior - center) ** 2, axis=1) - R**2
    if nodes.is_data.any() and np.any(values[nodes.is_data] >= 0):
        logger.warning(
            "Initial sphere of radius %.4g does not enclose the data set (%d data nodes outside)",
            R,
            int(np.sum(values[nodes.is_data] >= 0)),
        )
    return LevelSetState(values=values, anchor_values=np.full(nodes.anchor_count, C))
