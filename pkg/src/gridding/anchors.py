import logging

import numpy as np

from distancefield.index import DistanceIndex
from pointcloud.models import PointSet

from .grids import as_box
from .models import NodeSet

logger = logging.getLogger(__name__)


def place_anchors(domain, S: PointSet, margin: float, spacing: float) -> np.ndarray:
    """
    One frame of anchor nodes on the boundary of the domain (the rectangle's
    perimeter in 2D, the box's faces in 3D), `spacing` apart (rounded so each
    side holds a whole number of intervals). Anchors closer than `margin` to the
    data set are dropped. The caller attaches them, with their value,
    through `NodeSet.with_anchors`.
    """
    if spacing <= 0:
        raise ValueError("anchor spacing must be positive")
    box = as_box(domain)
    lo, hi = np.asarray(box.lo), np.asarray(box.hi)

    smin, smax = S.bounding_box()
    if np.any(smin - margin < lo) or np.any(smax + margin > hi):
        logger.warning(
            "Data set bounding box expanded by margin %.3g reaches the domain frame", margin
        )

    axes = []
    for l, h in zip(lo, hi):
        intervals = max(1, int(round((h - l) / spacing)))
        axes.append(np.linspace(l, h, intervals + 1))
    grids = np.meshgrid(*axes, indexing="ij")
    candidates = np.column_stack([g.ravel() for g in grids])
    on_frame = np.any(np.isclose(candidates, lo) | np.isclose(candidates, hi), axis=1)
    frame = candidates[on_frame]

    d = DistanceIndex(S, spacing).distance(frame)
    keep = d >= margin
    if not keep.all():
        logger.warning(
            "Anchor frame collides with the reduced band: dropping %d of %d anchors",
            int((~keep).sum()),
            len(frame),
        )
    logger.debug("Placed %d anchors %.3g apart", int(keep.sum()), spacing)
    return frame[keep]


def pin_boundary(nodes: NodeSet, value: float) -> NodeSet:
    """
    Turn the lattice nodes on the domain boundary into anchors holding `value`.
    On a full lattice this is the anchor frame at spacing dx; data nodes on the
    boundary stay interior.
    """
    box = nodes.domain
    tol = 1e-9 * nodes.dx
    on_edge = np.any(
        np.isclose(nodes.interior, box.lo, rtol=0.0, atol=tol)
        | np.isclose(nodes.interior, box.hi, rtol=0.0, atol=tol),
        axis=1,
    )
    on_edge &= ~nodes.is_data
    logger.debug("Pinning %d boundary nodes at %.6g", int(on_edge.sum()), value)
    return NodeSet(
        domain=box,
        dx=nodes.dx,
        interior=nodes.interior[~on_edge],
        is_data=nodes.is_data[~on_edge],
        anchors=np.concatenate([nodes.anchors, nodes.interior[on_edge]]),
        anchor_value=float(value),
        lattice_size=nodes.lattice_size,
    )
