"""
Computational node sets: the full lattice, the narrow band d(x, S) < delta_S
around the data set, and the data-set points themselves as nodes.
"""
import logging
from typing import Tuple, Union

import numpy as np
from scipy.spatial import cKDTree

from core.exceptions import EmptyGridError
from distancefield.index import DistanceIndex
from pointcloud.models import PointSet

from .models import Box, NodeSet

logger = logging.getLogger(__name__)

# data points closer than DEDUP_FACTOR * dx to a node are the same node
DEDUP_FACTOR = 1e-9

# lattice nodes closer than FULL_GRID_DATA_GAP * dx to a data point give way to it
FULL_GRID_DATA_GAP = 0.9


def as_box(domain: Union[Box, Tuple]) -> Box:
    if isinstance(domain, Box):
        return domain
    lo, hi = domain
    return Box(lo=tuple(float(v) for v in lo), hi=tuple(float(v) for v in hi))


def lattice(domain: Union[Box, Tuple], per_axis_count: int) -> Tuple[np.ndarray, float]:
    """Evenly spaced nodes in lexicographic order, and their spacing."""
    box = as_box(domain)
    if per_axis_count < 4:
        raise ValueError("per_axis_count must be >= 4")
    spacings = box.extent / (per_axis_count - 1)
    if not np.allclose(spacings, spacings[0], rtol=1e-12, atol=0.0):
        raise ValueError("the domain must have equal extents for a uniform spacing")
    axes = [np.linspace(l, h, per_axis_count) for l, h in zip(box.lo, box.hi)]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([g.ravel() for g in grids]), float(spacings[0])


def build_full_grid(domain, per_axis_count: int) -> NodeSet:
    box = as_box(domain)
    nodes, dx = lattice(box, per_axis_count)
    return NodeSet(
        domain=box,
        dx=dx,
        interior=nodes,
        is_data=np.zeros(len(nodes), dtype=bool),
        anchors=np.empty((0, box.dim)),
        lattice_size=len(nodes),
    )


def add_data_nodes(nodes: NodeSet, S: PointSet, gap: float = 0.0) -> NodeSet:
    """
    Append the points of S as data nodes. A data point within 1e-9 dx of an
    existing node takes that node's place (flagged as data); repeated data
    points are kept once. With `gap` > 0, non-data nodes closer than gap * dx
    to a data point are removed first.
    """
    if S.dim != nodes.dim:
        raise ValueError("data set and node set dimensions differ")
    if gap < 0:
        raise ValueError("gap must be non-negative")
    tol = DEDUP_FACTOR * nodes.dx
    interior = nodes.interior.copy()
    is_data = nodes.is_data.copy()
    if gap > 0 and len(interior):
        dist, _ = cKDTree(S.points).query(interior, k=1)
        crowded = (dist < gap * nodes.dx) & ~is_data
        if crowded.any():
            logger.info(
                "Removing %d lattice nodes closer than %.3g dx to the data set",
                int(crowded.sum()),
                gap,
            )
            interior, is_data = interior[~crowded], is_data[~crowded]

    unique, first = np.unique(S.points, axis=0, return_index=True)
    data = S.points[np.sort(first)]
    if len(unique) < len(S):
        logger.warning("Data set holds %d repeated points; each is used once", len(S) - len(unique))
    if len(data) > 1:
        pairs = cKDTree(data).query_pairs(r=tol, output_type="ndarray")
        if len(pairs):
            drop = np.zeros(len(data), dtype=bool)
            drop[pairs.max(axis=1)] = True
            logger.warning("Dropping %d data points closer than %.3g to another", drop.sum(), tol)
            data = data[~drop]

    appended = []
    if len(interior):
        dist, idx = cKDTree(interior).query(data, k=1)
    else:
        dist, idx = np.full(len(data), np.inf), np.zeros(len(data), dtype=int)
    for p, dj, j in zip(data, dist, idx):
        if dj <= tol:
            interior[j] = p
            is_data[j] = True
        else:
            appended.append(p)

    if appended:
        interior = np.concatenate([interior, np.array(appended)])
        is_data = np.concatenate([is_data, np.ones(len(appended), dtype=bool)])

    return NodeSet(
        domain=nodes.domain,
        dx=nodes.dx,
        interior=interior,
        is_data=is_data,
        anchors=nodes.anchors,
        anchor_value=nodes.anchor_value,
        lattice_size=nodes.lattice_size,
    )


def build_reduced_grid(
    domain, per_axis_count: int, S: PointSet, delta_s: float, gap: float = 0.0
) -> NodeSet:
    """Lattice nodes with d(x_j, S) < delta_s, then the data set as data nodes."""
    if delta_s <= 0:
        raise ValueError("delta_s must be positive")
    box = as_box(domain)
    nodes, dx = lattice(box, per_axis_count)
    d = DistanceIndex(S, dx).distance(nodes)
    band = nodes[d < delta_s]
    if len(band) == 0:
        raise EmptyGridError(
            f"no lattice node within delta_s={delta_s:g} of the data set (dx={dx:g})"
        )
    logger.info(
        "Reduced grid keeps %d of %d lattice nodes (%.1f%%)",
        len(band),
        len(nodes),
        100.0 * len(band) / len(nodes),
    )
    reduced = NodeSet(
        domain=box,
        dx=dx,
        interior=band,
        is_data=np.zeros(len(band), dtype=bool),
        anchors=np.empty((0, box.dim)),
        lattice_size=len(nodes),
    )
    return add_data_nodes(reduced, S, gap)
