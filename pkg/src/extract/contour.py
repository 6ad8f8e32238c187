"""
Zero level set extraction on a dense auxiliary lattice.

The field (a fitted Interpolant or any callable taking (m, dim) points) is
sampled on resolution^dim nodes spanning the domain; curves come from
marching squares and surfaces from marching cubes (`skimage.measure`).
"""
import logging
from typing import Callable, Tuple, Union

import numpy as np
from skimage import measure

from gridding import Box
from gridding.grids import as_box

from .models import MIN_TRIANGLE_AREA, Polyline2D, TriMesh, triangle_areas

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION_2D = 256
DEFAULT_RESOLUTION_3D = 96
MIN_RESOLUTION = 8

# relative size of the shift applied to samples that are exactly zero
ZERO_NUDGE = 1e-12
# vertices closer than WELD_FACTOR * h are merged
WELD_FACTOR = 1e-9

Field = Callable[[np.ndarray], np.ndarray]


def sample_field(
    field: Field, domain: Union[Box, Tuple], resolution: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Evaluate `field` on the lattice; returns (values reshaped to the lattice,
    lower corner, per-axis spacing). Exact zeros are nudged upwards.
    """
    box = as_box(domain)
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be >= {MIN_RESOLUTION}")
    axes = [np.linspace(l, h, resolution) for l, h in zip(box.lo, box.hi)]
    grids = np.meshgrid(*axes, indexing="ij")
    points = np.column_stack([g.ravel() for g in grids])
    values = np.asarray(field(points), dtype=float).reshape(grids[0].shape).copy()
    if not np.all(np.isfinite(values)):
        raise ValueError("field is not finite on the extraction lattice")

    spread = float(values.max() - values.min()) or 1.0
    values[values == 0.0] += ZERO_NUDGE * spread
    spacing = box.extent / (resolution - 1)
    return values, np.asarray(box.lo, dtype=float), spacing


def _has_crossing(values: np.ndarray) -> bool:
    return values.min() < 0.0 < values.max()


def contour2d(
    field: Field, domain: Union[Box, Tuple], resolution: int = DEFAULT_RESOLUTION_2D
) -> Polyline2D:
    """Zero level curve(s) of a 2D field with linear edge interpolation."""
    values, lo, spacing = sample_field(field, domain, resolution)
    if values.ndim != 2:
        raise ValueError("contour2d needs a 2D domain")
    if not _has_crossing(values):
        logger.warning("Field has no zero crossing on the %dx%d lattice", resolution, resolution)
        return Polyline2D()

    loops, closed = [], []
    for chain in measure.find_contours(values, 0.0):
        xy = lo + chain * spacing
        # find_contours links segments; a closed chain repeats its first vertex
        is_closed = len(xy) > 2 and np.array_equal(xy[0], xy[-1])
        if is_closed:
            xy = xy[:-1]
        keep = np.ones(len(xy), dtype=bool)
        keep[1:] = np.any(xy[1:] != xy[:-1], axis=1)
        xy = xy[keep]
        if len(xy) < 2:
            continue
        loops.append(xy)
        closed.append(bool(is_closed))

    logger.debug(
        "Extracted %d loops (%d closed) at resolution %d", len(loops), sum(closed), resolution
    )
    return Polyline2D(loops=loops, closed=tuple(closed))


def _weld(vertices: np.ndarray, triangles: np.ndarray, tol: float):
    keys = np.round(vertices / tol).astype(np.int64)
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    return vertices[first], inverse.reshape(-1)[triangles]


def _orient(
    vertices: np.ndarray,
    triangles: np.ndarray,
    values: np.ndarray,
    lo: np.ndarray,
    spacing: np.ndarray,
) -> np.ndarray:
    """Flip the winding when normals disagree with the lattice gradient."""
    gradient = np.stack(np.gradient(values, *spacing), axis=-1)
    t = vertices[triangles]
    normals = np.cross(t[:, 1] - t[:, 0], t[:, 2] - t[:, 0])
    cells = np.rint((t.mean(axis=1) - lo) / spacing).astype(int)
    cells = np.clip(cells, 0, np.array(values.shape) - 1)
    g = gradient[cells[:, 0], cells[:, 1], cells[:, 2]]
    agreement = np.einsum("ij,ij->i", normals, g)
    if np.sum(agreement) < 0:
        return triangles[:, [0, 2, 1]]
    return triangles


def isosurface3d(
    field: Field, domain: Union[Box, Tuple], resolution: int = DEFAULT_RESOLUTION_3D
) -> TriMesh:
    """Zero level surface of a 3D field, normals pointing towards increasing u."""
    values, lo, spacing = sample_field(field, domain, resolution)
    if values.ndim != 3:
        raise ValueError("isosurface3d needs a 3D domain")
    if not _has_crossing(values):
        logger.warning("Field has no zero crossing on the %d^3 lattice", resolution)
        return TriMesh.empty()

    verts, faces, _, _ = measure.marching_cubes(values, level=0.0, spacing=tuple(spacing))
    verts = verts + lo
    verts, faces = _weld(verts, faces, WELD_FACTOR * float(spacing.min()))

    distinct = (
        (faces[:, 0] != faces[:, 1]) & (faces[:, 1] != faces[:, 2]) & (faces[:, 0] != faces[:, 2])
    )
    faces = faces[distinct]
    faces = faces[triangle_areas(verts, faces) > MIN_TRIANGLE_AREA]

    used, faces = np.unique(faces, return_inverse=True)
    faces = faces.reshape(-1, 3)
    verts = verts[used]
    if len(faces):
        faces = _orient(verts, faces, values, lo, spacing)

    logger.debug(
        "Extracted %d vertices and %d triangles at resolution %d",
        len(verts),
        len(faces),
        resolution,
    )
    return TriMesh(vertices=verts, triangles=faces)
