"""
Writers for extracted geometry and a minimal OBJ reader.

    csv   "loop_id,x,y" rows; closed loops repeat their first vertex
    svg   one <path> per loop over an optional scatter of the data points
    obj   "v x y z" records then 1-based "f i j k" records
"""
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np

from pointcloud.models import PointSet

from .models import Polyline2D, TriMesh

logger = logging.getLogger(__name__)

FORMATS = ("csv", "svg", "obj")

SVG_SIZE = 600
SVG_MARGIN = 0.05


def _infer_format(path: Path, format: Optional[str]) -> str:
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt not in FORMATS:
        raise ValueError(f"unknown export format '{fmt}', expected one of {FORMATS}")
    return fmt


def _write_csv(poly: Polyline2D, path: Path) -> None:
    with open(path, "w") as fh:
        fh.write("loop_id,x,y\n")
        for k, (loop, closed) in enumerate(zip(poly.loops, poly.closed)):
            rows = np.vstack([loop, loop[:1]]) if closed else loop
            for x, y in rows:
                fh.write(f"{k},{x:.17g},{y:.17g}\n")


def _write_svg(poly: Polyline2D, path: Path, points: Optional[PointSet]) -> None:
    clouds = [poly.vertices]
    if points is not None:
        clouds.append(points.points)
    clouds = [c for c in clouds if len(c)]
    everything = np.concatenate(clouds) if clouds else np.zeros((1, 2))
    lo, hi = everything.min(axis=0), everything.max(axis=0)
    span = float(np.max(hi - lo)) or 1.0
    pad = SVG_MARGIN * span
    lo, size = lo - pad, span + 2 * pad
    scale = SVG_SIZE / size

    def to_px(xy: np.ndarray) -> np.ndarray:
        # SVG y grows downwards
        return np.column_stack([(xy[:, 0] - lo[0]) * scale, SVG_SIZE - (xy[:, 1] - lo[1]) * scale])

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">'
    ]
    if points is not None:
        lines.append('<g fill="#888888">')
        for x, y in to_px(points.points):
            lines.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="1.5"/>')
        lines.append("</g>")
    for loop, closed in zip(poly.loops, poly.closed):
        px = to_px(loop)
        d = "M " + " L ".join(f"{x:.3f} {y:.3f}" for x, y in px) + (" Z" if closed else "")
        lines.append(f'<path d="{d}" fill="none" stroke="#c0392b" stroke-width="1.5"/>')
    lines.append("</svg>")
    path.write_text("\n".join(lines) + "\n")


def _write_obj(mesh: TriMesh, path: Path) -> None:
    with open(path, "w") as fh:
        for x, y, z in mesh.vertices:
            fh.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
        for i, j, k in mesh.triangles + 1:
            fh.write(f"f {i} {j} {k}\n")


def export(
    geometry: Union[Polyline2D, TriMesh],
    path: Union[str, Path],
    format: Optional[str] = None,
    points: Optional[PointSet] = None,
) -> Path:
    """
    Write `geometry` to `path`; the format comes from the suffix unless given.
    `points` is drawn under the curves in SVG output and ignored otherwise.
    I/O errors propagate as OSError.
    """
    path = Path(path)
    fmt = _infer_format(path, format)
    if fmt == "obj":
        if not isinstance(geometry, TriMesh):
            raise ValueError("obj export needs a triangle mesh")
        _write_obj(geometry, path)
    else:
        if not isinstance(geometry, Polyline2D):
            raise ValueError(f"{fmt} export needs a 2D polyline")
        if fmt == "csv":
            _write_csv(geometry, path)
        else:
            _write_svg(geometry, path, points)
    logger.debug("Wrote %s geometry to %s", fmt, path)
    return path


def read_obj(path: Union[str, Path]) -> TriMesh:
    """Read the v/f records of an OBJ file (polygons are fanned into triangles)."""
    vertices, triangles = [], []
    with open(path) as fh:
        for line in fh:
            tokens = line.split()
            if not tokens:
                continue
            if tokens[0] == "v":
                vertices.append([float(t) for t in tokens[1:4]])
            elif tokens[0] == "f":
                ids = [int(t.split("/")[0]) for t in tokens[1:]]
                ids = [i - 1 if i > 0 else len(vertices) + i for i in ids]
                for k in range(1, len(ids) - 1):
                    triangles.append([ids[0], ids[k], ids[k + 1]])
    return TriMesh(
        vertices=np.asarray(vertices, dtype=float).reshape(-1, 3),
        triangles=np.asarray(triangles, dtype=np.int64).reshape(-1, 3),
    )
