"""
Plain-text point files.

One point per line, whitespace (or comma) separated coordinates, `#` comments.
OBJ files are accepted too: `v x y z` records give points and every other OBJ
record is skipped.
"""
import logging
import math
from pathlib import Path
from typing import List, Union

import numpy as np

from core.exceptions import PointFileError

from .models import PointSet

logger = logging.getLogger(__name__)

# OBJ records that carry no vertex position
_OBJ_SKIP = {"vn", "vt", "vp", "f", "l", "o", "g", "s", "usemtl", "mtllib"}


def _parse_line(path: Path, lineno: int, raw: str, dim: int) -> Union[List[float], None]:
    line = raw.strip()
    if not line or line.startswith("#"):
        return None
    tokens = line.replace(",", " ").split()
    if tokens[0] in _OBJ_SKIP:
        return None
    if tokens[0] == "v":
        tokens = tokens[1:]
    if len(tokens) < dim:
        raise PointFileError(
            path, f"expected at least {dim} numeric fields, got {len(tokens)}", lineno
        )
    try:
        coords = [float(tok) for tok in tokens[:dim]]
    except ValueError as e:
        raise PointFileError(path, f"non-numeric field ({e})", lineno) from e
    if not all(math.isfinite(c) for c in coords):
        raise PointFileError(path, "non-finite coordinate", lineno)
    return coords


def load_points(path: Union[str, Path], dim: int) -> PointSet:
    """Read a point file, keeping the first `dim` columns of every data line."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise PointFileError(path, f"cannot read file ({e})") from e

    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        coords = _parse_line(path, lineno, raw, dim)
        if coords is not None:
            rows.append(coords)

    logger.debug("Loaded %d points from %s", len(rows), path)
    try:
        return PointSet(dim=dim, points=np.array(rows, dtype=float).reshape(-1, dim))
    except ValueError as e:
        raise PointFileError(path, str(e)) from e


def save_points(ps: PointSet, path: Union[str, Path]) -> None:
    """Write `ps` so that `load_points(path, ps.dim)` returns it bit-for-bit."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {len(ps)} points, dim {ps.dim}"]
    lines += [" ".join(format(c, ".17g") for c in p) for p in ps.points]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
