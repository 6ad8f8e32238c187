"""
Synthetic data sets: a 2D heart curve, a 3D heart surface and the boundary of
two intersecting, rotated cubes.

Every generator works in the shape's own coordinates first (the `*_raw`
functions, exposed for verification against the shape equations) and is then
placed in the computational domain. Sampling is deterministic given the seed.
"""
import logging
from typing import Callable, Dict

import numpy as np
from skimage import measure

from core.exceptions import UnknownShapeError

from .models import PointSet

logger = logging.getLogger(__name__)

# The hearts fill [-HEART_HALF_EXTENT, HEART_HALF_EXTENT]^n.
HEART_HALF_EXTENT = 1.5

CUBE_SIDE = 1.4
CUBE_CENTERS = (np.array([-0.35, -0.25, -0.2]), np.array([0.35, 0.25, 0.2]))


# -- heart2d ---------------------------------------------------------------


def heart2d_curve(t: np.ndarray) -> np.ndarray:
    """x = 16 sin^3 t, y = 13 cos t - 5 cos 2t - 2 cos 3t - cos 4t."""
    t = np.asarray(t, dtype=float)
    x = 16.0 * np.sin(t) ** 3
    y = 13.0 * np.cos(t) - 5.0 * np.cos(2 * t) - 2.0 * np.cos(3 * t) - np.cos(4 * t)
    return np.column_stack([x, y])


def heart2d_raw(count: int, seed: int = 0) -> np.ndarray:
    """Uniform in the curve parameter; the seed is unused."""
    t = 2.0 * np.pi * np.arange(count) / count
    return heart2d_curve(t)


def _heart2d_frame() -> np.ndarray:
    # dense sampling fixes the bounding box independently of `count`
    return heart2d_curve(np.linspace(0.0, 2.0 * np.pi, 20001))


def place_heart2d(raw: np.ndarray) -> np.ndarray:
    """Map raw heart coordinates into [-1.5, 1.5]^2 (aspect ratio kept)."""
    return _place(raw, _heart2d_frame())


# -- heart3d ---------------------------------------------------------------


def heart3d_implicit(p: np.ndarray) -> np.ndarray:
    """(x^2 + 9/4 y^2 + z^2 - 1)^3 - x^2 z^3 - 9/80 y^2 z^3."""
    p = np.atleast_2d(p)
    x, y, z = p[:, 0], p[:, 1], p[:, 2]
    a = x**2 + 2.25 * y**2 + z**2 - 1.0
    return a**3 - x**2 * z**3 - 0.1125 * y**2 * z**3


def heart3d_gradient(p: np.ndarray) -> np.ndarray:
    p = np.atleast_2d(p)
    x, y, z = p[:, 0], p[:, 1], p[:, 2]
    a2 = 3.0 * (x**2 + 2.25 * y**2 + z**2 - 1.0) ** 2
    gx = a2 * 2.0 * x - 2.0 * x * z**3
    gy = a2 * 4.5 * y - 0.225 * y * z**3
    gz = a2 * 2.0 * z - 3.0 * x**2 * z**2 - 0.3375 * y**2 * z**2
    return np.column_stack([gx, gy, gz])


def _heart3d_mesh(resolution: int = 64):
    axis = np.linspace(-1.5, 1.5, resolution)
    X, Y, Z = np.meshgrid(axis, axis, axis, indexing="ij")
    F = heart3d_implicit(np.column_stack([X.ravel(), Y.ravel(), Z.ravel()]))
    h = axis[1] - axis[0]
    verts, faces, _, _ = measure.marching_cubes(
        F.reshape(X.shape), level=0.0, spacing=(h, h, h)
    )
    return verts - 1.5, faces


def _project_to_heart3d(p: np.ndarray, max_steps: int = 40, tol: float = 1e-12):
    """Newton steps along the gradient; returns projected points and a success mask."""
    p = p.copy()
    start = p.copy()
    for _ in range(max_steps):
        f = heart3d_implicit(p)
        g = heart3d_gradient(p)
        gg = np.einsum("ij,ij->i", g, g)
        active = (np.abs(f) > tol) & (gg > 1e-16)
        if not active.any():
            break
        p[active] -= (f[active] / gg[active])[:, None] * g[active]
    f = heart3d_implicit(p)
    gg = np.einsum("ij,ij->i", heart3d_gradient(p), heart3d_gradient(p))
    ok = (np.abs(f) <= tol) & (gg > 1e-8) & (np.linalg.norm(p - start, axis=1) < 0.1)
    return p, ok


def heart3d_raw(count: int, seed: int = 0) -> np.ndarray:
    """
    Area-uniform samples on the heart surface: triangles of a marching-cubes mesh
    of the implicit are drawn with probability proportional to area, a uniform
    barycentric point is taken in each, and the point is projected onto the zero
    set. Projections that fail (near the two singular points) are rejected.
    """
    rng = np.random.default_rng(seed)
    verts, faces = _heart3d_mesh()
    tri = verts[faces]
    areas = 0.5 * np.linalg.norm(np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]), axis=1)
    prob = areas / areas.sum()

    accepted = []
    total = 0
    while total < count:
        batch = max(2 * (count - total), 16)
        idx = rng.choice(len(faces), size=batch, p=prob)
        r1 = np.sqrt(rng.random(batch))[:, None]
        r2 = rng.random(batch)[:, None]
        t = tri[idx]
        cand = (1 - r1) * t[:, 0] + r1 * (1 - r2) * t[:, 1] + r1 * r2 * t[:, 2]
        projected, ok = _project_to_heart3d(cand)
        accepted.append(projected[ok])
        total += int(ok.sum())
    return np.concatenate(accepted)[:count]


def _heart3d_frame() -> np.ndarray:
    verts, _ = _heart3d_mesh()
    return verts


def place_heart3d(raw: np.ndarray) -> np.ndarray:
    return _place(raw, _heart3d_frame())


# -- cubes3d ---------------------------------------------------------------


def _rotation(axis: int, degrees: float) -> np.ndarray:
    c, s = np.cos(np.radians(degrees)), np.sin(np.radians(degrees))
    i, j = [k for k in range(3) if k != axis]
    R = np.eye(3)
    R[i, i], R[i, j], R[j, i], R[j, j] = c, -s, s, c
    return R


CUBE_ROTATIONS = (_rotation(0, 20.0), _rotation(2, 40.0))


def cube_local(p: np.ndarray, which: int) -> np.ndarray:
    """Coordinates of `p` in the frame of cube `which` (0 or 1), centred at its center."""
    return (np.atleast_2d(p) - CUBE_CENTERS[which]) @ CUBE_ROTATIONS[which]


def cubes3d_raw(count: int, seed: int = 0) -> np.ndarray:
    """
    Points uniform by area on the boundary of the union of the two cubes. Faces
    all have the same area, so a face is picked uniformly; samples strictly
    inside the other cube are rejected.
    """
    rng = np.random.default_rng(seed)
    half = 0.5 * CUBE_SIDE
    accepted = []
    total = 0
    while total < count:
        batch = max(2 * (count - total), 16)
        which = rng.integers(0, 2, size=batch)
        face = rng.integers(0, 6, size=batch)
        local = rng.uniform(-half, half, size=(batch, 3))
        axis = face // 2
        local[np.arange(batch), axis] = np.where(face % 2 == 0, -half, half)
        world = np.empty_like(local)
        for k in (0, 1):
            sel = which == k
            world[sel] = local[sel] @ CUBE_ROTATIONS[k].T + CUBE_CENTERS[k]
        keep = np.ones(batch, dtype=bool)
        for k in (0, 1):
            sel = which == k
            other = np.abs(cube_local(world[sel], 1 - k)).max(axis=1)
            keep[sel] = other >= half - 1e-12
        accepted.append(world[keep])
        total += int(keep.sum())
    return np.concatenate(accepted)[:count]


# -- registry --------------------------------------------------------------


def _place(raw: np.ndarray, frame: np.ndarray) -> np.ndarray:
    """Centre the frame's bounding box and scale its largest extent to the heart box."""
    pmin, pmax = frame.min(axis=0), frame.max(axis=0)
    extent = float(np.max(pmax - pmin))
    scale = 2.0 * HEART_HALF_EXTENT / extent
    return (raw - 0.5 * (pmin + pmax)) * scale


SHAPES: Dict[str, Callable[[int, int], np.ndarray]] = {
    "heart2d": lambda count, seed: place_heart2d(heart2d_raw(count, seed)),
    "heart3d": lambda count, seed: place_heart3d(heart3d_raw(count, seed)),
    "cubes3d": cubes3d_raw,
}

SHAPE_DIMS = {"heart2d": 2, "heart3d": 3, "cubes3d": 3}


def generate_shape(name: str, count: int, seed: int = 0) -> PointSet:
    """Sample `count` points on the named shape inside the [-2, 2]^n domain."""
    if name not in SHAPES:
        raise UnknownShapeError(f"unknown shape '{name}', expected one of {sorted(SHAPES)}")
    if count < 4:
        raise ValueError("count must be >= 4")
    points = SHAPES[name](count, seed)
    logger.debug("Generated %d points on %s (seed %d)", len(points), name, seed)
    return PointSet(dim=SHAPE_DIMS[name], points=points)
