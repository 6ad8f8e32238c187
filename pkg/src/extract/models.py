from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

# triangles with at most this area are degenerate
MIN_TRIANGLE_AREA = 1e-14


def _frozen(v, dtype=float) -> np.ndarray:
    arr = np.array(v, dtype=dtype)
    arr.setflags(write=False)
    return arr


def triangle_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    if len(triangles) == 0:
        return np.zeros(0)
    t = vertices[triangles]
    return 0.5 * np.linalg.norm(np.cross(t[:, 1] - t[:, 0], t[:, 2] - t[:, 0]), axis=1)


class Polyline2D(BaseModel):
    """Zero level set of a 2D field as a list of vertex chains."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    loops: Tuple[np.ndarray, ...] = ()
    closed: Tuple[bool, ...] = ()

    @field_validator("loops", mode="before")
    @classmethod
    def coerce_loops(cls, v) -> Tuple[np.ndarray, ...]:
        return tuple(_frozen(loop).reshape(-1, 2) for loop in v)

    @model_validator(mode="after")
    def validate_loops(self):
        if len(self.loops) != len(self.closed):
            raise ValueError("one closed flag per loop is required")
        for k, loop in enumerate(self.loops):
            if len(loop) < 2:
                raise ValueError(f"loop {k} has fewer than two vertices")
            if np.any(np.all(loop[1:] == loop[:-1], axis=1)):
                raise ValueError(f"loop {k} repeats a vertex consecutively")
        return self

    @property
    def is_empty(self) -> bool:
        return len(self.loops) == 0

    @property
    def vertices(self) -> np.ndarray:
        if self.is_empty:
            return np.zeros((0, 2))
        return np.concatenate(self.loops)

    def segments(self) -> np.ndarray:
        """All edges as an (m, 2, 2) array, closing edges included."""
        parts = []
        for loop, closed in zip(self.loops, self.closed):
            ends = np.roll(loop, -1, axis=0) if closed else loop[1:]
            starts = loop if closed else loop[:-1]
            parts.append(np.stack([starts, ends], axis=1))
        return np.concatenate(parts) if parts else np.zeros((0, 2, 2))

    def length(self) -> float:
        seg = self.segments()
        return float(np.sum(np.linalg.norm(seg[:, 1] - seg[:, 0], axis=1)))


class TriMesh(BaseModel):
    """Triangulated zero level set of a 3D field."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vertices: np.ndarray
    triangles: np.ndarray

    @field_validator("vertices", mode="before")
    @classmethod
    def coerce_vertices(cls, v) -> np.ndarray:
        return _frozen(v).reshape(-1, 3)

    @field_validator("triangles", mode="before")
    @classmethod
    def coerce_triangles(cls, v) -> np.ndarray:
        return _frozen(v, dtype=np.int64).reshape(-1, 3)

    @model_validator(mode="after")
    def validate_mesh(self):
        if len(self.triangles):
            if self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices):
                raise ValueError("triangle index out of range")
            small = triangle_areas(self.vertices, self.triangles) <= MIN_TRIANGLE_AREA
            if small.any():
                raise ValueError(f"{int(small.sum())} degenerate triangles")
        return self

    @classmethod
    def empty(cls) -> "TriMesh":
        return cls(vertices=np.zeros((0, 3)), triangles=np.zeros((0, 3), dtype=np.int64))

    @property
    def is_empty(self) -> bool:
        return len(self.triangles) == 0

    def edges(self) -> np.ndarray:
        """Unique undirected edges, (E, 2) with the smaller index first."""
        if self.is_empty:
            return np.zeros((0, 2), dtype=np.int64)
        return np.unique(self._half_edges(), axis=0)

    def _half_edges(self) -> np.ndarray:
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        return np.sort(e, axis=1)

    def is_closed(self) -> bool:
        """Every edge is shared by exactly two triangles."""
        if self.is_empty:
            return False
        _, counts = np.unique(self._half_edges(), axis=0, return_counts=True)
        return bool(np.all(counts == 2))

    def euler_characteristic(self) -> int:
        used = len(np.unique(self.triangles)) if not self.is_empty else 0
        return used - len(self.edges()) + len(self.triangles)

    def area(self) -> float:
        return float(np.sum(triangle_areas(self.vertices, self.triangles)))

    def components(self) -> List[np.ndarray]:
        """Triangle index sets of the edge-connected components."""
        if self.is_empty:
            return []
        n = len(self.vertices)
        e = self.edges()
        graph = coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
        _, labels = connected_components(graph, directed=False)
        tri_labels = labels[self.triangles[:, 0]]
        return [np.flatnonzero(tri_labels == lab) for lab in np.unique(tri_labels)]
