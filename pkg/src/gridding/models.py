import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationInfo, field_validator, model_validator
from scipy.spatial import cKDTree

logger = logging.getLogger(__name__)

COINCIDENT_TOL = 1e-12

KIND_GRID = "grid"
KIND_DATA = "data"
KIND_ANCHOR = "anchor"


def _frozen_array(v, dtype=float) -> np.ndarray:
    arr = np.array(v, dtype=dtype)
    arr.setflags(write=False)
    return arr


class Box(BaseModel):
    """Axis-aligned computational domain."""

    model_config = ConfigDict(frozen=True)

    lo: Tuple[float, ...]
    hi: Tuple[float, ...]

    @model_validator(mode="after")
    def validate_bounds(self):
        if len(self.lo) != len(self.hi) or len(self.lo) not in (2, 3):
            raise ValueError("box bounds must both have 2 or 3 coordinates")
        if any(not l < h for l, h in zip(self.lo, self.hi)):
            raise ValueError("box needs lo < hi on every axis")
        return self

    @classmethod
    def cube(cls, half: float, dim: int) -> "Box":
        return cls(lo=(-half,) * dim, hi=(half,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def extent(self) -> np.ndarray:
        return np.asarray(self.hi) - np.asarray(self.lo)

    def corners(self) -> np.ndarray:
        grids = np.meshgrid(*[(l, h) for l, h in zip(self.lo, self.hi)], indexing="ij")
        return np.column_stack([g.ravel() for g in grids])

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        points = np.atleast_2d(points)
        return np.all(
            (points >= np.asarray(self.lo) - tol) & (points <= np.asarray(self.hi) + tol), axis=1
        )


class NodeSet(BaseModel):
    """
    Computational nodes: interior nodes updated by the scheme (lattice nodes and
    data-set nodes) followed by anchor nodes holding the fixed value
    `anchor_value`. Node order is lattice (lexicographic), data, anchors.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    domain: Box
    dx: float
    interior: np.ndarray
    is_data: np.ndarray
    anchors: np.ndarray
    anchor_value: float = 0.0
    lattice_size: int = 0

    @field_validator("interior", "anchors", mode="before")
    @classmethod
    def coerce_points(cls, v, info: ValidationInfo) -> np.ndarray:
        arr = np.array(v, dtype=float)
        if "domain" in info.data:
            arr = arr.reshape(-1, info.data["domain"].dim)
        return _frozen_array(arr)

    @field_validator("is_data", mode="before")
    @classmethod
    def coerce_flags(cls, v) -> np.ndarray:
        return _frozen_array(v, dtype=bool)

    @model_validator(mode="after")
    def validate_nodes(self):
        dim = self.domain.dim
        if self.dx <= 0:
            raise ValueError("dx must be positive")
        interior, anchors = self.interior, self.anchors
        if interior.ndim != 2 or interior.shape[1] != dim or anchors.shape[1:] != (dim,):
            raise ValueError(f"nodes must have {dim} coordinates")
        if self.is_data.shape != (len(interior),):
            raise ValueError("is_data needs one flag per interior node")
        everything = np.concatenate([interior, anchors])
        scale = float(np.max(np.abs(self.domain.extent)))
        if not np.all(self.domain.contains(everything, tol=1e-12 * scale)):
            raise ValueError("all nodes must lie in the domain box")
        if len(everything) > 1:
            pairs = cKDTree(everything).query_pairs(r=COINCIDENT_TOL, output_type="ndarray")
            if len(pairs):
                i, j = pairs[0]
                raise ValueError(f"nodes {i} and {j} coincide")
        return self

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def all_nodes(self) -> np.ndarray:
        """Interior nodes followed by anchors, the order of the RBF centers."""
        return np.concatenate([self.interior, self.anchors])

    @property
    def interior_count(self) -> int:
        return len(self.interior)

    @property
    def anchor_count(self) -> int:
        return len(self.anchors)

    @property
    def count(self) -> int:
        return self.interior_count + self.anchor_count

    @property
    def data_nodes(self) -> np.ndarray:
        return self.interior[self.is_data]

    @property
    def grid_nodes(self) -> np.ndarray:
        return self.interior[~self.is_data]

    @property
    def kinds(self) -> np.ndarray:
        kinds = np.where(self.is_data, KIND_DATA, KIND_GRID)
        return np.concatenate([kinds, np.full(self.anchor_count, KIND_ANCHOR)])

    def with_anchors(self, anchors: np.ndarray, value: float) -> "NodeSet":
        """Attach anchors, skipping any that coincide with an interior node."""
        anchors = np.asarray(anchors, dtype=float).reshape(-1, self.dim)
        if len(anchors) and len(self.interior):
            dist, _ = cKDTree(self.interior).query(anchors, k=1)
            clash = dist <= 1e-9 * self.dx
            if clash.any():
                logger.warning(
                    "Skipping %d anchors that coincide with interior nodes", int(clash.sum())
                )
                anchors = anchors[~clash]
        return NodeSet(
            domain=self.domain,
            dx=self.dx,
            interior=self.interior,
            is_data=self.is_data,
            anchors=anchors,
            anchor_value=float(value),
            lattice_size=self.lattice_size,
        )

    def dump(self, path: Union[str, Path]) -> None:
        """Write "kind x y [z]" lines in node order."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [
            " ".join([kind] + [format(c, ".17g") for c in p])
            for kind, p in zip(self.kinds, self.all_nodes)
        ]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")


class LevelSetState(BaseModel):
    """Nodal values u^n on the interior nodes, anchor values, iteration and E1 history."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    anchor_values: np.ndarray
    iteration: int = 0
    history: Tuple[float, ...] = ()

    @field_validator("values", "anchor_values", mode="before")
    @classmethod
    def coerce_values(cls, v) -> np.ndarray:
        return _frozen_array(v).reshape(-1)

    @model_validator(mode="after")
    def validate_finite(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError("level-set values must be finite")
        return self

    @property
    def full_values(self) -> np.ndarray:
        """Values in RBF center order: interior then anchors."""
        return np.concatenate([self.values, self.anchor_values])

    def advance(self, values: np.ndarray) -> "LevelSetState":
        """Next iterate; anchors and history carried over unchanged."""
        return LevelSetState(
            values=values,
            anchor_values=self.anchor_values,
            iteration=self.iteration + 1,
            history=self.history,
        )

    def record(self, e1: float) -> "LevelSetState":
        return self.model_copy(update={"history": self.history + (float(e1),)})
