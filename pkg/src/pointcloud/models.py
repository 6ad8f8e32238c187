from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class PointSet(BaseModel):
    """The data set S: N points in R^dim, immutable once built."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int
    points: np.ndarray

    @field_validator("dim")
    @classmethod
    def validate_dim(cls, v: int) -> int:
        if v not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        return v

    @field_validator("points", mode="before")
    @classmethod
    def coerce_points(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=float)
        if arr.ndim == 1 and arr.size:
            arr = arr.reshape(1, -1)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def validate_points(self):
        """Every point has `dim` finite coordinates and N >= dim + 1."""
        if self.points.ndim != 2 or self.points.shape[1] != self.dim:
            raise ValueError(f"points must be an (N, {self.dim}) array")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("points must be finite")
        if len(self.points) < self.dim + 1:
            raise ValueError(f"at least {self.dim + 1} points are required, got {len(self.points)}")
        return self

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.points, other.points)

    __hash__ = None

    @property
    def centroid(self) -> np.ndarray:
        return self.points.mean(axis=0)

    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.points.min(axis=0), self.points.max(axis=0)
