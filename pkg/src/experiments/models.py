from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from extract.contour import DEFAULT_RESOLUTION_2D, DEFAULT_RESOLUTION_3D
from gridding.grids import FULL_GRID_DATA_GAP
from pointcloud.shapes import SHAPE_DIMS


class ExperimentConfig(BaseModel):
    """
    One reconstruction experiment. Optional quantities left unset take the
    defaults derived from the lattice and the data: rho = rho_factor * dx,
    anchor spacing 4 dx, anchor margin 2 delta_s, initial radius 1.05 times the
    farthest data point from the centre of the data bounding box, anchor value
    R^2. Full lattices pin their boundary nodes at the anchor value and give
    way to data points closer than 0.9 dx; reduced grids do neither.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(default="experiment", min_length=1)
    dimension: int = Field(..., ge=2, le=3)

    # Data
    shape: Optional[str] = Field(default=None, description="Synthetic shape name")
    input_path: Optional[str] = Field(default=None, description="Point file (txt or obj)")
    point_count: Optional[int] = Field(default=None, ge=4)
    subsample_stride: int = Field(default=1, ge=1)
    fit_box: bool = Field(default=False, description="Rescale loaded points into the domain")
    noise_eta: float = Field(default=0.0, ge=0)
    seed: int = 0

    # Nodes
    domain_min: Tuple[float, ...]
    domain_max: Tuple[float, ...]
    lattice_count: int = Field(..., ge=4)
    grid_mode: Literal["full", "reduced"] = "reduced"
    delta_s: Optional[float] = Field(default=None, gt=0)
    use_anchors: Optional[bool] = None
    pin_boundary: Optional[bool] = Field(
        default=None, description="Hold the lattice boundary nodes at the anchor value"
    )
    data_gap: Optional[float] = Field(
        default=None, ge=0, description="Drop lattice nodes closer than data_gap * dx to S"
    )
    anchor_spacing: Optional[float] = Field(default=None, gt=0)
    anchor_margin: Optional[float] = Field(default=None, ge=0)
    anchor_value: Optional[float] = None
    initial_radius: Optional[float] = Field(default=None, gt=0)

    # Reconstruction
    kernel: Literal["linear", "multiquadric"] = "multiquadric"
    rho_factor: float = Field(default=1.0, gt=0)

    # Scheme
    dt: float = Field(..., gt=0)
    iterations: int = Field(..., ge=0)
    tolerance: float = Field(default=0.0, ge=0)
    singular_c: float = Field(default=1.0, gt=0)
    singular_alpha: float = Field(default=0.5, gt=0)
    scheme_form: Literal["average", "difference"] = "average"

    # Outputs
    output_dir: Optional[str] = None
    resolution: Optional[int] = Field(default=None, ge=8)
    energy_every: int = Field(default=10, ge=0, description="0 records only the final energy")

    @field_validator("domain_min", "domain_max", mode="before")
    def assemble_bounds(cls, v: Union[str, List[float], Tuple[float, ...]]):
        if isinstance(v, str):
            return tuple(float(i.strip()) for i in v.strip("()[] ").split(","))
        elif isinstance(v, (list, tuple)):
            return tuple(v)
        raise ValueError(v)

    @model_validator(mode="after")
    def validate_experiment(self):
        if (self.shape is None) == (self.input_path is None):
            raise ValueError("exactly one of shape and input_path must be given")
        if self.shape is not None:
            if self.shape not in SHAPE_DIMS:
                raise ValueError(f"unknown shape '{self.shape}'")
            if SHAPE_DIMS[self.shape] != self.dimension:
                raise ValueError(f"shape '{self.shape}' is {SHAPE_DIMS[self.shape]}D")
            if self.point_count is None:
                raise ValueError("point_count is required with a synthetic shape")
        if len(self.domain_min) != self.dimension or len(self.domain_max) != self.dimension:
            raise ValueError("domain bounds must have one coordinate per dimension")
        if any(not lo < hi for lo, hi in zip(self.domain_min, self.domain_max)):
            raise ValueError("domain_min must be below domain_max on every axis")
        if self.grid_mode == "reduced" and self.delta_s is None:
            raise ValueError("delta_s is required for a reduced grid")
        return self

    @property
    def anchors_enabled(self) -> bool:
        if self.use_anchors is None:
            return self.grid_mode == "reduced"
        return self.use_anchors

    @property
    def boundary_pinned(self) -> bool:
        if self.pin_boundary is None:
            return self.grid_mode == "full"
        return self.pin_boundary

    @property
    def node_gap(self) -> float:
        if self.data_gap is not None:
            return self.data_gap
        return FULL_GRID_DATA_GAP if self.grid_mode == "full" else 0.0

    @property
    def extraction_resolution(self) -> int:
        if self.resolution is not None:
            return self.resolution
        return DEFAULT_RESOLUTION_2D if self.dimension == 2 else DEFAULT_RESOLUTION_3D
