from typing import Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class SchemeConfig(BaseModel):
    """Time stepping parameters of the semi-Lagrangian iteration."""

    model_config = ConfigDict(frozen=True)

    dt: float = Field(..., gt=0, description="Time step")
    singular_c: float = Field(default=1.0, gt=0, description="Singular threshold constant")
    singular_alpha: float = Field(default=0.5, gt=0, description="Singular threshold exponent")
    max_iterations: int = Field(default=150, ge=0, description="Iteration cap")
    tolerance: float = Field(default=0.0, ge=0, description="Stop when E1 drops below")
    override: bool = Field(
        default=False, description="Test mode: d = 1 and Dd = 0 (pure mean curvature flow)"
    )
    form: Literal["average", "difference"] = Field(
        default="average", description="Evaluate the update as an average or a difference quotient"
    )

    @property
    def singular_threshold(self) -> float:
        """Gradients with |D| below this take the isotropic branch."""
        return self.singular_c * self.dt**self.singular_alpha


class TangentFrame(BaseModel):
    """Unit tangent sigma (2D) or orthonormal tangent pair (nu1, nu2) (3D)."""

    model_config = ConfigDict(frozen=True)

    sigma: Optional[Tuple[float, float]] = None
    nu1: Optional[Tuple[float, float, float]] = None
    nu2: Optional[Tuple[float, float, float]] = None
    degenerate: bool = False
