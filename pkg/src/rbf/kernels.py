from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator


class KernelSpec(BaseModel):
    """
    Radial term of the interpolant.

    linear:        phi(t) = t
    multiquadric:  phi(t) = sqrt(t^2 + rho^2)
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["linear", "multiquadric"] = "multiquadric"
    rho: Optional[float] = None

    @model_validator(mode="after")
    def validate_rho(self):
        if self.kind == "multiquadric" and (self.rho is None or not self.rho > 0):
            raise ValueError("multiquadric kernel needs a positive shape parameter rho")
        return self

    def phi(self, r: np.ndarray) -> np.ndarray:
        if self.kind == "linear":
            return np.asarray(r, dtype=float)
        return np.sqrt(np.square(r) + self.rho**2)

    def dphi_over_r(self, r: np.ndarray) -> np.ndarray:
        """phi'(r) / r, the factor multiplying (x - x_i) in the gradient."""
        r = np.asarray(r, dtype=float)
        if self.kind == "linear":
            # zero at a center: the cone's subgradient is centred there
            out = np.zeros_like(r)
            np.divide(1.0, r, out=out, where=r > 0)
            return out
        return 1.0 / np.sqrt(np.square(r) + self.rho**2)

    def describe(self) -> str:
        return self.kind if self.kind == "linear" else f"{self.kind}(rho={self.rho:.6g})"
