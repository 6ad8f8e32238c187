from datetime import datetime
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class SuccessReport(BaseModel):
    """Summary of a completed experiment run"""
    message: str = "success"
    run_id: str
    name: str
    dimension: int
    data_points: int
    interior_nodes: int
    grid_nodes: int
    data_nodes: int
    anchor_nodes: int
    lattice_nodes: int
    iterations: int
    final_e1: Optional[float] = None
    final_energy: Optional[float] = None
    outputs: Dict[str, str] = {}
    timings: Dict[str, float] = {}
    timestamp: datetime = Field(default_factory=datetime.now)
    exit_code: int = 0

    def summary_lines(self) -> List[str]:
        """Render as "key: value" lines, timings last."""
        lines = [
            f"name: {self.name}",
            f"run_id: {self.run_id}",
            f"dimension: {self.dimension}",
            f"data_points: {self.data_points}",
            f"lattice_nodes: {self.lattice_nodes}",
            f"grid_nodes: {self.grid_nodes}",
            f"data_nodes: {self.data_nodes}",
            f"interior_nodes: {self.interior_nodes}",
            f"anchor_nodes: {self.anchor_nodes}",
            f"band_fraction: {self.grid_nodes / max(self.lattice_nodes, 1):.4f}",
            f"iterations: {self.iterations}",
            f"final_e1: {self.final_e1!r}",
            f"final_energy: {self.final_energy!r}",
        ]
        lines += [f"time_{stage}: {seconds:.4f}" for stage, seconds in self.timings.items()]
        return lines


class ErrorReport(BaseModel):
    """Failure details rendered by the command line front end"""
    message: str = "error"
    stage: Optional[str] = None
    location: str = "unknown"
    exit_code: int

    def render(self) -> List[str]:
        head = f"error: {self.message}"
        if self.stage:
            head = f"error: stage '{self.stage}' failed: {self.message}"
        return [head, f"  at {self.location}"]
