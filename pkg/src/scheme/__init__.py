from .loop import run, write_history
from .metric import update_metric
from .models import SchemeConfig, TangentFrame
from .stepper import step, step2d, step3d
from .tangent import tangent2d, tangent3d

__all__ = [
    "SchemeConfig",
    "TangentFrame",
    "run",
    "step",
    "step2d",
    "step3d",
    "tangent2d",
    "tangent3d",
    "update_metric",
    "write_history",
]
