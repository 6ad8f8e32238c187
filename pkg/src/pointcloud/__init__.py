from .io import load_points, save_points
from .models import PointSet
from .shapes import SHAPES, generate_shape
from .transforms import fit_to_box, perturb, subsample

__all__ = [
    "PointSet",
    "SHAPES",
    "fit_to_box",
    "generate_shape",
    "load_points",
    "perturb",
    "save_points",
    "subsample",
]
