from .contour import contour2d, isosurface3d, sample_field
from .export import export, read_obj
from .measures import energy, hausdorff
from .models import Polyline2D, TriMesh

__all__ = [
    "Polyline2D",
    "TriMesh",
    "contour2d",
    "energy",
    "export",
    "hausdorff",
    "isosurface3d",
    "read_obj",
    "sample_field",
]
