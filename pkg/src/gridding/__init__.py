from .anchors import pin_boundary, place_anchors
from .grids import add_data_nodes, build_full_grid, build_reduced_grid
from .initial import data_center, default_radius, initial_condition
from .models import Box, LevelSetState, NodeSet

__all__ = [
    "Box",
    "LevelSetState",
    "NodeSet",
    "add_data_nodes",
    "build_full_grid",
    "build_reduced_grid",
    "data_center",
    "default_radius",
    "initial_condition",
    "pin_boundary",
    "place_anchors",
]
