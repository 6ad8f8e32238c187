from .index import DistanceIndex, distance, distance_gradient

__all__ = ["DistanceIndex", "distance", "distance_gradient"]
