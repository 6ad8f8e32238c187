"""
Tests for the distance index: agreement with brute force, the gradient away
from and on the data set, and input checks.
"""
import numpy as np
import pytest
from scipy.spatial.distance import cdist

from distancefield import DistanceIndex, distance, distance_gradient
from pointcloud import PointSet, generate_shape


def test_distance_matches_brute_force():
    """k-d tree answers equal exhaustive search to 1e-12 (N = 10^4, 100 queries)."""
    rng = np.random.default_rng(0)
    S = PointSet(dim=3, points=rng.uniform(-1, 1, size=(10_000, 3)))
    queries = rng.uniform(-1.5, 1.5, size=(100, 3))
    idx = DistanceIndex(S, 0.05)
    expected = cdist(queries, S.points).min(axis=1)
    np.testing.assert_allclose(distance(idx, queries), expected, rtol=0, atol=1e-12)


def test_small_sets_use_brute_force():
    S = PointSet(dim=2, points=[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    idx = DistanceIndex(S, 0.1)
    assert "brute-force" in repr(idx)
    dist, nearest = idx.nearest([0.9, 0.2])
    assert nearest == 1
    assert dist == pytest.approx(np.hypot(0.1, 0.2))


def test_single_point_query_returns_scalar():
    idx = DistanceIndex(generate_shape("heart2d", 24), 0.1)
    assert np.ndim(idx.distance([0.0, 0.0])) == 0
    assert idx.distance_gradient([0.0, 0.0]).shape == (2,)


def test_gradient_is_unit_direction_off_the_data():
    S = PointSet(dim=2, points=[[0.0, 0.0], [5.0, 0.0], [0.0, 5.0]])
    idx = DistanceIndex(S, 0.1)
    g = distance_gradient(idx, np.array([[0.3, 0.4], [-1.0, 0.0]]))
    np.testing.assert_allclose(g, [[0.6, 0.8], [-1.0, 0.0]], atol=1e-15)


def test_gradient_on_the_data_is_bounded():
    """On an isolated data point the centred difference vanishes; never longer than 1."""
    S = generate_shape("heart2d", 24)
    idx = DistanceIndex(S, 0.05)
    g = idx.distance_gradient(S.points)
    assert np.all(np.linalg.norm(g, axis=1) <= 1.0 + 1e-12)
    np.testing.assert_allclose(idx.distance(S.points), 0.0, atol=0)


def test_input_checks():
    S = generate_shape("heart2d", 24)
    with pytest.raises(ValueError):
        DistanceIndex(S, 0.0)
    idx = DistanceIndex(S, 0.1)
    with pytest.raises(ValueError):
        idx.distance(np.zeros((3, 3)))
