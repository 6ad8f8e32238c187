"""
Tests for level-set extraction, the geometry models, the energy diagnostic and
the geometry writers.
"""
import logging

import numpy as np
import pytest

from distancefield import DistanceIndex
from extract import (
    Polyline2D,
    TriMesh,
    contour2d,
    energy,
    export,
    hausdorff,
    isosurface3d,
    read_obj,
)
from gridding import Box
from pointcloud import PointSet


def circle(p):
    return np.sum(p**2, axis=1) - 1.0


def two_spheres(p):
    a = np.linalg.norm(p - [-0.8, 0.0, 0.0], axis=1) - 0.5
    b = np.linalg.norm(p - [0.8, 0.0, 0.0], axis=1) - 0.5
    return np.minimum(a, b)


def test_contour_of_circle():
    """One closed loop; vertices within a lattice spacing of the true curve."""
    poly = contour2d(circle, Box.cube(2.0, 2), 64)
    assert len(poly.loops) == 1
    assert poly.closed == (True,)
    h = 4.0 / 63
    r = np.linalg.norm(poly.vertices, axis=1)
    assert np.max(np.abs(r - 1.0)) <= h
    assert poly.length() == pytest.approx(2 * np.pi, rel=1e-2)


def test_contour_touching_boundary_is_open():
    poly = contour2d(lambda p: p[:, 1] - 0.3, Box.cube(1.0, 2), 32)
    assert len(poly.loops) == 1
    assert poly.closed == (False,)
    np.testing.assert_allclose(poly.loops[0][:, 1], 0.3, atol=1e-12)


def test_contour_components_stable_under_refinement():
    def two_circles(p):
        return np.minimum(
            np.linalg.norm(p - [-1.0, 0.0], axis=1), np.linalg.norm(p - [1.0, 0.0], axis=1)
        ) - 0.5

    coarse = contour2d(two_circles, Box.cube(2.0, 2), 64)
    fine = contour2d(two_circles, Box.cube(2.0, 2), 128)
    assert len(coarse.loops) == len(fine.loops) == 2


def test_contour_without_crossing_warns(caplog):
    with caplog.at_level(logging.WARNING):
        poly = contour2d(lambda p: np.ones(len(p)), Box.cube(1.0, 2), 16)
    assert poly.is_empty
    assert "no zero crossing" in caplog.text
    with pytest.raises(ValueError):
        contour2d(circle, Box.cube(2.0, 2), 7)


def test_exact_zeros_are_nudged():
    """A field vanishing on lattice nodes still yields a curve."""
    poly = contour2d(lambda p: p[:, 0], Box.cube(1.0, 2), 9)
    assert len(poly.loops) == 1


def test_isosurface_of_sphere():
    """Closed genus-0 mesh with normals pointing towards increasing u (outwards)."""
    mesh = isosurface3d(circle, Box.cube(1.5, 3), 32)
    assert mesh.is_closed()
    assert mesh.euler_characteristic() == 2
    h = 3.0 / 31
    r = np.linalg.norm(mesh.vertices, axis=1)
    assert np.max(np.abs(r - 1.0)) <= h
    assert mesh.area() == pytest.approx(4 * np.pi, rel=2e-2)

    t = mesh.vertices[mesh.triangles]
    normals = np.cross(t[:, 1] - t[:, 0], t[:, 2] - t[:, 0])
    outward = np.einsum("ij,ij->i", normals, t.mean(axis=1)) > 0
    assert outward.all()


def test_isosurface_components():
    mesh = isosurface3d(two_spheres, Box.cube(1.5, 3), 40)
    assert len(mesh.components()) == 2
    assert mesh.is_closed()
    assert len(np.unique(mesh.vertices, axis=0)) == len(mesh.vertices)


def test_isosurface_without_crossing(caplog):
    with caplog.at_level(logging.WARNING):
        mesh = isosurface3d(lambda p: -np.ones(len(p)), Box.cube(1.0, 3), 10)
    assert mesh.is_empty
    assert not mesh.is_closed()
    assert "no zero crossing" in caplog.text


def test_trimesh_validation():
    with pytest.raises(ValueError):
        TriMesh(vertices=np.eye(3), triangles=[[0, 1, 3]])
    with pytest.raises(ValueError):
        TriMesh(vertices=[[0, 0, 0], [1, 0, 0], [2, 0, 0]], triangles=[[0, 1, 2]])


def test_polyline_validation():
    with pytest.raises(ValueError):
        Polyline2D(loops=[np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])], closed=(False,))
    with pytest.raises(ValueError):
        Polyline2D(loops=[np.array([[0.0, 0.0], [1.0, 0.0]])], closed=())


def test_tetrahedron_topology():
    verts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
    tris = [[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]]
    mesh = TriMesh(vertices=verts, triangles=tris)
    assert len(mesh.edges()) == 6
    assert mesh.is_closed()
    assert mesh.euler_characteristic() == 2
    open_mesh = TriMesh(vertices=verts, triangles=tris[:3])
    assert not open_mesh.is_closed()


def test_energy_of_square_loop():
    """Each side has length 2 and its midpoint lies at distance 1 from the origin."""
    S = PointSet(dim=2, points=[[0.0, 0.0], [10.0, 10.0], [-10.0, 10.0]])
    square = Polyline2D(
        loops=[np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])], closed=(True,)
    )
    assert energy(square, DistanceIndex(S, 0.1)) == pytest.approx(8.0)
    assert energy(Polyline2D(), DistanceIndex(S, 0.1)) == 0.0


def test_energy_of_triangle():
    S = PointSet(
        dim=3,
        points=[[1 / 3, 1 / 3, 1.0], [100.0, 0, 0], [0, 100.0, 0], [0, 0, 100.0]],
    )
    tri = TriMesh(vertices=[[0, 0, 0], [1, 0, 0], [0, 1, 0]], triangles=[[0, 1, 2]])
    assert energy(tri, DistanceIndex(S, 0.1)) == pytest.approx(0.5)
    assert energy(TriMesh.empty(), DistanceIndex(S, 0.1)) == 0.0


def test_export_csv(tmp_path):
    poly = Polyline2D(
        loops=[np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), np.array([[2.0, 2.0], [3.0, 3.0]])],
        closed=(True, False),
    )
    path = export(poly, tmp_path / "curve.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "loop_id,x,y"
    assert lines[1:] == ["0,0,0", "0,1,0", "0,0,1", "0,0,0", "1,2,2", "1,3,3"]


def test_export_svg_draws_points_and_paths(tmp_path):
    poly = contour2d(circle, Box.cube(2.0, 2), 32)
    S = PointSet(dim=2, points=[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
    text = export(poly, tmp_path / "curve.svg", points=S).read_text()
    assert text.startswith("<svg")
    assert text.count("<circle") == 3
    assert text.count("<path") == 1
    assert " Z" in text


def test_export_obj_and_read_back(tmp_path):
    mesh = isosurface3d(circle, Box.cube(1.5, 3), 16)
    path = export(mesh, tmp_path / "sphere.obj")
    first_face = next(line for line in path.read_text().splitlines() if line.startswith("f "))
    assert min(int(i) for i in first_face.split()[1:]) >= 1
    back = read_obj(path)
    np.testing.assert_array_equal(back.vertices, mesh.vertices)
    np.testing.assert_array_equal(back.triangles, mesh.triangles)


def test_export_format_checks(tmp_path):
    poly = contour2d(circle, Box.cube(2.0, 2), 16)
    with pytest.raises(ValueError):
        export(poly, tmp_path / "curve.obj")
    with pytest.raises(ValueError):
        export(poly, tmp_path / "curve.ply")
    assert export(poly, tmp_path / "curve.out", format="csv").exists()
    with pytest.raises(OSError):
        export(poly, tmp_path / "missing" / "curve.csv")


def test_hausdorff():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    b = np.array([[0.0, 0.5], [1.0, 0.0], [3.0, 0.0]])
    assert hausdorff(a, b) == pytest.approx(2.0)
    assert hausdorff(a, a) == 0.0
