"""
Tests for experiment configuration, presets and the end-to-end driver.

Functions prefixed with test_preset_ run full-size experiments and are marked slow.
"""
from pathlib import Path

import numpy as np
import pytest
from scipy.spatial import ConvexHull, cKDTree

from core.exceptions import ConfigError, StageError
from experiments import (
    ExperimentConfig,
    dump_config,
    get_preset,
    load_config,
    presets,
    read_field,
    run_experiment,
)
from experiments.presets import TEAPOT_PATH
from extract import hausdorff, read_obj
from pointcloud import generate_shape

SMALL = dict(
    name="small-heart",
    dimension=2,
    shape="heart2d",
    point_count=24,
    domain_min=(-2.0, -2.0),
    domain_max=(2.0, 2.0),
    lattice_count=20,
    grid_mode="reduced",
    delta_s=0.3,
    dt=0.01,
    iterations=6,
    resolution=64,
    energy_every=2,
)


def _read_csv(path):
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def test_presets_catalogue():
    names = [cfg.name for cfg in presets()]
    assert len(names) >= 8
    for expected in (
        "heart2d-full",
        "heart2d-full-fine",
        "heart2d-reduced",
        "heart3d",
        "heart3d-noise-0.01",
        "heart3d-noise-0.025",
        "heart3d-noise-0.05",
        "cubes3d",
        "teapot",
    ):
        assert expected in names
    assert get_preset("heart2d-reduced").delta_s == 0.2
    assert get_preset("teapot").dt == 0.001
    assert get_preset("heart2d-full-fine").lattice_count == 60
    assert get_preset("heart2d-full-fine").kernel == "linear"
    assert get_preset("heart3d-noise-0.025").noise_eta == 0.025
    assert get_preset("heart2d-full").kernel == "multiquadric"
    for name in ("heart2d-reduced", "heart3d", "heart3d-noise-0.05", "cubes3d", "teapot"):
        assert get_preset(name).kernel == "linear"
    assert get_preset("heart3d").anchor_value == 20.0
    with pytest.raises(ConfigError):
        get_preset("bunny")


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(**{**SMALL, "input_path": "pts.txt"})
    with pytest.raises(ValueError):
        ExperimentConfig(**{**SMALL, "delta_s": None})
    with pytest.raises(ValueError):
        ExperimentConfig(**{**SMALL, "dimension": 3})
    with pytest.raises(ValueError):
        ExperimentConfig(**{**SMALL, "dt": -0.1})
    with pytest.raises(ValueError):
        ExperimentConfig(**{**SMALL, "domain_min": (2.0, -2.0)})
    cfg = ExperimentConfig(**SMALL)
    assert cfg.anchors_enabled
    assert not ExperimentConfig(**{**SMALL, "grid_mode": "full"}).anchors_enabled


def test_full_lattice_defaults():
    full = ExperimentConfig(**{**SMALL, "grid_mode": "full"})
    assert full.boundary_pinned
    assert full.node_gap == 0.9
    reduced = ExperimentConfig(**SMALL)
    assert not reduced.boundary_pinned
    assert reduced.node_gap == 0.0
    custom = ExperimentConfig(
        **{**SMALL, "grid_mode": "full", "pin_boundary": False, "data_gap": 0.5}
    )
    assert not custom.boundary_pinned
    assert custom.node_gap == 0.5
    with pytest.raises(ValueError):
        ExperimentConfig(**{**SMALL, "data_gap": -1.0})


def test_load_config_parses_flat_files(tmp_path):
    path = tmp_path / "exp.txt"
    path.write_text(
        "# a small run\n"
        "name = file-heart\n"
        "dimension = 2\n"
        "shape = heart2d   # synthetic\n"
        "point_count = 24\n"
        "domain_min = -2, -2\n"
        "domain_max = 2, 2\n"
        "lattice_count = 20\n"
        "delta_s = 0.3\n"
        "use_anchors = true\n"
        "anchor_value = none\n"
        "dt = 0.01\n"
        "iterations = 4\n"
    )
    cfg = load_config(path)
    assert cfg.name == "file-heart"
    assert cfg.domain_min == (-2.0, -2.0)
    assert cfg.use_anchors is True
    assert cfg.anchor_value is None
    assert cfg.iterations == 4


def test_dump_then_load_preserves_config(tmp_path):
    for cfg in (get_preset("heart2d-full"), get_preset("teapot"), ExperimentConfig(**SMALL)):
        path = tmp_path / f"{cfg.name}.txt"
        dump_config(cfg, path)
        assert load_config(path) == cfg


@pytest.mark.parametrize(
    "text",
    [
        "name = x\ncolour = red\n",
        "name = x\nname = y\n",
        "just some words\n",
        "name = x\ndimension = 2\n",
    ],
)
def test_load_config_rejects_bad_files(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(ConfigError):
        load_config(path)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.txt")


def test_run_experiment_writes_outputs(tmp_path):
    cfg = ExperimentConfig(**SMALL)
    report = run_experiment(cfg, output_dir=tmp_path / "run")
    out = tmp_path / "run"
    for name in (
        "geometry.csv",
        "geometry.svg",
        "convergence.csv",
        "energy.csv",
        "nodes.txt",
        "field.txt",
        "summary.txt",
        "config.txt",
    ):
        assert (out / name).exists(), name

    assert report.iterations == 6
    assert report.data_nodes == 24
    assert report.anchor_nodes > 0
    assert report.lattice_nodes == 400
    assert np.isfinite(report.final_e1)
    assert set(report.timings) == {"data", "nodes", "initial", "iterate", "extract", "write"}

    convergence = _read_csv(out / "convergence.csv")
    np.testing.assert_array_equal(convergence[:, 0], np.arange(1, 7))
    energy = _read_csv(out / "energy.csv")
    np.testing.assert_array_equal(energy[:, 0], [0, 2, 4, 6])

    summary = (out / "summary.txt").read_text()
    assert "interior_nodes:" in summary and "time_iterate:" in summary
    assert load_config(out / "config.txt") == cfg


def test_field_file_round_trip(tmp_path):
    cfg = ExperimentConfig(**{**SMALL, "iterations": 2})
    report = run_experiment(cfg, output_dir=tmp_path)
    field = read_field(tmp_path / "field.txt")
    assert field.kernel.kind == "multiquadric"
    assert field.kernel.rho == pytest.approx(4.0 / 19.0)
    assert field.domain.lo == (-2.0, -2.0)
    assert len(field.values) == report.interior_nodes + report.anchor_nodes
    assert list(field.kinds).count("data") == 24


def test_read_field_rejects_bad_header(tmp_path):
    path = tmp_path / "field.txt"
    path.write_text("# dimension = 2\ngrid 0 0 1\n")
    with pytest.raises(ConfigError):
        read_field(path)


def test_same_seed_gives_identical_geometry(tmp_path):
    cfg = ExperimentConfig(**{**SMALL, "iterations": 3, "noise_eta": 0.02, "seed": 5})
    run_experiment(cfg, output_dir=tmp_path / "a")
    run_experiment(cfg, output_dir=tmp_path / "b")
    assert (tmp_path / "a" / "geometry.csv").read_bytes() == (
        tmp_path / "b" / "geometry.csv"
    ).read_bytes()


def test_stage_failure_names_the_stage(tmp_path):
    cfg = ExperimentConfig(
        **{**SMALL, "shape": None, "point_count": None, "input_path": str(tmp_path / "none.txt")}
    )
    with pytest.raises(StageError) as err:
        run_experiment(cfg, output_dir=tmp_path / "out")
    assert err.value.stage == "data"
    assert err.value.location.startswith("io.py:")


def test_summary_failure_names_its_stage(tmp_path):
    out = tmp_path / "out"
    (out / "summary.txt").mkdir(parents=True)
    with pytest.raises(StageError) as err:
        run_experiment(ExperimentConfig(**{**SMALL, "iterations": 2}), output_dir=out)
    assert err.value.stage == "summary"
    assert (out / "geometry.csv").exists()


def test_coarse_full_heart_contracts_to_one_loop(tmp_path):
    cfg = ExperimentConfig(
        **{
            **SMALL,
            "name": "coarse-heart",
            "grid_mode": "full",
            "delta_s": None,
            "iterations": 30,
            "energy_every": 10,
            "resolution": 96,
        }
    )
    report = run_experiment(cfg, output_dir=tmp_path)
    assert report.anchor_nodes == 4 * 19
    e = _read_csv(tmp_path / "convergence.csv")[:, 1]
    assert np.all(np.isfinite(e))
    assert e[29] < 0.8 * e[4]
    assert np.max(e[20:]) < np.min(e[:10])

    rows = _read_csv(tmp_path / "geometry.csv")
    assert set(rows[:, 0]) == {0.0}
    np.testing.assert_array_equal(rows[0, 1:], rows[-1, 1:])


def _heart_polygon_samples(per_edge: int = 50, skip=()) -> np.ndarray:
    pts = generate_shape("heart2d", 24).points
    ends = np.roll(pts, -1, axis=0)
    t = np.linspace(0.0, 1.0, per_edge, endpoint=False)[:, None, None]
    samples = pts + t * (ends - pts)
    keep = [k for k in range(len(pts)) if k not in skip and (k + 1) % len(pts) not in skip]
    return samples[:, keep].reshape(-1, 2)


def _hull_gaps(points: np.ndarray) -> np.ndarray:
    """Distance from each point to the boundary of the convex hull."""
    hull = ConvexHull(points)
    # equations are outward normals with offsets: n . x + b <= 0 inside
    return np.min(-(points @ hull.equations[:, :-1].T + hull.equations[:, -1]), axis=1)


def _assert_heart_curve(curve: np.ndarray, dx: float) -> None:
    """
    Data within 2 dx of the curve; in the notch, where the points sit more than
    dx inside their convex hull, the flow stops short by up to the hull gap.
    The curve stays within 3 dx of the data polygon, and the polygon edges
    outside the notch within 3 dx of the curve.
    """
    data = generate_shape("heart2d", 24).points
    gaps = _hull_gaps(data)
    notch = np.flatnonzero(gaps > dx)
    assert set(notch) == {0, 1, 2, 22, 23}
    allowed = np.where(gaps > dx, np.maximum(2 * dx, gaps + dx), 2 * dx)
    nearest = cKDTree(curve).query(data)[0]
    assert np.all(nearest <= allowed)

    polygon = _heart_polygon_samples()
    assert cKDTree(polygon).query(curve)[0].max() <= 3 * dx
    assert cKDTree(curve).query(_heart_polygon_samples(skip=notch))[0].max() <= 3 * dx


@pytest.mark.slow
def test_preset_heart2d_full(tmp_path):
    cfg = get_preset("heart2d-full")
    run_experiment(cfg, output_dir=tmp_path)
    rows = _read_csv(tmp_path / "geometry.csv")
    assert set(rows[:, 0]) == {0.0}
    _assert_heart_curve(rows[:, 1:], 4.0 / 29.0)

    e = _read_csv(tmp_path / "convergence.csv")[:, 1]
    assert len(e) == 150
    assert e[149] < 0.1 * e[9]
    assert np.polyfit(np.arange(10, 151), np.log(e[9:]), 1)[0] < 0

    energy = dict(_read_csv(tmp_path / "energy.csv"))
    assert energy[150.0] < energy[10.0]


@pytest.mark.slow
def test_preset_heart2d_reduced_matches_full(tmp_path):
    run_experiment(get_preset("heart2d-full"), output_dir=tmp_path / "full")
    report = run_experiment(get_preset("heart2d-reduced"), output_dir=tmp_path / "reduced")
    assert 0.08 <= report.grid_nodes / report.lattice_nodes <= 0.20
    full = _read_csv(tmp_path / "full" / "geometry.csv")[:, 1:]
    reduced = _read_csv(tmp_path / "reduced" / "geometry.csv")[:, 1:]
    assert hausdorff(full, reduced) <= 2 * 4.0 / 29.0
    _assert_heart_curve(reduced, 4.0 / 29.0)

    e = _read_csv(tmp_path / "reduced" / "convergence.csv")[:, 1]
    assert e[149] < 0.1 * e[9]


def _assert_closed_and_faithful(out, cfg, eta=0.0):
    mesh = read_obj(out / "geometry.obj")
    assert mesh.is_closed()
    dx = (cfg.domain_max[0] - cfg.domain_min[0]) / (cfg.lattice_count - 1)
    data = generate_shape(cfg.shape, cfg.point_count, seed=cfg.seed).points
    assert cKDTree(mesh.vertices).query(data)[0].max() <= 2 * dx + eta


@pytest.mark.slow
@pytest.mark.parametrize(
    "name", ["heart3d", "heart3d-noise-0.01", "heart3d-noise-0.025", "heart3d-noise-0.05"]
)
def test_preset_heart3d(tmp_path, name):
    cfg = get_preset(name)
    report = run_experiment(cfg, output_dir=tmp_path)
    assert report.data_points == 748
    assert np.isfinite(report.final_e1)
    _assert_closed_and_faithful(tmp_path, cfg, eta=cfg.noise_eta)


@pytest.mark.slow
def test_preset_cubes3d(tmp_path):
    cfg = get_preset("cubes3d")
    report = run_experiment(cfg, output_dir=tmp_path)
    assert report.data_points == 4020
    assert np.isfinite(report.final_e1)
    assert read_obj(tmp_path / "geometry.obj").is_closed()


@pytest.mark.slow
def test_preset_teapot(tmp_path):
    if not Path(TEAPOT_PATH).exists():
        pytest.skip(f"teapot point file {TEAPOT_PATH} not present")
    report = run_experiment(get_preset("teapot"), output_dir=tmp_path)
    assert np.isfinite(report.final_e1)
    assert read_obj(tmp_path / "geometry.obj").is_closed()
