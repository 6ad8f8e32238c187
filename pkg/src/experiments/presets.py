"""Named experiments reproducing the curve and surface reconstructions."""
from typing import Dict, List

from core.exceptions import ConfigError

from .models import ExperimentConfig

TEAPOT_PATH = "data/teapot.txt"

_HEART2D = dict(
    dimension=2,
    shape="heart2d",
    point_count=24,
    domain_min=(-2.0, -2.0),
    domain_max=(2.0, 2.0),
    lattice_count=30,
    dt=0.01,
    iterations=150,
    kernel="multiquadric",
    rho_factor=1.0,
)

_HEART3D = dict(
    dimension=3,
    shape="heart3d",
    point_count=748,
    domain_min=(-2.0, -2.0, -2.0),
    domain_max=(2.0, 2.0, 2.0),
    lattice_count=40,
    grid_mode="reduced",
    delta_s=0.1,
    dt=0.005,
    iterations=80,
    energy_every=20,
    kernel="linear",
    anchor_value=20.0,
)


def _build() -> List[ExperimentConfig]:
    configs = [
        ExperimentConfig(name="heart2d-full", grid_mode="full", **_HEART2D),
        ExperimentConfig(
            name="heart2d-full-linear", grid_mode="full", **{**_HEART2D, "kernel": "linear"}
        ),
        ExperimentConfig(
            name="heart2d-full-fine",
            grid_mode="full",
            **{**_HEART2D, "kernel": "linear", "lattice_count": 60},
        ),
        # the multiquadric band iteration diverges on this data set, as it does on every
        # reduced preset below
        ExperimentConfig(
            name="heart2d-reduced",
            grid_mode="reduced",
            delta_s=0.2,
            anchor_value=20.0,
            **{**_HEART2D, "kernel": "linear"},
        ),
        ExperimentConfig(name="heart3d", **_HEART3D),
    ]
    for eta in ("0.01", "0.025", "0.05"):
        configs.append(
            ExperimentConfig(name=f"heart3d-noise-{eta}", noise_eta=float(eta), **_HEART3D)
        )
    configs += [
        ExperimentConfig(
            name="cubes3d",
            dimension=3,
            shape="cubes3d",
            point_count=4020,
            domain_min=(-2.0, -2.0, -2.0),
            domain_max=(2.0, 2.0, 2.0),
            lattice_count=80,
            grid_mode="reduced",
            delta_s=0.01,
            anchor_spacing=0.4,
            kernel="linear",
            dt=0.01,
            iterations=100,
            energy_every=25,
        ),
        ExperimentConfig(
            name="teapot",
            dimension=3,
            input_path=TEAPOT_PATH,
            subsample_stride=4,
            fit_box=True,
            domain_min=(-0.8, -0.8, -0.8),
            domain_max=(0.8, 0.8, 0.8),
            lattice_count=50,
            grid_mode="reduced",
            delta_s=0.1,
            anchor_margin=0.05,
            kernel="linear",
            dt=0.001,
            iterations=150,
            energy_every=30,
        ),
    ]
    return configs


_PRESETS: Dict[str, ExperimentConfig] = {cfg.name: cfg for cfg in _build()}


def presets() -> List[ExperimentConfig]:
    return list(_PRESETS.values())


def get_preset(name: str) -> ExperimentConfig:
    if name not in _PRESETS:
        raise ConfigError(f"unknown preset '{name}', expected one of {sorted(_PRESETS)}")
    return _PRESETS[name]
