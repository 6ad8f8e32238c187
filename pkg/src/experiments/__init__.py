from .configfile import dump_config, load_config
from .fieldfile import read_field, write_field
from .models import ExperimentConfig
from .pipeline import run_experiment
from .presets import get_preset, presets

__all__ = [
    "ExperimentConfig",
    "dump_config",
    "get_preset",
    "load_config",
    "presets",
    "read_field",
    "run_experiment",
    "write_field",
]
