"""
Flat experiment files:

    # heart, reduced band
    name = heart2d-reduced
    dimension = 2
    domain_min = -2, -2
    ...

One `key = value` per line, `#` starts a comment, empty values and `none`
leave a key at its default. Unknown keys are rejected.
"""
import logging
from pathlib import Path
from typing import Dict, Union

from pydantic import ValidationError

from core.exceptions import ConfigError

from .models import ExperimentConfig

logger = logging.getLogger(__name__)


def parse_config_text(text: str, source: str = "<string>") -> Dict[str, str]:
    values: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got '{raw.strip()}'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in ExperimentConfig.model_fields:
            raise ConfigError(f"{source}:{lineno}: unknown key '{key}'")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key '{key}'")
        if value and value.lower() != "none":
            values[key] = value
    return values


def config_from_mapping(values: Dict[str, object], source: str = "<string>") -> ExperimentConfig:
    try:
        return ExperimentConfig(**values)
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigError(f"{source}: invalid experiment configuration ({details})") from e


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read configuration {path}: {e.strerror}") from e
    cfg = config_from_mapping(parse_config_text(text, str(path)), str(path))
    logger.debug("Loaded experiment '%s' from %s", cfg.name, path)
    return cfg


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_config(cfg: ExperimentConfig, path: Union[str, Path]) -> None:
    """Write every set key in field order; `load_config` reads it back unchanged."""
    lines = [f"# experiment {cfg.name}"]
    for key, value in cfg.model_dump().items():
        if value is None:
            continue
        lines.append(f"{key} = {_format_value(value)}")
    Path(path).write_text("\n".join(lines) + "\n")
