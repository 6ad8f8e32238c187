"""
Final nodal field of a run, enough to rebuild the interpolant without re-running:

    # dimension = 2
    # kernel = multiquadric
    # rho = 0.13793103448275862
    # domain_min = -2.0, -2.0
    # domain_max = 2.0, 2.0
    # kind x y u
    grid -2.0 -2.0 7.25
    ...
"""
from pathlib import Path
from typing import Dict, NamedTuple, Union

import numpy as np

from core.exceptions import ConfigError
from gridding import Box, LevelSetState, NodeSet
from rbf import KernelSpec

_KINDS = ("grid", "data", "anchor")


class FieldFile(NamedTuple):
    domain: Box
    kernel: KernelSpec
    centers: np.ndarray
    values: np.ndarray
    kinds: np.ndarray


def write_field(
    path: Union[str, Path], nodes: NodeSet, state: LevelSetState, kernel: KernelSpec
) -> None:
    axes = ["x", "y", "z"][: nodes.dim]
    header = [
        f"# dimension = {nodes.dim}",
        f"# kernel = {kernel.kind}",
        f"# rho = {kernel.rho!r}" if kernel.rho is not None else "# rho = none",
        "# domain_min = " + ", ".join(repr(float(v)) for v in nodes.domain.lo),
        "# domain_max = " + ", ".join(repr(float(v)) for v in nodes.domain.hi),
        "# kind " + " ".join(axes) + " u",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(header) + "\n")
        for kind, point, u in zip(nodes.kinds, nodes.all_nodes, state.full_values):
            coords = " ".join(f"{c:.17g}" for c in point)
            fh.write(f"{kind} {coords} {u:.17g}\n")


def read_field(path: Union[str, Path]) -> FieldFile:
    """Parse a field file; malformed content raises ConfigError."""
    path = Path(path)
    meta: Dict[str, str] = {}
    rows, kinds = [], []
    try:
        lines = path.read_text().splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read field file {path}: {e.strerror}") from e

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if "=" in line:
                key, value = (p.strip() for p in line[1:].split("=", 1))
                meta[key] = value
            continue
        tokens = line.split()
        if tokens[0] not in _KINDS:
            raise ConfigError(f"{path}:{lineno}: unknown node kind '{tokens[0]}'")
        try:
            rows.append([float(t) for t in tokens[1:]])
        except ValueError as e:
            raise ConfigError(f"{path}:{lineno}: {e}") from e
        kinds.append(tokens[0])

    try:
        dim = int(meta["dimension"])
        rho = None if meta["rho"] == "none" else float(meta["rho"])
        kernel = KernelSpec(kind=meta["kernel"], rho=rho)
        domain = Box(
            lo=tuple(float(v) for v in meta["domain_min"].split(",")),
            hi=tuple(float(v) for v in meta["domain_max"].split(",")),
        )
    except (KeyError, ValueError) as e:
        raise ConfigError(f"{path}: incomplete or invalid field header ({e})") from e

    data = np.asarray(rows, dtype=float)
    if data.ndim != 2 or data.shape[1] != dim + 1 or len(data) < dim + 1:
        raise ConfigError(
            f"{path}: expected at least {dim + 1} rows of {dim} coordinates and a value"
        )
    return FieldFile(domain, kernel, data[:, :dim], data[:, dim], np.asarray(kinds))
