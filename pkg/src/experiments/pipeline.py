"""
Experiment driver: data -> distance index -> nodes -> initial condition ->
iteration -> extraction -> files.

Every stage runs under `handle_stage_errors`, so a failure surfaces as a
StageError naming the stage, and under `stage_timer`, so its wall time ends up
in the run summary. Output layout of a run directory:

    geometry.csv, geometry.svg   (2D)   or   geometry.obj   (3D)
    convergence.csv              iteration,E1
    energy.csv                   iteration,energy
    nodes.txt                    kind x y [z]
    field.txt                    final nodal values (see fieldfile)
    summary.txt                  node counts, timings, final E1
    config.txt                   the experiment as run
"""
import csv
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from core.config import settings
from core.logging import get_run_logger, new_run_id, stage_timer
from core.utility.decorators import handle_stage_errors
from core.utility.reports.models import SuccessReport
from distancefield import DistanceIndex
from extract import Polyline2D, TriMesh, contour2d, energy, export, isosurface3d
from gridding import (
    Box,
    LevelSetState,
    NodeSet,
    add_data_nodes,
    build_full_grid,
    build_reduced_grid,
    data_center,
    default_radius,
    initial_condition,
    pin_boundary,
    place_anchors,
)
from pointcloud import PointSet, fit_to_box, generate_shape, load_points, perturb, subsample
from rbf import Interpolant, KernelSpec, assemble
from scheme import SchemeConfig, run, write_history

from .configfile import dump_config
from .fieldfile import write_field
from .models import ExperimentConfig

# cap on the lattice used for the 3D energy series
ENERGY_RESOLUTION_3D = 64

Geometry = Union[Polyline2D, TriMesh]


def domain_of(cfg: ExperimentConfig) -> Box:
    return Box(lo=cfg.domain_min, hi=cfg.domain_max)


def lattice_spacing(cfg: ExperimentConfig) -> float:
    return float(np.max(domain_of(cfg).extent)) / (cfg.lattice_count - 1)


def kernel_for(cfg: ExperimentConfig, dx: float) -> KernelSpec:
    if cfg.kernel == "linear":
        return KernelSpec(kind="linear")
    return KernelSpec(kind="multiquadric", rho=cfg.rho_factor * dx)


def scheme_for(cfg: ExperimentConfig) -> SchemeConfig:
    return SchemeConfig(
        dt=cfg.dt,
        singular_c=cfg.singular_c,
        singular_alpha=cfg.singular_alpha,
        max_iterations=cfg.iterations,
        tolerance=cfg.tolerance,
        form=cfg.scheme_form,
    )


@handle_stage_errors("data")
def load_data(cfg: ExperimentConfig) -> PointSet:
    """Generate or read the point set, then subsample, rescale and perturb it."""
    if cfg.shape is not None:
        S = generate_shape(cfg.shape, cfg.point_count, seed=cfg.seed)
    else:
        S = load_points(cfg.input_path, cfg.dimension)
    if cfg.subsample_stride > 1:
        S = subsample(S, cfg.subsample_stride)
    if cfg.fit_box:
        S = fit_to_box(S, cfg.domain_min, cfg.domain_max)
    if cfg.noise_eta > 0:
        S = perturb(S, cfg.noise_eta, seed=cfg.seed)
    return S


@handle_stage_errors("nodes")
def build_nodes(cfg: ExperimentConfig, S: PointSet) -> Tuple[NodeSet, DistanceIndex]:
    domain = domain_of(cfg)
    dx = lattice_spacing(cfg)
    idx = DistanceIndex(S, dx)
    if cfg.grid_mode == "full":
        nodes = add_data_nodes(build_full_grid(domain, cfg.lattice_count), S, cfg.node_gap)
    else:
        nodes = build_reduced_grid(domain, cfg.lattice_count, S, cfg.delta_s, cfg.node_gap)

    if cfg.boundary_pinned:
        nodes = pin_boundary(nodes, anchor_value(cfg, domain, S))
    elif cfg.anchors_enabled:
        spacing = cfg.anchor_spacing if cfg.anchor_spacing is not None else 4.0 * nodes.dx
        if cfg.anchor_margin is not None:
            margin = cfg.anchor_margin
        else:
            margin = 2.0 * (cfg.delta_s if cfg.delta_s is not None else nodes.dx)
        anchors = place_anchors(domain, S, margin, spacing)
        nodes = nodes.with_anchors(anchors, anchor_value(cfg, domain, S))
    return nodes, idx


def initial_radius(cfg: ExperimentConfig, domain: Box, S: PointSet) -> float:
    if cfg.initial_radius is not None:
        return cfg.initial_radius
    return default_radius(domain, S)


def anchor_value(cfg: ExperimentConfig, domain: Box, S: PointSet) -> float:
    if cfg.anchor_value is not None:
        return cfg.anchor_value
    return initial_radius(cfg, domain, S) ** 2


@handle_stage_errors("initial")
def initialize(cfg: ExperimentConfig, nodes: NodeSet, S: PointSet) -> LevelSetState:
    domain = domain_of(cfg)
    return initial_condition(
        nodes,
        initial_radius(cfg, domain, S),
        anchor_value(cfg, domain, S),
        center=data_center(S),
    )


def extract_geometry(itp: Interpolant, domain: Box, resolution: int) -> Geometry:
    if domain.dim == 2:
        return contour2d(itp, domain, resolution)
    return isosurface3d(itp, domain, resolution)


class EnergyRecorder:
    """Iteration callback recording the energy of the extracted geometry."""

    def __init__(self, cfg: ExperimentConfig, idx: DistanceIndex):
        self.every = cfg.energy_every
        self.domain = domain_of(cfg)
        self.idx = idx
        res = cfg.extraction_resolution
        self.resolution = res if cfg.dimension == 2 else min(res, ENERGY_RESOLUTION_3D)
        self.series: List[Tuple[int, float]] = []
        self.last: Optional[Tuple[LevelSetState, Interpolant]] = None

    def __call__(self, state: LevelSetState, itp: Interpolant) -> None:
        self.last = (state, itp)
        if self.every and state.iteration % self.every == 0:
            self.record(state.iteration, itp)

    def record(self, iteration: int, itp: Interpolant) -> None:
        geometry = extract_geometry(itp, self.domain, self.resolution)
        self.series.append((iteration, energy(geometry, self.idx)))

    def finish(self) -> None:
        """Make sure the final iterate has an entry."""
        if self.last is None:
            return
        state, itp = self.last
        if not self.series or self.series[-1][0] != state.iteration:
            self.record(state.iteration, itp)

    def write(self, path: Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "energy"])
            for iteration, value in self.series:
                writer.writerow([iteration, repr(float(value))])


@handle_stage_errors("iterate")
def evolve(
    cfg: ExperimentConfig,
    nodes: NodeSet,
    idx: DistanceIndex,
    kernel: KernelSpec,
    u0: LevelSetState,
    recorder: EnergyRecorder,
) -> Tuple[LevelSetState, List[float], Interpolant]:
    fact = assemble(nodes, kernel)
    state, history = run(
        nodes, idx, kernel, scheme_for(cfg), u0, callback=recorder, factorization=fact
    )
    recorder.finish()
    return state, history, recorder.last[1]


@handle_stage_errors("extract")
def extract(cfg: ExperimentConfig, itp: Interpolant) -> Geometry:
    return extract_geometry(itp, domain_of(cfg), cfg.extraction_resolution)


@handle_stage_errors("write")
def write_outputs(
    out: Path,
    cfg: ExperimentConfig,
    S: PointSet,
    nodes: NodeSet,
    state: LevelSetState,
    history: List[float],
    kernel: KernelSpec,
    geometry: Geometry,
    recorder: EnergyRecorder,
) -> Dict[str, str]:
    out.mkdir(parents=True, exist_ok=True)
    outputs: Dict[str, str] = {}
    if cfg.dimension == 2:
        outputs["geometry_csv"] = str(export(geometry, out / "geometry.csv"))
        outputs["geometry_svg"] = str(export(geometry, out / "geometry.svg", points=S))
    else:
        outputs["geometry_obj"] = str(export(geometry, out / "geometry.obj"))

    write_history(history, out / "convergence.csv")
    outputs["convergence"] = str(out / "convergence.csv")
    recorder.write(out / "energy.csv")
    outputs["energy"] = str(out / "energy.csv")
    nodes.dump(out / "nodes.txt")
    outputs["nodes"] = str(out / "nodes.txt")
    write_field(out / "field.txt", nodes, state, kernel)
    outputs["field"] = str(out / "field.txt")
    dump_config(cfg, out / "config.txt")
    outputs["config"] = str(out / "config.txt")
    return outputs


@handle_stage_errors("summary")
def write_summary(out: Path, report: SuccessReport) -> str:
    summary = out / "summary.txt"
    summary.write_text("\n".join(report.summary_lines()) + "\n")
    return str(summary)


def run_experiment(
    cfg: ExperimentConfig, output_dir: Optional[Union[str, Path]] = None
) -> SuccessReport:
    """
    Run one experiment end to end and write its files.

    Args:
        cfg: Validated experiment
        output_dir: Overrides `cfg.output_dir` (default OUTPUT_DIR/<name>)

    Returns:
        SuccessReport with node counts, final E1 and energy, timings and written files
    """
    run_id = new_run_id()
    log = get_run_logger(run_id)
    out = Path(output_dir or cfg.output_dir or Path(settings.OUTPUT_DIR) / cfg.name)
    timings: Dict[str, float] = {}
    log.info("Experiment %s (%dD) -> %s", cfg.name, cfg.dimension, out)

    with stage_timer("data", log, timings):
        S = load_data(cfg)
    log.info("Data set: %d points", len(S))

    with stage_timer("nodes", log, timings):
        nodes, idx = build_nodes(cfg, S)
    log.info(
        "Nodes: %d grid, %d data, %d anchors (dx=%g)",
        len(nodes.grid_nodes),
        len(nodes.data_nodes),
        nodes.anchor_count,
        nodes.dx,
    )

    with stage_timer("initial", log, timings):
        u0 = initialize(cfg, nodes, S)

    kernel = kernel_for(cfg, nodes.dx)
    recorder = EnergyRecorder(cfg, idx)
    with stage_timer("iterate", log, timings):
        state, history, itp = evolve(cfg, nodes, idx, kernel, u0, recorder)

    with stage_timer("extract", log, timings):
        geometry = extract(cfg, itp)

    with stage_timer("write", log, timings):
        outputs = write_outputs(out, cfg, S, nodes, state, history, kernel, geometry, recorder)

    report = SuccessReport(
        run_id=run_id,
        name=cfg.name,
        dimension=cfg.dimension,
        data_points=len(S),
        interior_nodes=nodes.interior_count,
        grid_nodes=len(nodes.grid_nodes),
        data_nodes=len(nodes.data_nodes),
        anchor_nodes=nodes.anchor_count,
        lattice_nodes=nodes.lattice_size,
        iterations=state.iteration,
        final_e1=history[-1] if history else None,
        final_energy=recorder.series[-1][1] if recorder.series else None,
        outputs=outputs,
        timings=timings,
    )
    with stage_timer("summary", log):
        report.outputs["summary"] = write_summary(out, report)
    log.info("Experiment %s finished after %d iterations", cfg.name, state.iteration)
    return report
