"""
Command handlers of the `slrecon` command line.

Each handler takes the parsed arguments and returns an exit code; failures are
turned into an ErrorReport on standard error by `handle_command_errors`.
Results (summaries, names) go to standard output, logs to standard error.

Commands:
    reconstruct   --config <path> [--out <dir>]    run an experiment file
    preset        --name <name> [--out <dir>]      run a named experiment
    shapes        --name <shape> --count <k> --out <file> [--seed <s>] [--eta <e>]
    contour       --field <file> --out <file> [--resolution <r>]
    list-presets                                    print preset names
"""
import argparse
import logging
from pathlib import Path

from core.utility.decorators import handle_command_errors
from core.utility.reports.models import SuccessReport
from experiments import get_preset, load_config, presets, read_field, run_experiment
from experiments.pipeline import extract_geometry
from extract import export
from extract.contour import DEFAULT_RESOLUTION_2D, DEFAULT_RESOLUTION_3D
from pointcloud import generate_shape, perturb, save_points
from rbf import assemble, fit

logger = logging.getLogger(__name__)

EXIT_OK = 0


def _print_report(report: SuccessReport) -> None:
    for line in report.summary_lines():
        print(line)
    for key, path in report.outputs.items():
        print(f"output_{key}: {path}")


@handle_command_errors
def reconstruct(args: argparse.Namespace) -> int:
    """Run the experiment described by a configuration file."""
    cfg = load_config(args.config)
    _print_report(run_experiment(cfg, output_dir=args.out))
    return EXIT_OK


@handle_command_errors
def preset(args: argparse.Namespace) -> int:
    """Run a named preset; output goes to <out>/<name> when --out is given."""
    cfg = get_preset(args.name)
    out = Path(args.out) / cfg.name if args.out else None
    _print_report(run_experiment(cfg, output_dir=out))
    return EXIT_OK


@handle_command_errors
def shapes(args: argparse.Namespace) -> int:
    """Sample a synthetic shape and write it as a point file."""
    ps = generate_shape(args.name, args.count, seed=args.seed)
    if args.eta:
        ps = perturb(ps, args.eta, seed=args.seed)
    save_points(ps, args.out)
    print(f"wrote {len(ps)} points to {args.out}")
    return EXIT_OK


@handle_command_errors
def contour(args: argparse.Namespace) -> int:
    """Rebuild the interpolant from a field file and extract its zero level set again."""
    field = read_field(args.field)
    dim = field.domain.dim
    resolution = args.resolution or (DEFAULT_RESOLUTION_2D if dim == 2 else DEFAULT_RESOLUTION_3D)
    itp = fit(assemble(field.centers, field.kernel), field.values)
    geometry = extract_geometry(itp, field.domain, resolution)
    export(geometry, args.out)
    print(f"wrote {type(geometry).__name__} to {args.out}")
    return EXIT_OK


@handle_command_errors
def list_presets(args: argparse.Namespace) -> int:
    for cfg in presets():
        print(cfg.name)
    return EXIT_OK
