"""Command line entry point: `python src/main.py <command> [options]`."""
import argparse
import sys
from typing import List, Optional

from cli import routing
from core.config import settings
from core.logging import configure_logging

EXIT_USAGE = 1


class CommandParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return number


def build_parser() -> CommandParser:
    parser = CommandParser(
        prog=settings.APP_NAME,
        description="Reconstruct curves and surfaces from point clouds by level-set evolution.",
    )
    parser.add_argument("--version", action="version", version=settings.APP_VERSION)
    parser.add_argument(
        "--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="override LOG_LEVEL"
    )
    commands = parser.add_subparsers(
        dest="command", metavar="command", parser_class=CommandParser
    )
    commands.required = True

    p = commands.add_parser("reconstruct", help="run an experiment file")
    p.add_argument("--config", required=True, help="flat key = value experiment file")
    p.add_argument("--out", help="output directory")
    p.set_defaults(handler=routing.reconstruct)

    p = commands.add_parser("preset", help="run a named experiment")
    p.add_argument("--name", required=True)
    p.add_argument(
        "--out",
        metavar="DIR",
        help="parent directory; files go to DIR/<name>/ (default: OUTPUT_DIR/<name>/)",
    )
    p.set_defaults(handler=routing.preset)

    p = commands.add_parser("shapes", help="write a synthetic point set")
    p.add_argument("--name", required=True, help="heart2d, heart3d or cubes3d")
    p.add_argument("--count", required=True, type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eta", type=float, default=0.0, help="uniform noise amplitude")
    p.set_defaults(handler=routing.shapes)

    p = commands.add_parser("contour", help="re-extract the zero level set of a field file")
    p.add_argument("--field", required=True)
    p.add_argument("--out", required=True, help="csv, svg or obj file")
    p.add_argument("--resolution", type=_positive_int)
    p.set_defaults(handler=routing.contour)

    p = commands.add_parser("list-presets", help="print the preset names")
    p.set_defaults(handler=routing.list_presets)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.log_level)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
