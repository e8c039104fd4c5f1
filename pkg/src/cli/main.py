import argparse
import logging
import sys
from typing import List, Optional

from src.cli.commands import COMMANDS
from src.cli.config import MEASURE_CHOICES, Command, RunConfig
from src.cli.recipes import Figure
from src.curvature.vector import CurvatureKind
from src.exceptions import InputError, NumericalError
from src.graph.surgery import TOL_SURGERY
from src.logger import set_verbose
from src.model.model import DEFAULT_DT
from src.spectral.inverse import TOL_INVERSE

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_ERROR = 3

_log = logging.getLogger(__name__)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=str, default="results")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="store_true")


def _add_graph_input(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", type=str, help="graph file")
    source.add_argument("--named", type=str, help="family:n, e.g. star:3")
    parser.add_argument("--measure", choices=sorted(MEASURE_CHOICES), default="uniform")
    parser.add_argument(
        "--m2", type=float, nargs="+", help="edge measures for --measure normalized"
    )


def make_parser():
    parser = argparse.ArgumentParser("Ricci flows on weighted graphs")
    subparsers = parser.add_subparsers(dest="command", required=True)

    curvature = subparsers.add_parser(Command.CURVATURE.value)
    _add_graph_input(curvature)

    flow = subparsers.add_parser(Command.FLOW.value)
    _add_graph_input(flow)
    flow.add_argument("--t-end", type=float, default=1.0)
    flow.add_argument("--dt", type=float, default=DEFAULT_DT)
    flow.add_argument("--no-surgery", dest="surgery", action="store_false")
    flow.add_argument(
        "--curvature",
        choices=[kind.value for kind in CurvatureKind],
        default=CurvatureKind.LLY.value,
    )
    flow.add_argument("--normalized", action="store_true")
    flow.add_argument("--tol-surgery", type=float, default=TOL_SURGERY)

    spectrum = subparsers.add_parser(Command.SPECTRUM.value)
    _add_graph_input(spectrum)

    classify = subparsers.add_parser(Command.CLASSIFY.value)
    _add_graph_input(classify)
    classify.add_argument("--tol-zero", type=float, default=None)

    inverse = subparsers.add_parser(Command.INVERSE.value)
    _add_graph_input(inverse)
    inverse.add_argument(
        "--kappa",
        type=float,
        nargs="+",
        help="target curvature per edge; defaults to the Forman curvature of omega0",
    )
    inverse.add_argument("--tol-inverse", type=float, default=TOL_INVERSE)

    reproduce = subparsers.add_parser(Command.REPRODUCE.value)
    reproduce.add_argument("figure", choices=[f.value for f in Figure] + ["all"])
    reproduce.add_argument("--tol-zero", type=float, default=None)

    for subparser in subparsers.choices.values():
        _add_common(subparser)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    set_verbose(-1 if args.quiet else args.verbose)
    try:
        cfg = RunConfig.from_args(args)
        for path in COMMANDS[cfg.command](cfg):
            _log.info("wrote %s", path)
    except (InputError, OSError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except NumericalError as error:
        print(f"numerical failure: {error}", file=sys.stderr)
        return EXIT_NUMERICAL_ERROR
    return EXIT_OK


def run() -> None:
    sys.exit(main())
