import argparse
import json
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.commands import COMMANDS
from app.commands.schemas import COMMAND_NAMES, RunConfig
from app.utils.errors import InputFileError, InvalidRequestError, PhaseLabError
from app.utils.formats import emit, render
from app.utils.logger import setup_logger

# Initialize logger
logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with status 1; status 2 is reserved for engine failures"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -----------------------------------------------------------------------------
# Argument parser
# -----------------------------------------------------------------------------
def _add_shared(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, help="clause width")
    parser.add_argument("--n", type=int, help="variable count")
    parser.add_argument("--m", type=int, help="clause count")
    parser.add_argument("--p", type=float, help="3-clause fraction")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials")
    parser.add_argument("--step", type=float, help="curve step in x")
    parser.add_argument("--grid", type=int, help="grid points per axis")
    parser.add_argument("--tol", type=float, help="tolerance")
    parser.add_argument("--out", help="output file (or directory for tables)")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")

    parser.add_argument("--x", type=float, help="frozen-prefix density")
    parser.add_argument("--y", type=float, help="2-clause density")
    parser.add_argument("--z", type=float, help="clause density")
    parser.add_argument("--policy", choices=["trivial-lower", "paired-roots"])
    parser.add_argument("--orientation", choices=["rising", "falling"])
    parser.add_argument("--calibrate", action="store_true", help="report every branch configuration")
    parser.add_argument("--mode", choices=["exact", "rounded"], default="rounded")

    parser.add_argument("--z-end", dest="z_end", type=float, help="K-COL march end")
    parser.add_argument("--x-range", dest="x_range", type=float, nargs=2)
    parser.add_argument("--y-range", dest="y_range", type=float, nargs=2)

    parser.add_argument("--model", choices=["ksat", "two-plus-p", "kcol"], default="ksat")
    parser.add_argument("--solver", choices=["auto", "dpll", "two-sat", "col"], default="auto")
    parser.add_argument("--density", type=float)
    parser.add_argument("--colors", type=int, default=3)
    parser.add_argument("--frozen", type=int, default=0, help="prefix length i")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--input", help="DIMACS CNF or edge-list file")

    parser.add_argument("--offspring", type=float, default=2.0, help="BRW mean offspring")
    parser.add_argument("--decay", type=float, default=0.0, help="BRW suppression rate")
    parser.add_argument("--generations", type=int, default=200)
    parser.add_argument("--replicates", type=int, default=40, help="independent BRW trees")
    parser.add_argument("--lambdas", type=float, nargs="+")
    parser.add_argument("--step-law", dest="step_law", choices=["two-point", "gaussian"],
                        default="gaussian")
    parser.add_argument("--step-scale", dest="step_scale", type=float, default=4.0,
                        help="Gaussian step standard deviation")
    parser.add_argument("--alpha", type=float, default=0.5, help="BRW quantile level")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="phase-lab", description="Phase-transition numerics and Monte Carlo lab")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMAND_NAMES:
        _add_shared(subparsers.add_parser(name))
    return parser


# -----------------------------------------------------------------------------
# Dispatch
# -----------------------------------------------------------------------------
def _failure(config: RunConfig, error: PhaseLabError) -> int:
    logger.error(f"{config.command} failed: {error.message}")
    print(json.dumps(error.to_record()))
    return EXIT_FAILURE


def run(config: RunConfig) -> int:
    """Execute one validated request; prints the summary and writes or prints records"""
    handler = COMMANDS[config.command]
    try:
        result = handler(config)
        for line in result.summary:
            print(line)
        if config.command == "tables":
            return EXIT_OK
        if config.out:
            emit(result.records, config.format.value, config.out, config.echo(), result.columns)
        elif result.records:
            sys.stdout.write(render(result.records, config.format.value, config.echo(), result.columns))
    except PhaseLabError as e:
        return _failure(config, e)
    except OSError as e:
        return _failure(config, InputFileError(e.strerror or str(e), path=e.filename))
    except ValidationError as e:
        problems = [{"field": ".".join(str(p) for p in err["loc"]), "problem": err["msg"]}
                    for err in e.errors()]
        return _failure(config, InvalidRequestError(f"{e.error_count()} invalid value(s) for {e.title}",
                                                    problems=problems))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    values = {key: value for key, value in vars(args).items() if value is not None}
    try:
        config = RunConfig(**values)
    except ValidationError as e:
        print(f"phase-lab: invalid arguments: {e}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
