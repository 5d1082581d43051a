"""Command-line front end: generate, solve, compare, verify."""
import sys
import pathlib
import argparse
import logging
from typing import Optional, Sequence

from rationd import config
from rationd.exceptions import (ConfigurationError, ContractViolation, DocumentError, OracleBudgetExceeded,
                                RationdError, WrongFileExtension)
from rationd.strategies import ALGORITHMS

from .commands import (ADVERSARIAL, EXIT_INVALID, EXIT_REFUSED, EXIT_RUNTIME, EXIT_USAGE, cmd_compare,
                       cmd_generate, cmd_solve, cmd_verify)

logger = logging.getLogger(__name__)


def seed_value(text: str) -> int:
    """Unsigned 64-bit seed"""
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed {value} outside [0, 2^64)")
    return value


def positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command"""
    parser = argparse.ArgumentParser(prog="rationd", description="Quota-constrained rationing over days")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_options = argparse.ArgumentParser(add_help=False)
    run_options.add_argument("--tie-break", metavar="ORDER|adversarial", default=None,
                             help=f"comma-separated agent precedence, or '{ADVERSARIAL}' to invert input order")
    run_options.add_argument("--budget", type=positive_int, default=config.DEFAULT_ORACLE_BUDGET,
                             help="exact oracle node budget")
    run_options.add_argument("--exact", action="store_true", help="print exact rationals")

    generate = subparsers.add_parser("generate", help="write a generated instance")
    generate.add_argument("config", type=pathlib.Path, help="generator config document")
    generate.add_argument("out", type=pathlib.Path, help="instance document to write")
    generate.add_argument("--seed", type=seed_value, default=None, help="override the config seed")
    generate.set_defaults(handler=cmd_generate)

    solve = subparsers.add_parser("solve", parents=[run_options], help="solve an instance")
    solve.add_argument("instance", type=pathlib.Path)
    solve.add_argument("algorithm", choices=ALGORITHMS)
    solve.add_argument("--out", type=pathlib.Path, default=None, help="allocation document to write")
    solve.set_defaults(handler=cmd_solve)

    compare = subparsers.add_parser("compare", parents=[run_options], help="online against offline")
    compare.add_argument("instance", type=pathlib.Path)
    compare.add_argument("--model2", action="store_true", help="enforce overall quotas")
    compare.add_argument("--out", type=pathlib.Path, default=pathlib.Path("."),
                         help="directory for the metric CSVs")
    compare.add_argument("--xlsx", type=pathlib.Path, default=None, help="also write a metrics workbook")
    compare.set_defaults(handler=cmd_compare)

    verify = subparsers.add_parser("verify", parents=[run_options], help="run the analysis suite")
    verify.add_argument("instance", type=pathlib.Path, nargs="?", default=None)
    verify.add_argument("--model2", action="store_true", help="enforce overall quotas")
    verify.add_argument("--allocation", type=pathlib.Path, default=None, help="allocation document to check")
    verify.add_argument("--samples", type=int, default=0, help="sampled small instances to verify")
    verify.add_argument("--seed", type=seed_value, default=None, help="first sample seed")
    verify.add_argument("--workers", type=positive_int, default=1, help="processes for deviation runs")
    verify.set_defaults(handler=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command and map errors to exit codes"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        if args.samples < 0:
            parser.error("--samples must be non-negative")
        if args.instance is None and not args.samples:
            parser.error("verify needs an instance, --samples, or both")
        if args.allocation is not None and args.instance is None:
            parser.error("--allocation needs an instance")

    config.configure_logging()
    try:
        return args.handler(args)
    except WrongFileExtension as error:
        logger.error(error)
        return EXIT_USAGE
    except (DocumentError, ContractViolation) as error:
        logger.error(error)
        return EXIT_INVALID
    except (OracleBudgetExceeded, ConfigurationError) as error:
        logger.error(error)
        return EXIT_REFUSED
    except (RationdError, OSError) as error:
        logger.error(error)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
