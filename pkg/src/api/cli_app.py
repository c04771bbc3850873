"""
Command-line entry point for the flow expander.

Usage:
    fexp pretrain --config recipes/global_toy.conf --seed 1
    fexp expand   --config recipes/global_toy.conf --seed 1 --out runs/global/1
    fexp oracle   --config recipes/oracle.conf
    fexp eval     --config recipes/eval_global.conf --samples runs/global/1/samples.csv
    fexp plot     --config recipes/plot_global.conf

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure,
3 failed acceptance check.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

# Add project root to Python path for proper imports
project_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from src.config.config_loader_service import ConfigLoaderService
from src.config.settings import settings
from src.core.errors import UsageError, exit_code_for
from src.core.services.experiments import ExperimentRunnerService

logger = logging.getLogger(__name__)

COMMANDS = ("pretrain", "expand", "oracle", "eval", "plot")


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = CliArgumentParser(prog="fexp", description=f"Verifier-constrained flow expansion {settings.APP_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CliArgumentParser)
    for command in COMMANDS:
        sub = subparsers.add_parser(command)
        sub.add_argument("--config", required=True, help="Run configuration file")
        sub.add_argument("--seed", type=int, default=None, help="Override the configured seed")
        sub.add_argument("--out", default=None, help="Override the output directory")
        sub.add_argument("--verbose", action="store_true", help="Debug logging")
        if command == "eval":
            sub.add_argument("--samples", default=None, help="Samples CSV to evaluate")
    return parser


def run_command(args: argparse.Namespace, runner: Optional[ExperimentRunnerService] = None) -> None:
    """Load the configuration named by args and run its subcommand."""
    config = ConfigLoaderService().load(args.config, seed=args.seed, output_dir=args.out)
    runner = runner or ExperimentRunnerService()
    if args.command == "pretrain":
        runner.pretrain(config)
    elif args.command == "expand":
        result = runner.expand(config)
        logger.info("Expansion finished with %d records", len(result.records))
    elif args.command == "oracle":
        report = runner.oracle(config)
        logger.info("Oracle checks passed: %d", len(report.checks))
    elif args.command == "eval":
        runner.evaluate(config, samples_path=args.samples)
    else:
        runner.plot(config)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one subcommand and return its exit status.

    Args:
        argv: Arguments without the program name; sys.argv[1:] when omitted

    Returns:
        Process exit status
    """
    arguments = sys.argv[1:] if argv is None else list(argv)
    level = logging.DEBUG if "--verbose" in arguments else logging.INFO
    logging.basicConfig(level=level, format=settings.LOG_FORMAT)
    try:
        args = build_parser().parse_args(arguments)
        run_command(args)
    except Exception as e:
        code = exit_code_for(e)
        logger.error("fexp failed (exit %d): %s", code, e)
        return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
