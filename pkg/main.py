"""Command-line entry point: ber-curve, optimize, validate and simulate."""

import argparse
import logging
import sys

from dotenv import load_dotenv

from services.config_loader import PRESETS, ConfigLoader
from services.exceptions import (
    ConfigError,
    DegenerateDistributionError,
    InfeasibleAllocationError,
    ThermodynamicDomainError
)
from services.experiment_service import ExperimentService, resolve_seed

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_INFEASIBLE = 3
EXIT_DOMAIN_ERROR = 4

COMMANDS = ("ber-curve", "optimize", "validate", "simulate")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Energy allocation and BER analysis for imperfect two-reservoir MoSK transmitters"
    )
    parser.add_argument("command", choices=COMMANDS)
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", metavar="PATH", help="experiment config file")
    source.add_argument("--preset", choices=PRESETS, help="bundled experiment config")
    parser.add_argument("--seed", type=int, help="root seed (overrides config and MOSK_ALLOC_SEED)")
    parser.add_argument("--out", metavar="PATH", help="output CSV path (default: config output key or stdout)")
    parser.add_argument("--force-ga", action="store_true", help="use the genetic algorithm even for two users")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    parser.add_argument("--workers", type=int, default=1, help="threads for Monte Carlo blocks")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def run(args: argparse.Namespace) -> int:
    """Run one command and return its exit code."""
    if args.seed is not None and args.seed < 0:
        raise ConfigError("--seed must be non-negative")
    if args.trials is not None and args.trials < 1:
        raise ConfigError("--trials must be at least 1")
    if args.workers < 1:
        raise ConfigError("--workers must be at least 1")

    if args.config:
        loader = ConfigLoader(args.config)
    else:
        loader = ConfigLoader.for_preset(args.preset or "defaults")
    config = loader.load()

    service = ExperimentService(
        config,
        seed=resolve_seed(args.seed, config),
        out=args.out,
        n_trials=args.trials,
        workers=args.workers
    )

    if args.command == "ber-curve":
        service.cmd_ber_curve()
    elif args.command == "optimize":
        service.cmd_optimize(force_ga=args.force_ga)
    elif args.command == "validate":
        all_passed, _ = service.cmd_validate()
        if not all_passed:
            return EXIT_VALIDATION_FAILED
    else:
        service.cmd_simulate()
    return EXIT_OK


def main(argv=None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    try:
        return run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except InfeasibleAllocationError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ThermodynamicDomainError, DegenerateDistributionError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
