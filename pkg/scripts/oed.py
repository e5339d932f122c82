#!/usr/bin/env python3
"""
Satellite entanglement distribution - Main Entry Point

This script builds logical graphs of a LEO constellation, solves batches
of entanglement requests and runs the evaluation scenarios.

Usage:
    python scripts/oed.py {graph,solve,scenario} [options]

Options:
    --config PATH          Path to run configuration JSON file
    --seed N               Request seed (batch generation, scenarios ii/iii)
    --out-dir PATH         Output directory
    --no-isl               Forbid inter-satellite links in the exact solver
    --allow-ground-transit Let ground stations relay
    --time-limit-s SEC     Wall-clock limit per exact solve
    --verbose, -v          Enable verbose logging

Examples:
    # Logical graph of the configured window, with a Madrid-Sydney path
    python scripts/oed.py graph --tau 1 --delta 0.01 --path Madrid Sydney

    # Solve a manual batch without inter-satellite links
    python scripts/oed.py solve --batch input/batch_example.txt --no-isl

    # Reproduce scenario iii with four worker processes
    python scripts/oed.py scenario iii --workers 4
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.commands import cmd_graph, cmd_scenario, cmd_solve
from src.config_loader import SCENARIO_IDS, RunConfig, load_config
from src.constellation.visibility import TimeWindow


def setup_logging(verbose: bool = False) -> None:
    """Configure logging for the application.

    Args:
        verbose: If True, set log level to DEBUG; otherwise INFO.
    """
    log_level = logging.DEBUG if verbose else logging.INFO
    log_format = "%(levelname)s: %(message)s"

    logging.basicConfig(
        level=log_level,
        format=log_format,
        handlers=[logging.StreamHandler()]
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        type=Path,
        metavar="PATH",
        help="Path to run configuration JSON file (default: input/config.json)"
    )
    common.add_argument("--seed", type=int, help="Request seed")
    common.add_argument("--out-dir", type=Path, metavar="PATH", help="Output directory")
    common.add_argument(
        "--no-isl",
        action="store_true",
        help="Forbid inter-satellite links in the exact solver"
    )
    common.add_argument(
        "--allow-ground-transit",
        action="store_true",
        help="Allow ground stations to relay"
    )
    common.add_argument(
        "--time-limit-s",
        type=float,
        metavar="SEC",
        help="Wall-clock limit per exact solve"
    )
    common.add_argument("-v", "--verbose", action="store_true", help="Enable verbose logging")

    parser = argparse.ArgumentParser(
        description="Simulate and solve satellite-assisted entanglement distribution",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python scripts/oed.py graph --rings 4 --sats-per-ring 4 --tau 1 --delta 0.01
  python scripts/oed.py solve --seed 7
  python scripts/oed.py solve --batch input/batch_example.txt --no-isl
  python scripts/oed.py scenario i ii
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)

    graph = sub.add_parser("graph", parents=[common], help="Write the logical graph of a window")
    solve = sub.add_parser("solve", parents=[common], help="Solve one request batch")
    for p in (graph, solve):
        p.add_argument("--tau", type=float, help="Window start (hours)")
        p.add_argument("--delta", type=float, help="Window length (hours)")
        p.add_argument("--rings", type=int, help="Number of rings R")
        p.add_argument("--sats-per-ring", type=int, help="Satellites per ring K")
    graph.add_argument(
        "--path",
        nargs=2,
        metavar=("SRC", "DST"),
        help="Report the minimum-hop path between two stations"
    )
    solve.add_argument("--batch", type=Path, metavar="PATH", help="Manual batch file")
    solve.add_argument("--requests", type=int, metavar="N", help="Number of generated requests")
    solve.add_argument("--greedy-only", action="store_true", help="Run only the greedy solver")

    scenario = sub.add_parser("scenario", parents=[common], help="Run evaluation scenarios")
    scenario.add_argument(
        "which",
        nargs="*",
        metavar="ID",
        help=f"Scenario ids among {', '.join(SCENARIO_IDS)} (default: those in the configuration)"
    )
    scenario.add_argument("--workers", type=int, help="Worker processes")
    return parser


def apply_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    """Let command-line flags override configuration values."""
    config.override(
        request_seed=args.seed,
        output_dir=args.out_dir,
        time_limit_s=args.time_limit_s,
        allow_isl=False if args.no_isl else None,
        allow_ground_transit=True if args.allow_ground_transit else None,
    )
    if args.command in ("graph", "solve"):
        tau = args.tau if args.tau is not None else config.window.tau
        delta = args.delta if args.delta is not None else config.window.delta
        config.override(window=TimeWindow(tau, delta))
        if args.rings is not None or args.sats_per_ring is not None:
            cfg = config.constellation
            resized = cfg.with_size(args.rings or cfg.rings, args.sats_per_ring or cfg.sats_per_ring)
            config.override(constellation=resized)
    if args.command == "solve":
        config.override(batch_file=args.batch, request_count=args.requests)
        if args.greedy_only:
            config.override(run_exact=False, run_restricted=False)
    if args.command == "scenario":
        config.override(workers=args.workers)
    return config


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point.

    Returns:
        Exit code (0 for success, 1 for failure, 130 when interrupted).
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "scenario":
        unknown = [s for s in args.which if s not in SCENARIO_IDS]
        if unknown:
            parser.error(f"unknown scenario id(s): {', '.join(unknown)}")

    setup_logging(args.verbose)
    logger = logging.getLogger(__name__)

    try:
        config = apply_overrides(load_config(args.config), args)
    except FileNotFoundError as e:
        logger.error(f"Configuration error: {e}")
        return 1
    except ValueError as e:
        logger.error(f"Invalid configuration: {e}")
        return 1

    logger.info("=" * 60)
    logger.info("Satellite entanglement distribution")
    logger.info(f"Run: {config.name}")
    logger.info("=" * 60)

    try:
        if args.command == "graph":
            success = cmd_graph(config, path_query=tuple(args.path) if args.path else None)
        elif args.command == "solve":
            success = cmd_solve(config)
        else:
            success = cmd_scenario(config, args.which or config.scenarios, progress=True)
    except KeyboardInterrupt:
        logger.info("\nOperation cancelled by user")
        return 130
    except (FileNotFoundError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        return 1
    except Exception as e:
        logger.error(f"{args.command} failed: {e}")
        import traceback
        traceback.print_exc()
        return 1

    if not success:
        logger.error("Some solutions failed verification")
    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())
