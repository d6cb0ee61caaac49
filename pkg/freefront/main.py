"""Main entry point for the free-boundary simulator."""
# Standard library imports
import argparse
import asyncio
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# Local imports
from .api.commands import EXIT_CONFIG, create_command_handlers

logger = logging.getLogger("freefront")


def parse_runtime_config() -> Dict[str, Any]:
    """Parse runtime configuration from environment variables."""
    threads_text = os.environ.get("FREEFRONT_THREADS", "")
    try:
        threads = int(threads_text) if threads_text else (os.cpu_count() or 1)
    except ValueError:
        raise ValueError(f"FREEFRONT_THREADS must be an integer, got {threads_text!r}")
    log_level = os.environ.get("FREEFRONT_LOG_LEVEL", "INFO").upper()
    if log_level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        raise ValueError(f"FREEFRONT_LOG_LEVEL must be a logging level name, got {log_level!r}")
    return {
        "threads": max(1, threads),
        "log_level": log_level,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freefront", description="Free-boundary nonlocal/local diffusion simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(name: str, help_text: str, needs_out: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, required=True, help="Problem file (key = value)")
        p.add_argument("--out", type=Path, default=Path("out") if needs_out else None, help="Output directory")
        p.add_argument(
            "--allow-nonlipschitz-kernel",
            action="store_true",
            default=None,
            help="Admit kernels with a jump at the support edge",
        )
        return p

    common("run", "Run one simulation")
    validate = common("validate", "Check hypotheses and print a-priori bounds", needs_out=False)
    validate.add_argument("--comparison-seeds", type=int, default=0,
                          help="Randomized comparison-principle cases to run")
    sweep = common("sweep", "Parameter sweep")
    sweep.add_argument("--param", required=True, help="mu, rho, h0, init.u0_amp or init.v0_amp")
    sweep.add_argument("--values", required=True, help="Comma-separated values")
    convergence = common("convergence", "Self-convergence study", needs_out=False)
    convergence.add_argument("--levels", type=int, default=3)
    convergence.add_argument("--refine", choices=("time", "space", "both"), default="time")
    oracle = common("oracle", "Compare against the Eulerian reference solver")
    oracle.add_argument("--nx", type=int, default=2001, help="Oracle node count")
    return parser


async def async_main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = parse_runtime_config()
    except ValueError as e:
        logger.error(str(e))
        return EXIT_CONFIG
    logging.getLogger().setLevel(config["log_level"])

    handlers = create_command_handlers(threads=config["threads"])
    logger.debug(f"Dispatching '{args.command}' (threads={config['threads']})")
    return await handlers[args.command](args)


def main(argv: Optional[List[str]] = None):
    # Configure logging
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    try:
        code = asyncio.run(async_main(argv))
    except KeyboardInterrupt:
        logger.info("Interrupted, shutting down...")
        code = 130
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        code = 2
    sys.exit(code)
