import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Any, Awaitable, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy

from .. import __version__
from ..core import compute_bounds, run
from ..exceptions import ConfigError, ErrorResponse, FreeFrontError, HypothesisError, SolverError
from ..interfaces import AprioriBounds, KernelFloor, Trajectory
from ..model import InitialProfile, ProblemConfig
from ..storage import OutputBackend, create_output_backend
from ..storage.filesystem.manager import format_number
from ..utils import load_config, validate_kernel, validate_problem, validate_reaction
from ..verification import (
    OracleConfig,
    compare_trajectories,
    comparison_suite,
    convergence_study,
    oracle_run,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2

SWEEP_PARAMS = ("mu", "rho", "h0", "init.u0_amp", "init.v0_amp")
ORACLE_TOLERANCES = {"dh_rel": 0.02, "du_rel": 0.05, "dv_rel": 0.05}


def prepare(cfg: ProblemConfig) -> Tuple[KernelFloor, AprioriBounds, Dict[str, Any]]:
    """Validate a problem and derive its a-priori bounds.

    Raises:
        ConfigError: For inconsistent coefficients or initial data
        HypothesisError: If the kernel or the reaction fails its hypotheses
    """
    validate_problem(cfg)
    floor = validate_kernel(cfg.kernel, cfg.h0, cfg.allow_nonlipschitz_kernel)
    bounds = compute_bounds(cfg, floor)
    reaction_report = validate_reaction(cfg.reaction, bounds.k1)
    return floor, bounds, reaction_report


def build_header(cfg: ProblemConfig, floor: KernelFloor, bounds: AprioriBounds) -> Dict[str, Any]:
    return {
        "config": cfg.to_mapping(),
        "kernel_floor": floor.to_dict(),
        "apriori": bounds.to_dict(),
        "versions": {"freefront": __version__, "numpy": np.__version__, "scipy": scipy.__version__},
    }


def apply_sweep_value(cfg: ProblemConfig, param: str, value: float) -> ProblemConfig:
    """Copy of ``cfg`` with one sweepable parameter replaced."""
    if param not in SWEEP_PARAMS:
        raise ConfigError(f"cannot sweep '{param}' (expected one of {', '.join(SWEEP_PARAMS)})", key=param)
    if param in ("mu", "rho", "h0"):
        return cfg.with_updates(**{param: value})
    name = param[len("init."):-len("_amp")]
    profile = getattr(cfg, name)
    if not isinstance(profile, InitialProfile):
        raise ConfigError("only named profiles have an amplitude", key=param)
    return cfg.with_updates(**{name: replace(profile, amplitude=value)})


def parse_values(text: Optional[str]) -> List[float]:
    """Comma-separated sweep values."""
    items = [item.strip() for item in (text or "").split(",") if item.strip()]
    if not items:
        raise ConfigError("empty value list", key="--values")
    try:
        return [float(item) for item in items]
    except ValueError as e:
        raise ConfigError(f"cannot parse sweep values: {e}", key="--values")


def solve(cfg: ProblemConfig) -> Dict[str, Any]:
    """Validate and run one problem; errors are returned, not raised.

    Module-level so that sweep workers can pickle it.
    """
    try:
        floor, bounds, _ = prepare(cfg)
    except (ConfigError, HypothesisError) as e:
        return {"exit": EXIT_CONFIG, "error": ErrorResponse(e).to_dict()}
    header = build_header(cfg, floor, bounds)
    try:
        traj = run(cfg, bounds)
    except SolverError as e:
        return {"exit": EXIT_SOLVER, "header": header, "error": ErrorResponse(e).to_dict()}
    return {
        "exit": EXIT_OK if traj.report["ok"] else EXIT_SOLVER,
        "header": header,
        "traj": traj,
    }


async def write_outcome(backend: OutputBackend, outcome: Dict[str, Any]) -> None:
    await backend.initialize()
    if "header" in outcome:
        await backend.write_header(outcome["header"])
    if "traj" in outcome:
        traj: Trajectory = outcome["traj"]
        await backend.write_fronts(traj)
        await backend.write_fields(traj)
        await backend.write_report(traj.report)
    else:
        await backend.write_report(outcome["error"])
    await backend.cleanup()


async def cmd_run(
    config_path: Path,
    out_dir: Path,
    allow_nonlipschitz_kernel: Optional[bool] = None,
) -> int:
    """Run one simulation and write header, fronts, fields and report."""
    backend = create_output_backend("filesystem", root=out_dir)
    try:
        cfg = await load_config(config_path, allow_nonlipschitz_kernel)
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        await write_outcome(backend, {"error": ErrorResponse(e).to_dict()})
        return EXIT_CONFIG

    outcome = await asyncio.to_thread(solve, cfg)
    await write_outcome(backend, outcome)
    if outcome["exit"] != EXIT_OK:
        logger.error(f"Run failed: {outcome.get('error') or outcome['traj'].report['hard_failures']}")
    return outcome["exit"]


async def cmd_validate(
    config_path: Path,
    allow_nonlipschitz_kernel: Optional[bool] = None,
    comparison_seeds: int = 0,
    out_dir: Optional[Path] = None,
) -> int:
    """Check every hypothesis and print the a-priori bounds."""
    try:
        cfg = await load_config(config_path, allow_nonlipschitz_kernel)
        floor, bounds, reaction_report = prepare(cfg)
    except (ConfigError, HypothesisError) as e:
        logger.error(f"Validation failed: {e}")
        print(f"FAIL {type(e).__name__}: {e}")
        return EXIT_CONFIG

    print(f"kernel    {cfg.kernel.family.value} a={format_number(cfg.kernel.a)}: ok")
    print(f"reaction  {cfg.reaction.kind.value}: ok")
    for name, value in bounds.to_dict().items():
        print(f"{name:<14}{value if isinstance(value, list) else format_number(value)}")

    report: Dict[str, Any] = {
        "kernel_floor": floor.to_dict(),
        "apriori": bounds.to_dict(),
        "reaction": reaction_report,
    }
    status = EXIT_OK
    if comparison_seeds > 0:
        suite = await asyncio.to_thread(comparison_suite, range(comparison_seeds))
        print(f"comparison {suite['cases']} cases, {suite['violations']} violations")
        report["comparison"] = suite
        if suite["violations"]:
            status = EXIT_SOLVER
    if out_dir is not None:
        backend = create_output_backend("filesystem", root=out_dir)
        await backend.initialize()
        await backend.write_report(report, name="validate.json")
    return status


async def cmd_sweep(
    config_path: Path,
    param: str,
    values: Union[str, Sequence[float]],
    out_dir: Path,
    threads: int = 1,
    allow_nonlipschitz_kernel: Optional[bool] = None,
) -> int:
    """Independent runs per parameter value, in parallel, plus summary.csv."""
    try:
        values = parse_values(values) if isinstance(values, str) or values is None else list(values)
        if not values:
            raise ConfigError("empty value list", key="--values")
        base = await load_config(config_path, allow_nonlipschitz_kernel)
        configs = [apply_sweep_value(base, param, value) for value in values]
    except ConfigError as e:
        logger.error(f"Invalid sweep: {e}")
        return EXIT_CONFIG

    backend = create_output_backend("filesystem", root=out_dir)
    await backend.initialize()
    semaphore = asyncio.Semaphore(max(1, threads))
    loop = asyncio.get_running_loop()
    logger.info(f"Sweeping {param} over {len(values)} values with {threads} workers")

    async def one(pool: ProcessPoolExecutor, value: float, cfg: ProblemConfig) -> Dict[str, Any]:
        async with semaphore:
            outcome = await loop.run_in_executor(pool, solve, cfg)
        await write_outcome(backend.child(f"{param}={format_number(value)}"), outcome)
        row: Dict[str, Any] = {"value": value}
        if "traj" in outcome:
            final = outcome["traj"].final
            row.update({
                "h_T": final.h, "g_T": final.g,
                "max_u_T": float(np.max(final.w)), "max_v_T": float(np.max(final.z)),
                "width_T": final.h - final.g,
            })
        row["status"] = "ok" if outcome["exit"] == EXIT_OK else (
            outcome["error"]["error"]["type"] if "error" in outcome else "monitor_failed")
        return row

    with ProcessPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = await asyncio.gather(*(one(pool, v, c) for v, c in zip(values, configs)))
    await backend.write_summary(list(rows))
    return EXIT_OK if all(row["status"] == "ok" for row in rows) else EXIT_SOLVER


async def cmd_convergence(
    config_path: Path,
    levels: int = 3,
    refine: str = "time",
    out_dir: Optional[Path] = None,
    allow_nonlipschitz_kernel: Optional[bool] = None,
) -> int:
    """Self-convergence study; prints the order table."""
    try:
        cfg = await load_config(config_path, allow_nonlipschitz_kernel)
        _, bounds, _ = prepare(cfg)
        if levels < 3:
            raise ConfigError(f"need at least 3 levels, got {levels}", key="--levels")
    except (ConfigError, HypothesisError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG

    try:
        result = await asyncio.to_thread(convergence_study, cfg, levels, refine, None, bounds)
    except SolverError as e:
        logger.error(f"Convergence study failed: {e}")
        return EXIT_SOLVER

    print(f"{'quantity':<10}{'differences':<60}orders")
    for quantity, errors in result.errors.items():
        orders = ", ".join("n/a" if p is None else f"{p:.3f}" for p in result.orders[quantity])
        print(f"{quantity:<10}{', '.join(f'{e:.3e}' for e in errors):<60}{orders}")
    if out_dir is not None:
        backend = create_output_backend("filesystem", root=out_dir)
        await backend.initialize()
        await backend.write_report(result.to_dict(), name="convergence.json")
    return EXIT_OK


async def cmd_oracle(
    config_path: Path,
    out_dir: Path,
    nx: int = 2001,
    allow_nonlipschitz_kernel: Optional[bool] = None,
) -> int:
    """Main solver against the Eulerian oracle on the same problem."""
    try:
        cfg = await load_config(config_path, allow_nonlipschitz_kernel)
        floor, bounds, _ = prepare(cfg)
    except (ConfigError, HypothesisError) as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG

    ocfg = OracleConfig.for_problem(cfg, bounds, Nx=nx)
    try:
        main_traj, oracle_traj = await asyncio.gather(
            asyncio.to_thread(run, cfg, bounds),
            asyncio.to_thread(oracle_run, cfg, ocfg),
        )
    except SolverError as e:
        logger.error(f"Oracle comparison failed: {e}")
        backend = create_output_backend("filesystem", root=out_dir)
        await write_outcome(backend, {"header": build_header(cfg, floor, bounds),
                                      "error": ErrorResponse(e).to_dict()})
        return EXIT_SOLVER

    discrepancy = compare_trajectories(main_traj, oracle_traj, cfg.h0, bounds.k1, bounds.k2)
    discrepancy["oracle"] = ocfg.to_dict()
    discrepancy["within_tolerance"] = all(discrepancy[k] <= tol for k, tol in ORACLE_TOLERANCES.items())

    backend = create_output_backend("filesystem", root=out_dir)
    await write_outcome(backend, {"header": build_header(cfg, floor, bounds), "traj": main_traj})
    oracle_backend = backend.child("oracle")
    await oracle_backend.initialize()
    await oracle_backend.write_fronts(oracle_traj)
    await oracle_backend.write_fields(oracle_traj)
    await backend.write_report(discrepancy, name="oracle.json")
    print(f"dh/h0={discrepancy['dh_rel']:.3e} du/k1={discrepancy['du_rel']:.3e} dv/k2={discrepancy['dv_rel']:.3e}")
    return EXIT_OK if discrepancy["within_tolerance"] else EXIT_SOLVER


def create_command_handlers(threads: int = 1) -> Dict[str, Callable[[Any], Awaitable[int]]]:
    """Map subcommand names to handlers taking parsed CLI arguments."""

    async def handle_command(name: str, coro: Awaitable[int]) -> int:
        try:
            return await coro
        except FreeFrontError as e:
            logger.error(f"Error in {name}: {e}", exc_info=True)
            return EXIT_SOLVER if isinstance(e, SolverError) else EXIT_CONFIG

    return {
        "run": lambda args: handle_command("run", cmd_run(
            args.config, args.out, args.allow_nonlipschitz_kernel)),
        "validate": lambda args: handle_command("validate", cmd_validate(
            args.config, args.allow_nonlipschitz_kernel, args.comparison_seeds, args.out)),
        "sweep": lambda args: handle_command("sweep", cmd_sweep(
            args.config, args.param, args.values, args.out, threads,
            args.allow_nonlipschitz_kernel)),
        "convergence": lambda args: handle_command("convergence", cmd_convergence(
            args.config, args.levels, args.refine, args.out, args.allow_nonlipschitz_kernel)),
        "oracle": lambda args: handle_command("oracle", cmd_oracle(
            args.config, args.out, args.nx, args.allow_nonlipschitz_kernel)),
    }
