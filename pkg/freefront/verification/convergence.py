"""Self-convergence studies with Richardson order estimates."""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..exceptions import ErrorResponse, NonMonotoneErrorsError
from ..interfaces import AprioriBounds, Trajectory
from ..model import ProblemConfig
from ..utils.validation import kernel_floor
from ..core.bounds import compute_bounds
from ..core.stepper import initial_state, run, select_dt
from .oracle import OracleConfig, compare_trajectories, oracle_run

logger = logging.getLogger(__name__)

REFINE_MODES = ("time", "space", "both")
DISCREPANCIES = ("dh_rel", "dg_rel", "du_rel", "dv_rel")


@dataclass
class ConvergenceResult:
    """Differences between successive levels and the orders they imply."""
    refine: str
    levels: List[Dict[str, Any]]
    errors: Dict[str, List[float]]
    orders: Dict[str, List[Optional[float]]]
    warnings: List[Dict[str, Any]] = field(default_factory=list)

    def order(self, quantity: str) -> Optional[float]:
        """Order from the finest triple."""
        values = self.orders.get(quantity) or [None]
        return values[-1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "refine": self.refine,
            "levels": self.levels,
            "errors": self.errors,
            "orders": self.orders,
            "warnings": self.warnings,
            "note": "orders are scheme-expected values, not analytic rates",
        }


def observed_orders(errors: List[float]) -> List[Optional[float]]:
    """Richardson orders log2(e_i / e_{i+1}) from differences of successive levels.

    With e_i = |q_i - q_{i+1}| this is log2(|q1 - q2| / |q2 - q3|) per triple;
    a zero difference gives None.
    """
    return [
        math.log2(errors[i] / errors[i + 1]) if errors[i] > 0 and errors[i + 1] > 0 else None
        for i in range(len(errors) - 1)
    ]


def _common(values: np.ndarray, coarse_n: int) -> np.ndarray:
    """Subsample a field onto the nodes of a grid with ``coarse_n`` nodes."""
    stride = (len(values) - 1) // (coarse_n - 1)
    return values[::stride]


def convergence_study(
    cfg: ProblemConfig,
    levels: int = 3,
    refine: str = "time",
    dt0: Optional[float] = None,
    bounds: Optional[AprioriBounds] = None,
) -> ConvergenceResult:
    """Run ``levels`` refinements and estimate observed orders.

    Time refinement halves a fixed dt, space refinement takes N -> 2(N-1)+1,
    "both" does the two together. The coarsest dt defaults to T / ceil(T / dt_auto)
    at the finest grid (time, space) or the coarsest grid (both).
    Non-decreasing differences are reported in ``warnings``, never raised.
    """
    if refine not in REFINE_MODES:
        raise ValueError(f"refine must be one of {REFINE_MODES}, got {refine!r}")
    if levels < 3:
        raise ValueError(f"Need at least 3 levels, got {levels}")
    if bounds is None:
        bounds = compute_bounds(cfg, kernel_floor(cfg.kernel, cfg.h0))

    sizes = [cfg.N] * levels
    if refine in ("space", "both"):
        for i in range(1, levels):
            sizes[i] = 2 * (sizes[i - 1] - 1) + 1
    if dt0 is None:
        probe = cfg.with_updates(N=sizes[0] if refine == "both" else sizes[-1])
        dt_auto = select_dt(initial_state(probe, bounds), probe, bounds)
        dt0 = cfg.T / math.ceil(cfg.T / dt_auto)
    steps = [dt0 / 2 ** i if refine in ("time", "both") else dt0 for i in range(levels)]

    runs: List[Trajectory] = []
    for N, dt in zip(sizes, steps):
        logger.info(f"Convergence level N={N}, dt={dt:.6g}")
        runs.append(run(cfg.with_updates(N=N, dt=dt, snapshots=1), bounds))

    finals = [traj.final for traj in runs]
    errors: Dict[str, List[float]] = {"h": [], "g": [], "w": [], "z": []}
    for coarse, fine in zip(finals[:-1], finals[1:]):
        errors["h"].append(abs(coarse.h - fine.h))
        errors["g"].append(abs(coarse.g - fine.g))
        n = len(coarse.w)
        errors["w"].append(float(np.max(np.abs(coarse.w - _common(fine.w, n)))))
        errors["z"].append(float(np.max(np.abs(coarse.z - _common(fine.z, n)))))

    orders = {quantity: observed_orders(values) for quantity, values in errors.items()}
    warnings = []
    for quantity, values in errors.items():
        if any(later >= earlier for earlier, later in zip(values, values[1:]) if earlier > 0):
            error = NonMonotoneErrorsError(quantity, values)
            logger.warning(f"{error}; order estimate unreliable")
            warnings.append(ErrorResponse(error).to_dict())

    return ConvergenceResult(
        refine=refine,
        levels=[{"N": N, "dt": dt, "h": f.h, "g": f.g} for N, dt, f in zip(sizes, steps, finals)],
        errors=errors,
        orders=orders,
        warnings=warnings,
    )


def oracle_refinement(
    cfg: ProblemConfig,
    ocfg: OracleConfig,
    sizes: Sequence[int] = (21, 41, 81),
    bounds: Optional[AprioriBounds] = None,
    oracle: Optional[Trajectory] = None,
) -> Dict[str, Any]:
    """Main solver at increasing N against one fixed oracle run.

    Each discrepancy of compare_trajectories is expected to shrink from one
    level to the next; ``monotone`` records whether it strictly does. A
    finished oracle trajectory for the same config may be passed in.
    """
    if len(sizes) < 3:
        raise ValueError(f"Need at least 3 levels, got {len(sizes)}")
    if bounds is None:
        bounds = compute_bounds(cfg, kernel_floor(cfg.kernel, cfg.h0))

    if oracle is None:
        oracle = oracle_run(cfg, ocfg)
    levels = []
    for N in sizes:
        logger.info(f"Oracle refinement level N={N}")
        main = run(cfg.with_updates(N=N), bounds)
        levels.append({"N": N, **compare_trajectories(main, oracle, cfg.h0, bounds.k1, bounds.k2)})

    monotone = {
        key: all(fine[key] < coarse[key] for coarse, fine in zip(levels, levels[1:]))
        for key in DISCREPANCIES
    }
    for key, ok in monotone.items():
        if not ok:
            logger.warning(f"Oracle discrepancy {key} does not decrease: {[level[key] for level in levels]}")
    return {"oracle": ocfg.to_dict(), "levels": levels, "monotone": monotone}
