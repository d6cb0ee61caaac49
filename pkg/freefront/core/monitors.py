"""Post-run invariant monitors.

Hard monitors decide the exit status of a run; informational ones are
reported alongside and never fail it.
"""
import logging
import math
from typing import Any, Dict

import numpy as np

from ..interfaces import AprioriBounds, Trajectory
from ..model import ProblemConfig
from .bounds import check_gamma_membership

logger = logging.getLogger(__name__)

SLACK = 0.05
ENVELOPE_TOLERANCE = 1e-10
CONTRACTION_LIMIT = 0.9


def _verdict(ok: np.ndarray, t: np.ndarray, worst: float, hard: bool) -> Dict[str, Any]:
    ok = np.asarray(ok, dtype=bool)
    failed = np.flatnonzero(~ok)
    return {
        "holds": bool(failed.size == 0),
        "hard": hard,
        "first_violation": float(t[failed[0]]) if failed.size else None,
        "worst": worst if math.isfinite(worst) else None,
    }


def final_report(traj: Trajectory, bounds: AprioriBounds, cfg: ProblemConfig) -> Dict[str, Any]:
    """Evaluate every monitor against a finished trajectory."""
    data = traj.arrays()
    t, g, h = data["t"], data["g"], data["h"]
    gdot, hdot = data["gdot"], data["hdot"]
    flux, flux_left = data["flux"], data["flux_left"]
    moving = cfg.mu > 0 or cfg.rho > 0
    # the Stefan flux can only be positive if v is present at all
    v_present = bool(traj.snapshots and np.max(traj.snapshots[0].z) > 0)
    checks: Dict[str, Dict[str, Any]] = {}

    step_t = t[1:]
    checks["front_monotonicity"] = _verdict(
        (np.diff(h) > 0) & (np.diff(g) < 0), step_t,
        float(min(np.min(np.diff(h), initial=math.inf), np.min(-np.diff(g), initial=math.inf))),
        hard=moving,
    )

    ceiling = bounds.R(t) * (1.0 + SLACK)
    fastest = np.maximum(hdot, -gdot)
    checks["speed_ceiling"] = _verdict(fastest <= ceiling, t, float(np.max(fastest - ceiling)), hard=True)

    steepest = np.maximum(flux, flux_left)
    checks["flux_bound"] = _verdict(
        steepest <= bounds.k3 * (1.0 + SLACK), t, float(np.max(steepest)), hard=True)
    shallowest = np.minimum(flux, flux_left)[1:]
    checks["flux_positive"] = _verdict(
        shallowest > 0, step_t, float(np.min(shallowest, initial=math.inf)), hard=moving and v_present)

    growth = bounds.growth_bound(t)
    if np.all(np.isfinite(growth)):
        checks["growth_bound"] = _verdict(
            h - g <= growth * (1.0 + SLACK), t, float(np.max((h - g) / growth)), hard=True)
    else:
        checks["growth_bound"] = {"holds": True, "hard": False, "first_violation": None,
                                  "worst": None, "reason": "rho k1 = 0"}

    snaps = traj.snapshots
    snap_t = np.array([s.t for s in snaps])
    asymmetry = [float(np.max(np.abs(s.w - s.w[::-1]))) for s in snaps]
    checks["symmetry"] = {
        "hard": False,
        "max_front_offset": float(np.max(np.abs(g + h))),
        "max_w_asymmetry": max(asymmetry),
        "max_z_asymmetry": max(float(np.max(np.abs(s.z - s.z[::-1]))) for s in snaps),
    }

    early = [s for s in snaps if 0 < s.t <= bounds.T0]
    if early:
        decay = math.exp(-(cfg.d1 + bounds.L))
        ok = []
        for s in early:
            near = np.abs(s.x) <= cfg.h0
            floor = decay ** s.t * np.asarray(cfg.u0(s.x[near]), dtype=float)
            ok.append(bool(np.all(s.w[near] >= floor - ENVELOPE_TOLERANCE)))
        checks["lower_envelope"] = _verdict(np.array(ok), np.array([s.t for s in early]), math.nan, hard=False)

    later = [s for s in snaps if s.t > 0]
    if later:
        positive = [bool(np.all(s.w[1:-1] > 0) and np.all(s.z[1:-1] > 0)) for s in later]
        checks["strict_positivity"] = _verdict(
            np.array(positive), np.array([s.t for s in later]), math.nan, hard=False)

    iters = data["picard_iters"][1:]
    contraction = data["contraction"][1:]
    hard_failures = sorted(name for name, check in checks.items() if check["hard"] and not check["holds"])
    for name in hard_failures:
        logger.warning(f"Monitor '{name}' failed at t={checks[name]['first_violation']}")

    return {
        "ok": not hard_failures,
        "hard_failures": hard_failures,
        "checks": checks,
        "gamma": check_gamma_membership(traj, bounds),
        "effective_dx": float((h[-1] - g[-1]) / (cfg.N - 1)),
        "steps": traj.steps,
        "snapshot_times": len(snap_t),
        "picard": {
            "max_iters": int(np.max(iters, initial=0)),
            "mean_iters": float(np.mean(iters)) if iters.size else 0.0,
            "converged_fraction": float(np.mean(data["residual"][1:] <= cfg.picard_tol)) if iters.size else 1.0,
            "max_contraction": float(np.max(contraction, initial=0.0)),
            "contracting_fraction": float(np.mean(contraction <= CONTRACTION_LIMIT)) if iters.size else 1.0,
        },
    }
