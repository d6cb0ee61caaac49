"""A-priori constants and the admissible-front-set membership check."""
import logging
import math
from typing import Any, Dict, Optional

import numpy as np
from scipy.integrate import trapezoid

from ..interfaces import AprioriBounds, KernelFloor, ReferenceGrid, Trajectory
from ..model import ProblemConfig

logger = logging.getLogger(__name__)

# Initial data are sampled this many times finer than the solver grid
REFINE = 8
EDGE_SAMPLES = 1001
EPS0_FACTOR = 0.5
SPEED_SLACK = 0.05
WIDTH_SLACK = 1e-9


def _sup_norms(cfg: ProblemConfig):
    fine = ReferenceGrid(REFINE * (cfg.N - 1) + 1)
    x = cfg.h0 * fine.nodes
    dx = cfg.h0 * fine.spacing
    u0 = np.asarray(cfg.u0(x), dtype=float)
    v0 = np.asarray(cfg.v0(x), dtype=float)
    u0_slope = float(np.max(np.abs(np.diff(u0)))) / dx
    v0_slope = float(np.max(np.abs(np.diff(v0)))) / dx
    return float(np.max(u0)), float(np.max(v0)), u0_slope, v0_slope


def _edge_mass(cfg: ProblemConfig, lower: float, upper: float) -> float:
    x = np.linspace(lower, upper, EDGE_SAMPLES)
    return float(trapezoid(np.asarray(cfg.u0(x), dtype=float), x))


def compute_bounds(cfg: ProblemConfig, floor: KernelFloor) -> AprioriBounds:
    """Evaluate k1, k2, L, L*, k3, eps0, M, T0, Rbar and the front floors.

    eps0 is the midpoint 0.5 * min(eps_bar, 8 mu k3 / (rho k1)); the second
    term is dropped when mu or rho vanishes. T0 takes equality in its upper
    bound. Degenerations are recorded in ``flags`` instead of raising.
    """
    reaction = cfg.reaction
    u0_max, v0_max, u0_slope, v0_slope = _sup_norms(cfg)

    k1 = max(u0_max, reaction.k0)
    k2 = max(v0_max, reaction.theta(k1))
    L = reaction.lipschitz(k1, k2)
    Lstar = reaction.lipschitz_x(k1, k2)
    k3 = max(1.0 / cfg.h0, math.sqrt(L / (2.0 * cfg.d2)), v0_slope / k2)

    flags = []
    if cfg.mu == 0:
        flags.append("mu_zero")
    if cfg.rho == 0:
        flags.append("rho_zero")

    if cfg.mu > 0 and cfg.rho > 0:
        eps0 = EPS0_FACTOR * min(floor.eps_bar, 8.0 * cfg.mu * k3 / (cfg.rho * k1))
    else:
        eps0 = EPS0_FACTOR * floor.eps_bar

    M = 2.0 * cfg.h0 + eps0 / 4.0
    denominator = 4.0 * (2.0 * cfg.mu * k3 + cfg.rho * k1 * M)
    T0 = eps0 / denominator if denominator > 0 else math.inf
    Rbar = cfg.mu * k3 + cfg.rho * k1 * M

    if cfg.rho > 0 and math.isfinite(T0):
        scale = 0.25 * eps0 * floor.delta0 * cfg.rho * math.exp(-(cfg.d1 + L) * T0)
        rho_c0 = scale * _edge_mass(cfg, cfg.h0 - eps0 / 4.0, cfg.h0)
        rho_c0_star = scale * _edge_mass(cfg, -cfg.h0, -cfg.h0 + eps0 / 4.0)
    else:
        rho_c0 = rho_c0_star = 0.0
    if not (rho_c0 > 0 and rho_c0_star > 0):
        flags.append("front_floor_zero")

    for flag in flags:
        logger.warning(f"Degenerate a-priori bounds: {flag}; dependent monitors are informational")

    bounds = AprioriBounds(
        k1=k1, k2=k2, L=L, Lstar=Lstar, k3=k3, eps0=eps0, M=M, T0=T0,
        Rbar=Rbar, rho_c0=rho_c0, rho_c0_star=rho_c0_star,
        h0=cfg.h0, mu=cfg.mu, rho=cfg.rho,
        lipschitz_u0=u0_slope,
        lipschitz_kernel=cfg.kernel.lipschitz_constant(),
        flags=tuple(flags),
    )
    logger.debug(f"A-priori bounds: {bounds.to_dict()}")
    return bounds


def _condition(ok: np.ndarray, t: np.ndarray, worst: float) -> Dict[str, Any]:
    failed = np.flatnonzero(~ok)
    return {
        "holds": bool(failed.size == 0),
        "first_violation": float(t[failed[0]]) if failed.size else None,
        "worst": worst,
    }


def check_gamma_membership(
    traj: Trajectory,
    bounds: AprioriBounds,
    window_end: Optional[float] = None,
) -> Dict[str, Any]:
    """Test the recorded fronts against the admissible set on [0, window_end].

    The window defaults to [0, min(T0, final time)]. Speed ceilings carry 5%
    slack and width conditions 1e-9. With rho = 0 the floors cannot hold and
    the whole report is marked informational.
    """
    data = traj.arrays()
    t_end = float(data["t"][-1])
    if window_end is None:
        window_end = min(bounds.T0, t_end)
    inside = data["t"] <= window_end * (1.0 + 1e-12)
    t = data["t"][inside]
    g, h = data["g"][inside], data["h"][inside]
    gdot, hdot = data["gdot"][inside], data["hdot"][inside]
    width = h - g
    # speeds at t = 0 come from the data alone, the floors concern t > 0
    moving = t > 0
    ceiling = bounds.Rbar * (1.0 + SPEED_SLACK)

    report: Dict[str, Any] = {
        "window": [0.0, float(window_end)],
        "informational": bool(bounds.rho == 0 or not bounds.front_floor_enabled),
        "conditions": {
            "hdot_floor": _condition(
                ~moving | (hdot >= bounds.rho_c0), t, float(np.min(hdot[moving], initial=math.inf))),
            "hdot_ceiling": _condition(hdot <= ceiling, t, float(np.max(hdot, initial=-math.inf))),
            "gdot_floor": _condition(
                ~moving | (-gdot >= bounds.rho_c0_star), t, float(np.min(-gdot[moving], initial=math.inf))),
            "gdot_ceiling": _condition(-gdot <= ceiling, t, float(np.max(-gdot, initial=-math.inf))),
            "width_M": _condition(
                width[-1:] <= bounds.M + WIDTH_SLACK, t[-1:], float(width[-1])),
            "width_linear": _condition(
                width <= 2.0 * bounds.h0 + t * (2.0 * bounds.mu * bounds.k3 + bounds.rho * bounds.k1 * bounds.M)
                + WIDTH_SLACK,
                t, float(np.max(width)),
            ),
            "front_box": _condition(
                (h >= bounds.h0 - WIDTH_SLACK) & (h <= bounds.h0 + bounds.eps0 / 4.0 + WIDTH_SLACK)
                & (g <= -bounds.h0 + WIDTH_SLACK) & (g >= -bounds.h0 - bounds.eps0 / 4.0 - WIDTH_SLACK),
                t, float(np.max(np.maximum(h - bounds.h0, -bounds.h0 - g))),
            ),
        },
    }
    if report["informational"]:
        report["reason"] = ", ".join(bounds.flags) or "front floor disabled"
    return report
