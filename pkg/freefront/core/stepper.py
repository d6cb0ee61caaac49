"""Coupled time marching: per-step Picard iteration on the front pair."""
import logging
from typing import Optional, Tuple

import numpy as np

from ..exceptions import (
    CFLViolatedError,
    ConfigError,
    HorizonUnreachableError,
    InvariantBreachedError,
    PicardDivergedError,
)
from ..interfaces import AprioriBounds, FieldSnapshot, FrontPair, ReferenceGrid, SimState, Trajectory
from ..model import KernelSpec, ProblemConfig
from ..utils.validation import kernel_floor
from .bounds import compute_bounds
from .monitors import final_report
from .solvers import boundary_gradient, step_u_explicit, step_v_implicit, tail_mass
from .transform import max_abs_zeta, phys_of_ref

logger = logging.getLogger(__name__)

AUTO_DT_FACTOR = 0.45
DT_MIN_FACTOR = 1e-12
BOUND_SLACK = 1e-6
ABSOLUTE_SLACK = 1e-13
DIVERGENCE_RUN = 3


def front_speeds(state: SimState, kernel: KernelSpec, bounds: AprioriBounds) -> Tuple[float, float]:
    """(g', h') from the Stefan flux and the nonlocal outflow at both fronts."""
    fp = state.fronts
    grid = ReferenceGrid(len(state.w))
    y = grid.nodes
    width = fp.h - fp.g
    # distances to the fronts, written in y so that both sides mirror exactly
    to_right = 0.5 * width * (1.0 - y)
    to_left = 0.5 * width * (1.0 + y)
    weighted = grid.weights * state.w
    out_right = 0.5 * width * float(np.sum(weighted * tail_mass(kernel, to_right)))
    out_left = 0.5 * width * float(np.sum(weighted * tail_mass(kernel, to_left)))

    hdot = bounds.rho * out_right
    gdot = -bounds.rho * out_left
    if bounds.mu != 0:
        hdot -= bounds.mu * boundary_gradient(state.z, fp, "right")
        gdot -= bounds.mu * boundary_gradient(state.z, fp, "left")
    return gdot, hdot


def select_dt(state: SimState, cfg: ProblemConfig, bounds: AprioriBounds) -> float:
    """0.45 / (d1 + L + max|zeta| / dy) at the current front speeds."""
    dy = ReferenceGrid(cfg.N).spacing
    return AUTO_DT_FACTOR / (cfg.d1 + bounds.L + max_abs_zeta(state.fronts) / dy)


def _check_bounds(w: np.ndarray, z: np.ndarray, fp: FrontPair, t: float, bounds: AprioriBounds) -> None:
    for name, values, ceiling in (("w<=k1", w, bounds.k1), ("z<=k2", z, bounds.k2)):
        i = int(np.argmax(values))
        if values[i] > ceiling * (1.0 + BOUND_SLACK) + ABSOLUTE_SLACK:
            y = ReferenceGrid(len(values)).nodes[i]
            raise InvariantBreachedError(
                name, t, where={"node": i, "x": float(phys_of_ref(fp, y)), "value": float(values[i])}
            )


def advance_step(
    state: SimState,
    cfg: ProblemConfig,
    bounds: AprioriBounds,
    dt: Optional[float] = None,
) -> SimState:
    """Advance one step with a Picard loop on the front pair.

    Iteration 0 moves the fronts with the old speeds (forward Euler); later
    iterations use the mean of old and newly computed speeds. The loop stops
    once successive candidate fronts agree to picard_tol * dt or after
    picard_max passes.

    Raises:
        ConfigError: If picard_max is below 1
        PicardDivergedError: If the residual grows 3 iterations in a row
        InvariantBreachedError: If w or z exceeds its a-priori ceiling
        CFLViolatedError: Propagated from the explicit u-step
    """
    if cfg.picard_max < 1:
        raise ConfigError("must be at least 1", key="picard.max")
    if dt is None:
        dt = select_dt(state, cfg, bounds) if cfg.auto_dt else float(cfg.dt)
    fp = state.fronts
    t_next = state.t + dt
    gdot, hdot = fp.gdot, fp.hdot
    residuals = []
    noticeable = []
    growth = 0

    for k in range(cfg.picard_max):
        candidate = FrontPair(fp.g + dt * gdot, fp.h + dt * hdot)
        w_next = step_u_explicit(
            fp, candidate, state.w, state.z, cfg.reaction, dt,
            d1=cfg.d1, kernel=cfg.kernel, t=state.t,
        )
        z_next = step_v_implicit(
            fp, candidate, state.z, state.w, cfg.reaction, dt,
            d2=cfg.d2, theta=cfg.theta_scheme, t=state.t,
        )
        new_gdot, new_hdot = front_speeds(SimState(t_next, candidate, w_next, z_next), cfg.kernel, bounds)
        gdot, hdot = 0.5 * (fp.gdot + new_gdot), 0.5 * (fp.hdot + new_hdot)

        change = max(abs(fp.g + dt * gdot - candidate.g), abs(fp.h + dt * hdot - candidate.h))
        residuals.append(change / dt)
        noticeable.append(change > 64.0 * np.finfo(float).eps * candidate.width)
        logger.debug(f"t={t_next:.6g} picard {k}: residual {residuals[-1]:.3e}")
        if change <= cfg.picard_tol * dt:
            break
        if len(residuals) > 1 and residuals[-1] > residuals[-2] and noticeable[-1]:
            growth += 1
            if growth >= DIVERGENCE_RUN:
                raise PicardDivergedError(t_next, residuals)
        else:
            growth = 0

    _check_bounds(w_next, z_next, candidate, t_next, bounds)
    # ratios below round-off level say nothing about contraction
    ratios = [residuals[k + 1] / residuals[k] for k in range(len(residuals) - 1) if noticeable[k]]
    return SimState(
        t=t_next,
        fronts=FrontPair(candidate.g, candidate.h, new_gdot, new_hdot),
        w=w_next,
        z=z_next,
        picard_iters=len(residuals),
        residual=residuals[-1],
        contraction=max(ratios, default=0.0),
    )


def initial_state(cfg: ProblemConfig, bounds: AprioriBounds) -> SimState:
    """Initial data sampled on the reference grid, fronts at -h0 and h0."""
    y = ReferenceGrid(cfg.N).nodes
    fp = FrontPair(-cfg.h0, cfg.h0)
    x = phys_of_ref(fp, y)
    w = np.array(cfg.u0(x), dtype=float)
    z = np.array(cfg.v0(x), dtype=float)
    w[0] = w[-1] = z[0] = z[-1] = 0.0
    state = SimState(0.0, fp, w, z)
    gdot, hdot = front_speeds(state, cfg.kernel, bounds)
    state.fronts = FrontPair(fp.g, fp.h, gdot, hdot)
    return state


def snapshot(state: SimState) -> FieldSnapshot:
    y = ReferenceGrid(len(state.w)).nodes
    return FieldSnapshot(
        t=state.t, g=state.fronts.g, h=state.fronts.h,
        y=y, x=phys_of_ref(state.fronts, y), w=state.w.copy(), z=state.z.copy(),
    )


def _fluxes(state: SimState) -> Tuple[float, float]:
    """(v_x at g, -v_x at h); both positive while v is."""
    return (boundary_gradient(state.z, state.fronts, "left"),
            -boundary_gradient(state.z, state.fronts, "right"))


def run(cfg: ProblemConfig, bounds: Optional[AprioriBounds] = None) -> Trajectory:
    """March from t = 0 to T and attach the final monitor report.

    With dt = "auto" the step is re-selected every ``recheck_every`` steps and
    immediately after a stability violation; a fixed dt propagates the
    violation. The last step is shortened to land on T.

    Raises:
        HorizonUnreachableError: If the step underflows 1e-12 * T
        SolverError: Propagated from advance_step
    """
    if bounds is None:
        bounds = compute_bounds(cfg, kernel_floor(cfg.kernel, cfg.h0))

    state = initial_state(cfg, bounds)
    traj = Trajectory()
    left, right = _fluxes(state)
    traj.record(state.t, state.fronts, 0, 0.0, right, left)
    targets = [cfg.T * i / cfg.snapshots for i in range(cfg.snapshots)] if cfg.snapshots > 0 else []
    target = 0
    while target < len(targets) and targets[target] <= state.t:
        target += 1
    traj.snapshots.append(snapshot(state))

    dt_min = DT_MIN_FACTOR * cfg.T
    dt = select_dt(state, cfg, bounds) if cfg.auto_dt else float(cfg.dt)
    since_check = 0
    logger.info(f"Starting run to T={cfg.T} with N={cfg.N}, dt={dt:.6g}")

    while cfg.T - state.t > dt_min:
        if cfg.auto_dt and since_check >= cfg.recheck_every:
            fresh = select_dt(state, cfg, bounds)
            if fresh != dt:
                logger.debug(f"t={state.t:.6g}: dt re-selected {dt:.6g} -> {fresh:.6g}")
            dt = fresh
            since_check = 0
        if dt < dt_min:
            raise HorizonUnreachableError(state.t, dt)

        remaining = cfg.T - state.t
        last = remaining - dt <= dt_min
        step = remaining if last else dt
        try:
            state = advance_step(state, cfg, bounds, step)
        except CFLViolatedError as e:
            if not cfg.auto_dt:
                raise
            dt = min(select_dt(state, cfg, bounds), 0.5 * e.details["limit"])
            since_check = 0
            logger.info(f"t={state.t:.6g}: stability bound hit, restarting step with dt={dt:.6g}")
            continue
        if last:
            state.t = cfg.T
        since_check += 1
        left, right = _fluxes(state)
        traj.record(state.t, state.fronts, state.picard_iters, state.residual, right, left, state.contraction)
        reached = False
        while target < len(targets) and targets[target] <= state.t:
            target += 1
            reached = True
        if reached and state.t < cfg.T:
            traj.snapshots.append(snapshot(state))

    traj.snapshots.append(snapshot(state))
    traj.report = final_report(traj, bounds, cfg)
    logger.info(
        f"Finished run at t={state.t:.6g} after {traj.steps} steps: "
        f"g={state.fronts.g:.6g}, h={state.fronts.h:.6g}"
    )
    return traj


__all__ = [
    "advance_step",
    "front_speeds",
    "initial_state",
    "run",
    "select_dt",
    "snapshot",
]
