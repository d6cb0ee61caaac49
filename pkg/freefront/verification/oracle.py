"""Independent fine-grid solver in physical coordinates.

Fields live on a fixed Eulerian window [-X, X] and are zero outside the
current habitat; both equations and both fronts are advanced by plain
forward Euler. Only kernel and reaction evaluation are shared with the
front-fixing solver.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..exceptions import WindowExceededError
from ..interfaces import AprioriBounds, FieldSnapshot, FrontPair, Trajectory
from ..model import ProblemConfig
from ..core.transform import ref_of_phys

logger = logging.getLogger(__name__)

WINDOW_MARGIN = 1.2
DT_SAFETY = 0.4
EDGE_CELLS = 2


@dataclass(frozen=True)
class OracleConfig:
    """Eulerian window half-width, node count and explicit step."""
    X: float
    Nx: int
    dt_oracle: float

    @property
    def spacing(self) -> float:
        return 2.0 * self.X / (self.Nx - 1)

    @classmethod
    def for_problem(
        cls,
        cfg: ProblemConfig,
        bounds: AprioriBounds,
        Nx: int = 2001,
        X: Optional[float] = None,
    ) -> 'OracleConfig':
        """Size the window from the a-priori growth bound with a 20% margin.

        Without nonlocal growth (rho = 0) the speed ceiling 3 mu k3 bounds
        the fronts instead; with frozen fronts the window is 1.2 h0.
        """
        if X is None:
            if cfg.mu == 0 and cfg.rho == 0:
                X = WINDOW_MARGIN * cfg.h0
            elif cfg.rho == 0:
                X = WINDOW_MARGIN * (cfg.h0 + 3.0 * cfg.mu * bounds.k3 * cfg.T)
            else:
                X = WINDOW_MARGIN * 0.5 * float(bounds.growth_bound(cfg.T))
        dx = 2.0 * X / (Nx - 1)
        dt = DT_SAFETY * min(dx ** 2 / (2.0 * cfg.d2), 1.0 / (cfg.d1 + bounds.L))
        return cls(X=X, Nx=Nx, dt_oracle=dt)

    def to_dict(self) -> dict:
        return {"X": self.X, "Nx": self.Nx, "dt_oracle": self.dt_oracle}


def _active(xs: np.ndarray, g: float, h: float) -> Tuple[int, int]:
    """Index range [lo, hi) of nodes strictly inside (g, h)."""
    lo = int(np.searchsorted(xs, g, side="right"))
    hi = int(np.searchsorted(xs, h, side="left"))
    return lo, hi


def _front_slope(values: np.ndarray, gap: float, dx: float) -> float:
    """Derivative toward the front of the quadratic through (front, 0) and two nodes.

    ``values`` lists nodal values moving away from the front, ``gap`` is the
    distance from the front to values[0]. Slaved nodes closer than dx/2 are
    skipped.
    """
    if gap < 0.5 * dx:
        values, gap = values[1:], gap + dx
    s1, s2 = gap, gap + dx
    return values[0] * s2 / (s1 * dx) - values[1] * s1 / (s2 * dx)


def oracle_run(cfg: ProblemConfig, ocfg: OracleConfig) -> Trajectory:
    """Solve the free-boundary system on the Eulerian window.

    Raises:
        WindowExceededError: If a front comes within two cells of the window edge
    """
    xs = np.linspace(-ocfg.X, ocfg.X, ocfg.Nx)
    dx = ocfg.spacing
    if cfg.h0 >= ocfg.X - EDGE_CELLS * dx:
        raise WindowExceededError(0.0, -cfg.h0, cfg.h0, ocfg.X)
    K = cfg.kernel.density(xs[:, None] - xs[None, :])
    reaction, kernel = cfg.reaction, cfg.kernel

    g, h, t = -cfg.h0, cfg.h0, 0.0
    inside = np.abs(xs) < cfg.h0
    u = np.where(inside, np.asarray(cfg.u0(xs), dtype=float), 0.0)
    v = np.where(inside, np.asarray(cfg.v0(xs), dtype=float), 0.0)

    def speeds(u, v, g, h):
        lo, hi = _active(xs, g, h)
        x = xs[lo:hi]
        out_right = dx * float(np.sum(kernel.tail_mass(h - x) * u[lo:hi]))
        out_left = dx * float(np.sum(kernel.tail_mass(x - g) * u[lo:hi]))
        # -v_x at h and +v_x at g, both from interior values
        slope_h = _front_slope(v[lo:hi][::-1], h - x[-1], dx) if hi - lo >= 3 else 0.0
        slope_g = _front_slope(v[lo:hi], x[0] - g, dx) if hi - lo >= 3 else 0.0
        return -cfg.mu * slope_g - cfg.rho * out_left, cfg.mu * slope_h + cfg.rho * out_right, slope_g, slope_h

    def snap(t, g, h, u, v):
        lo, hi = _active(xs, g, h)
        x = np.concatenate(([g], xs[lo:hi], [h]))
        fp = FrontPair(g, h)
        return FieldSnapshot(
            t=t, g=g, h=h, y=ref_of_phys(fp, x), x=x,
            w=np.concatenate(([0.0], u[lo:hi], [0.0])),
            z=np.concatenate(([0.0], v[lo:hi], [0.0])),
        )

    traj = Trajectory()
    gdot, hdot, flux_left, flux = speeds(u, v, g, h)
    traj.record(t, FrontPair(g, h, gdot, hdot), 0, 0.0, flux, flux_left)
    traj.snapshots.append(snap(t, g, h, u, v))
    targets = [cfg.T * i / cfg.snapshots for i in range(1, cfg.snapshots)]
    target = 0

    steps = max(1, math.ceil(cfg.T / ocfg.dt_oracle - 1e-9))
    dt = cfg.T / steps
    logger.info(f"Oracle run: X={ocfg.X:.6g}, Nx={ocfg.Nx}, {steps} steps of {dt:.3g}")

    for n in range(1, steps + 1):
        lo, hi = _active(xs, g, h)
        x = xs[lo:hi]
        uu, vv = u[lo:hi], v[lo:hi]

        spread = dx * (K[lo:hi, lo:hi] @ uu)
        u_new = uu + dt * (cfg.d1 * (spread - uu) + reaction.f1(t, x, uu, vv))

        lap = np.zeros_like(vv)
        padded = np.concatenate(([0.0], vv, [0.0]))
        lap[:] = (padded[2:] - 2.0 * vv + padded[:-2]) / dx ** 2
        # Shortley-Weller rows next to the off-grid fronts
        left_gap, right_gap = x[0] - g, h - x[-1]
        if right_gap >= 0.5 * dx and vv.size > 1:
            lap[-1] = 2.0 * ((0.0 - vv[-1]) / right_gap - (vv[-1] - vv[-2]) / dx) / (right_gap + dx)
        if left_gap >= 0.5 * dx and vv.size > 1:
            lap[0] = 2.0 * ((vv[1] - vv[0]) / dx - (vv[0] - 0.0) / left_gap) / (left_gap + dx)
        v_new = vv + dt * (cfg.d2 * lap + reaction.f2(t, x, uu, vv))
        if right_gap < 0.5 * dx and vv.size > 1:
            v_new[-1] = v_new[-2] * right_gap / (right_gap + dx)
        if left_gap < 0.5 * dx and vv.size > 1:
            v_new[0] = v_new[1] * left_gap / (left_gap + dx)

        g, h = g + dt * gdot, h + dt * hdot
        t = cfg.T if n == steps else n * dt
        if h >= ocfg.X - EDGE_CELLS * dx or g <= -ocfg.X + EDGE_CELLS * dx:
            raise WindowExceededError(t, g, h, ocfg.X)

        u[lo:hi], v[lo:hi] = np.maximum(u_new, 0.0), np.maximum(v_new, 0.0)
        new_lo, new_hi = _active(xs, g, h)
        u[:new_lo] = v[:new_lo] = 0.0
        u[new_hi:] = v[new_hi:] = 0.0

        gdot, hdot, flux_left, flux = speeds(u, v, g, h)
        traj.record(t, FrontPair(g, h, gdot, hdot), 0, 0.0, flux, flux_left)
        reached = False
        while target < len(targets) and targets[target] <= t:
            target += 1
            reached = True
        if reached and n < steps:
            traj.snapshots.append(snap(t, g, h, u, v))

    traj.snapshots.append(snap(t, g, h, u, v))
    logger.info(f"Oracle finished: g={g:.6g}, h={h:.6g}")
    return traj


def compare_trajectories(main: Trajectory, oracle: Trajectory, h0: float, k1: float, k2: float) -> dict:
    """Front and field discrepancies at the final time.

    Oracle fields are interpolated onto the main solver's physical nodes.
    """
    a, b = main.final, oracle.final
    dw = float(np.max(np.abs(a.w - np.interp(a.x, b.x, b.w))))
    dz = float(np.max(np.abs(a.z - np.interp(a.x, b.x, b.z))))
    return {
        "t": a.t,
        "h_main": a.h, "h_oracle": b.h,
        "g_main": a.g, "g_oracle": b.g,
        "dh_rel": abs(a.h - b.h) / h0,
        "dg_rel": abs(a.g - b.g) / h0,
        "du_rel": dw / k1,
        "dv_rel": dz / k2,
    }
