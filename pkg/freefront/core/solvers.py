"""Single-equation steppers on the reference grid.

The u-equation is advanced explicitly (bounded nonlocal operator), the
v-equation by a theta-scheme with a tridiagonal solve.
"""
import logging
from typing import Tuple

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from ..exceptions import CFLViolatedError, NegativeOvershootError, SingularSystemError
from ..interfaces import FrontPair, ReferenceGrid
from ..model import KernelSpec, ReactionModel
from .transform import phys_of_ref, xi, zeta

logger = logging.getLogger(__name__)

CLAMP_THRESHOLD = 1e-13
ABORT_THRESHOLD = 1e-10
STABILITY_FACTOR = 0.9
PECLET_LIMIT = 2.0


def tail_mass(kernel: KernelSpec, s):
    """Probability that a jump from depth s inside the habitat lands outside."""
    return kernel.tail_mass(s)


def kernel_matrix(fp: FrontPair, kernel: KernelSpec, grid: ReferenceGrid) -> np.ndarray:
    """J(x_i - x_j) at the physical images of the reference nodes."""
    x = phys_of_ref(fp, grid.nodes)
    return kernel.density(x[:, None] - x[None, :])


def nonlocal_operator(fp: FrontPair, w: np.ndarray, kernel: KernelSpec) -> np.ndarray:
    """Trapezoid approximation of the integral of J(x_i - x') u(x') over [g, h]."""
    grid = ReferenceGrid(len(w))
    K = kernel_matrix(fp, kernel, grid)
    return 0.5 * (fp.h - fp.g) * (K @ (grid.weights * w))


def motion(fp: FrontPair, fp_next: FrontPair, dt: float) -> Tuple[float, float]:
    """Front speeds implied by the displacement over one step."""
    return (fp_next.g - fp.g) / dt, (fp_next.h - fp.h) / dt


def explicit_stability_limit(d1: float, lipschitz: float, max_zeta: float, dy: float) -> float:
    """Largest dt keeping the explicit u-step monotone."""
    return STABILITY_FACTOR / (d1 + lipschitz + max_zeta / dy)


def _clamp(values: np.ndarray, name: str) -> np.ndarray:
    lowest = int(np.argmin(values))
    if values[lowest] < -ABORT_THRESHOLD:
        raise NegativeOvershootError(name, lowest, float(values[lowest]))
    tiny = (values < 0) & (values >= -CLAMP_THRESHOLD)
    if tiny.any():
        logger.debug(f"Clamping {int(tiny.sum())} round-off negatives in {name}")
        values[tiny] = 0.0
    return values


def step_u_explicit(
    fp: FrontPair,
    fp_next: FrontPair,
    w: np.ndarray,
    z: np.ndarray,
    reaction: ReactionModel,
    dt: float,
    *,
    d1: float,
    kernel: KernelSpec,
    t: float = 0.0,
) -> np.ndarray:
    """One forward-Euler step of the transformed nonlocal equation.

    w_t = d1 (J*u - w) + f1 + zeta w_y, with zeta built from the old front
    positions and the grid displacement, and w_y upwinded.

    Raises:
        CFLViolatedError: If dt exceeds the monotonicity bound
        NegativeOvershootError: If a node falls below -1e-10
    """
    grid = ReferenceGrid(len(w))
    y, dy = grid.nodes, grid.spacing
    gdot, hdot = motion(fp, fp_next, dt)
    moving = FrontPair(fp.g, fp.h, gdot, hdot)
    c = zeta(moving, y)

    lipschitz = reaction.lipschitz(max(float(w.max()), 0.0), max(float(z.max()), 0.0))
    limit = explicit_stability_limit(d1, lipschitz, float(np.max(np.abs(c))), dy)
    if dt > limit * (1.0 + 1e-12):
        raise CFLViolatedError(dt, limit, t)

    x = phys_of_ref(fp, y)
    spread = nonlocal_operator(fp, w, kernel)

    slope = np.zeros_like(w)
    forward = (w[2:] - w[1:-1]) / dy
    backward = (w[1:-1] - w[:-2]) / dy
    inner = c[1:-1]
    slope[1:-1] = np.where(inner > 0, forward, backward)

    w_next = w + dt * (d1 * (spread - w) + reaction.f1(t, x, w, z) + c * slope)
    w_next[0] = w_next[-1] = 0.0
    return _clamp(w_next, "w")


def step_v_implicit(
    fp: FrontPair,
    fp_next: FrontPair,
    z: np.ndarray,
    w: np.ndarray,
    reaction: ReactionModel,
    dt: float,
    *,
    d2: float,
    theta: float = 1.0,
    t: float = 0.0,
) -> np.ndarray:
    """Theta-scheme step of z_t = d2 xi z_yy + zeta z_y + f2 with z(+-1) = 0.

    Diffusion and advection are frozen at the time-theta front pair; the
    reaction is explicit at the old level. The advection term is central
    unless the cell Peclet number exceeds 2, where it falls back to upwind.

    Raises:
        SingularSystemError: If the tridiagonal solve fails
        NegativeOvershootError: If a node falls below -1e-10
    """
    grid = ReferenceGrid(len(z))
    y, dy = grid.nodes, grid.spacing
    gdot, hdot = motion(fp, fp_next, dt)
    mid = FrontPair(
        (1.0 - theta) * fp.g + theta * fp_next.g,
        (1.0 - theta) * fp.h + theta * fp_next.h,
        gdot,
        hdot,
    )
    diffusion = d2 * xi(mid)
    c = zeta(mid, y)[1:-1]

    upwind = np.abs(c) * dy / diffusion > PECLET_LIMIT
    base = diffusion / dy ** 2
    lower = np.where(upwind, base + np.maximum(-c, 0.0) / dy, base - c / (2.0 * dy))
    upper = np.where(upwind, base + np.maximum(c, 0.0) / dy, base + c / (2.0 * dy))
    diag = np.where(upwind, -2.0 * base - np.abs(c) / dy, -2.0 * base)

    applied = np.zeros_like(z)
    applied[1:-1] = lower * z[:-2] + diag * z[1:-1] + upper * z[2:]

    x = phys_of_ref(fp, y)
    rhs = z + (1.0 - theta) * dt * applied + dt * reaction.f2(t, x, w, z)
    rhs[0] = rhs[-1] = 0.0

    n = len(z)
    banded = np.zeros((3, n))
    banded[1, :] = 1.0
    banded[1, 1:-1] -= theta * dt * diag
    banded[0, 2:] = -theta * dt * upper
    banded[2, :-2] = -theta * dt * lower
    try:
        z_next = solve_banded((1, 1), banded, rhs)
    except (LinAlgError, ValueError) as e:
        raise SingularSystemError(f"Tridiagonal solve failed: {e}", details={"dt": dt})
    if not np.all(np.isfinite(z_next)):
        raise SingularSystemError("Tridiagonal solve returned non-finite values", details={"dt": dt})
    z_next[0] = z_next[-1] = 0.0
    return _clamp(z_next, "z")


def boundary_gradient(z: np.ndarray, fp: FrontPair, side: str) -> float:
    """Physical v_x at a front from a one-sided second-order difference.

    Uses v_x = 2 z_y / (h - g) at y = +-1.
    """
    if len(z) < 5:
        raise ValueError(f"Need at least 5 nodes, got {len(z)}")
    dy = 2.0 / (len(z) - 1)
    if side == "right":
        dz = (3.0 * z[-1] - 4.0 * z[-2] + z[-3]) / (2.0 * dy)
    elif side == "left":
        dz = (-3.0 * z[0] + 4.0 * z[1] - z[2]) / (2.0 * dy)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return float(2.0 * dz / (fp.h - fp.g))
