"""Validation of the standing hypotheses on kernels, reactions and data."""
import logging
from typing import Any, Dict

import numpy as np
from scipy import integrate

from ..exceptions import (
    ConfigError,
    MassNotUnitError,
    NegativeValueError,
    NonLipschitzKernelError,
    NotSymmetricError,
    SignConditionViolatedError,
    ZeroAtOriginError,
    ZeroLineViolatedError,
)
from ..interfaces import KernelFloor, ReferenceGrid
from ..model import KernelSpec, ProblemConfig, ReactionKind, ReactionModel

logger = logging.getLogger(__name__)

MASS_TOLERANCE = 1e-10
FLOOR_SAMPLES = 1001
FLOOR_FACTOR = 0.99
DENSITY_SAMPLES = 101
COARSE_SAMPLES = 11
THETA_SLACK = 1e-6
ZERO_TOLERANCE = 1e-12


def validate_kernel(kernel: KernelSpec, h0: float, allow_nonlipschitz: bool = False) -> KernelFloor:
    """Check condition (J) and return a deterministic kernel floor.

    Args:
        kernel: Kernel to validate
        h0: Initial half-width of the habitat
        allow_nonlipschitz: Admit kernels with a jump (uniform family)

    Returns:
        KernelFloor with eps_bar = min(a/2, h0/8) and delta0 = 0.99 * min J
        over a 1001-point grid on [-eps_bar, eps_bar]

    Raises:
        ZeroAtOriginError, NegativeValueError, NotSymmetricError,
        MassNotUnitError, NonLipschitzKernelError
    """
    center = float(kernel.density(0.0))
    if not center > 0:
        raise ZeroAtOriginError(center)

    x = np.linspace(0.0, 1.5 * kernel.a, 3001)
    right = kernel.density(x)
    left = kernel.density(-x)
    negative = np.flatnonzero(np.minimum(left, right) < 0)
    if negative.size:
        i = int(negative[0])
        bad_x, bad_value = (x[i], right[i]) if right[i] < 0 else (-x[i], left[i])
        raise NegativeValueError(float(bad_x), float(bad_value))
    asymmetric = np.flatnonzero(right - left != 0)
    if asymmetric.size:
        i = int(asymmetric[0])
        raise NotSymmetricError(float(x[i]), float(left[i]), float(right[i]))

    mass, _ = integrate.quad(
        lambda r: float(kernel.density(r)), -kernel.a, kernel.a,
        points=[0.0], epsabs=1e-14, epsrel=1e-13, limit=400,
    )
    if abs(mass - 1.0) > MASS_TOLERANCE:
        raise MassNotUnitError(mass, MASS_TOLERANCE)

    if not kernel.is_lipschitz:
        if not allow_nonlipschitz:
            raise NonLipschitzKernelError(kernel.family.value)
        logger.warning(f"Admitting non-Lipschitz kernel family '{kernel.family.value}'")

    return kernel_floor(kernel, h0)


def kernel_floor(kernel: KernelSpec, h0: float) -> KernelFloor:
    """eps_bar = min(a/2, h0/8) and 0.99 times the sampled minimum of J on [-eps_bar, eps_bar]."""
    eps_bar = min(kernel.a / 2.0, h0 / 8.0)
    samples = np.linspace(-eps_bar, eps_bar, FLOOR_SAMPLES)
    delta0 = FLOOR_FACTOR * float(np.min(kernel.density(samples)))
    return KernelFloor(eps_bar=eps_bar, delta0=delta0)


def validate_reaction(model: ReactionModel, k1_probe: float) -> Dict[str, Any]:
    """Sample the hypotheses (f)-(f2) and report (f4) for a reaction model.

    (u, v) are sampled on a 101 x 101 grid over [0, 2 k1_probe]^2 (shifted
    above k0 or Theta where a condition requires it) and (t, x) on an
    11 x 11 grid.

    Returns:
        Report with one entry per condition plus the structural constants

    Raises:
        ZeroLineViolatedError: If f1(t,x,0,v) or f2(t,x,u,0) is nonzero
        SignConditionViolatedError: If (f1) or (f2) fails at a sample
    """
    top = 2.0 * k1_probe
    t = np.linspace(0.0, 5.0, COARSE_SAMPLES)
    x = np.linspace(-5.0, 5.0, COARSE_SAMPLES)
    dens = np.linspace(0.0, top, DENSITY_SAMPLES)
    k0, r = model.k0, model.r

    def grid(us, vs):
        return np.meshgrid(t, x, us, vs, indexing="ij")

    def first(mask, tt, xx, uu, vv, values):
        i = np.unravel_index(int(np.argmax(mask)), mask.shape)
        sample = {"t": float(tt[i]), "x": float(xx[i]), "u": float(uu[i]), "v": float(vv[i])}
        return sample, float(values[i])

    zeros = np.zeros(1)
    tt, xx, uu, vv = grid(zeros, dens)
    values = model.f1(tt, xx, uu, vv)
    bad = np.abs(values) > ZERO_TOLERANCE
    if bad.any():
        raise ZeroLineViolatedError(1, *first(bad, tt, xx, uu, vv, values))
    tt, xx, uu, vv = grid(dens, zeros)
    values = model.f2(tt, xx, uu, vv)
    bad = np.abs(values) > ZERO_TOLERANCE
    if bad.any():
        raise ZeroLineViolatedError(2, *first(bad, tt, xx, uu, vv, values))

    above = np.linspace(k0, max(top, 3.0 * k0), DENSITY_SAMPLES)[1:]
    tt, xx, uu, vv = grid(above, dens)
    values = model.f1(tt, xx, uu, vv)
    bad = values >= 0
    if bad.any():
        raise SignConditionViolatedError("f1<0 for u>k0", *first(bad, tt, xx, uu, vv, values))

    below = np.linspace(0.0, k0, DENSITY_SAMPLES)[1:]
    tt, xx, uu, vv = grid(below, dens)
    values = model.f1(tt, xx, uu, vv)
    bad = values > r * uu + ZERO_TOLERANCE
    if bad.any():
        raise SignConditionViolatedError("f1<=r*u for 0<u<=k0", *first(bad, tt, xx, uu, vv, values))

    theta = model.theta(k1_probe)
    start = theta + THETA_SLACK * theta
    crowded = np.linspace(start, start + max(top, theta), DENSITY_SAMPLES)
    tt, xx, uu, vv = grid(np.linspace(0.0, k1_probe, DENSITY_SAMPLES), crowded)
    values = model.f2(tt, xx, uu, vv)
    bad = values >= 0
    if bad.any():
        raise SignConditionViolatedError("f2<0 for v>=Theta(k)", *first(bad, tt, xx, uu, vv, values))

    # (f4): variation of f2 along t, informational
    tt, xx, uu, vv = grid(dens[::10], dens[::10])
    values = model.f2(tt, xx, uu, vv)
    time_variation = float(np.max(np.abs(np.diff(values, axis=0)))) if values.shape[0] > 1 else 0.0

    report = {
        "kind": model.kind.value,
        "zero_lines": True,
        "f1_negative_above_k0": True,
        "f1_below_r_u": True,
        "f2_negative_above_theta": True,
        "f2_time_variation": time_variation,
        "constants": {
            "k0": k0,
            "r": r,
            "theta": theta,
            "L": model.lipschitz(k1_probe, theta),
            "Lstar": model.lipschitz_x(k1_probe, theta),
        },
    }
    if model.kind in (ReactionKind.COMPETITION, ReactionKind.PREY_PREDATOR):
        expected_theta = 1.0 if model.kind is ReactionKind.COMPETITION else 1.0 + model.c * k1_probe
        report["closed_form_constants"] = bool(
            k0 == model.a and r == model.a and theta == expected_theta
        )
    return report


def validate_problem(cfg: ProblemConfig) -> None:
    """Check coefficients, controls and the compatibility of the initial data.

    Raises:
        ConfigError: Naming the offending key
    """
    for key in ("d1", "d2", "h0", "T"):
        if not getattr(cfg, key) > 0:
            raise ConfigError(f"must be positive, got {getattr(cfg, key)!r}", key=key)
    for key in ("mu", "rho"):
        if getattr(cfg, key) < 0:
            raise ConfigError(f"must be nonnegative, got {getattr(cfg, key)!r}", key=key)
    if cfg.N < 5 or cfg.N % 2 == 0:
        raise ConfigError(f"must be odd and at least 5, got {cfg.N}", key="grid.N")
    if not 0.5 <= cfg.theta_scheme <= 1.0:
        raise ConfigError(f"must lie in [1/2, 1], got {cfg.theta_scheme!r}", key="theta")
    if not cfg.auto_dt and not float(cfg.dt) > 0:
        raise ConfigError(f"must be positive or 'auto', got {cfg.dt!r}", key="grid.dt")
    if cfg.picard_max < 1:
        raise ConfigError("must be at least 1", key="picard.max")

    x = cfg.h0 * ReferenceGrid(cfg.N).nodes
    for name, profile in (("u0", cfg.u0), ("v0", cfg.v0)):
        values = np.asarray(profile(x), dtype=float)
        scale = max(1.0, float(np.max(np.abs(values))))
        if abs(values[0]) > ZERO_TOLERANCE * scale or abs(values[-1]) > ZERO_TOLERANCE * scale:
            raise ConfigError("must vanish at x = -h0 and x = h0", key=f"init.{name}")
        if np.any(values[1:-1] <= 0):
            raise ConfigError("must be positive inside (-h0, h0)", key=f"init.{name}")
        if not np.all(np.isfinite(np.diff(values) / np.diff(x))):
            raise ConfigError("must be Lipschitz", key=f"init.{name}")
