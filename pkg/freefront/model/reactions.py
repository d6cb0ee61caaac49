"""Lotka-Volterra reaction pairs and user-supplied reactions."""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..exceptions import NegativeDensityInputError
from .base import ReactionKind, ReactionModel

# Sampling used to estimate Lipschitz constants of custom reactions
LIPSCHITZ_SAMPLES = 501
LIPSCHITZ_SAFETY = 1.1


@dataclass(frozen=True)
class CompetitionModel(ReactionModel):
    """f1 = u(a - u - bv), f2 = v(1 - v - cu)."""
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0
    kind: ReactionKind = field(default=ReactionKind.COMPETITION, init=False)

    def f1(self, t, x, u, v):
        return u * (self.a - u - self.b * v)

    def f2(self, t, x, u, v):
        return v * (1.0 - v - self.c * u)

    @property
    def k0(self) -> float:
        return self.a

    @property
    def r(self) -> float:
        return self.a

    def theta(self, k: float) -> float:
        return 1.0

    def lipschitz(self, c1: float, c2: float) -> float:
        return max(
            self.a + 2.0 * c1 + self.b * c2,   # |df1/du|
            self.b * c1,                       # |df1/dv|
            1.0 + 2.0 * c2 + self.c * c1,      # |df2/dv|
            self.c * c2,                       # |df2/du|
        )

    def lipschitz_x(self, c1: float, c2: float) -> float:
        # autonomous in x
        return 0.0

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "a": self.a, "b": self.b, "c": self.c}


@dataclass(frozen=True)
class PreyPredatorModel(ReactionModel):
    """f1 = u(a - u - bv), f2 = v(1 - v + cu)."""
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0
    kind: ReactionKind = field(default=ReactionKind.PREY_PREDATOR, init=False)

    def f1(self, t, x, u, v):
        return u * (self.a - u - self.b * v)

    def f2(self, t, x, u, v):
        return v * (1.0 - v + self.c * u)

    @property
    def k0(self) -> float:
        return self.a

    @property
    def r(self) -> float:
        return self.a

    def theta(self, k: float) -> float:
        return 1.0 + self.c * k

    def lipschitz(self, c1: float, c2: float) -> float:
        return max(
            self.a + 2.0 * c1 + self.b * c2,
            self.b * c1,
            1.0 + 2.0 * c2 + self.c * c1,
            self.c * c2,
        )

    def lipschitz_x(self, c1: float, c2: float) -> float:
        return 0.0

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "a": self.a, "b": self.b, "c": self.c}


@dataclass(frozen=True)
class CustomReaction(ReactionModel):
    """Reaction pair from vectorised callables (t, x, u, v) -> rate.

    The structural constants k0, r and Theta cannot be derived and must be
    declared. Missing Lipschitz constants are estimated by finite
    differences on a 501 x 501 (u, v) grid with a 1.1 safety factor.
    """
    rate1: Callable = field(repr=False)
    rate2: Callable = field(repr=False)
    declared_k0: float = 1.0
    declared_r: float = 1.0
    theta_fn: Callable[[float], float] = field(default=lambda k: 1.0, repr=False)
    lipschitz_fn: Optional[Callable[[float, float], float]] = field(default=None, repr=False)
    lipschitz_x_fn: Optional[Callable[[float, float], float]] = field(default=None, repr=False)
    kind: ReactionKind = field(default=ReactionKind.CUSTOM, init=False)

    @classmethod
    def zero(cls) -> 'CustomReaction':
        """f1 = f2 = 0; used for pure-transport degenerations."""
        return cls(rate1=_zero_rate, rate2=_zero_rate, theta_fn=_unit_theta,
                   lipschitz_fn=_no_slope, lipschitz_x_fn=_no_slope)

    def f1(self, t, x, u, v):
        return np.broadcast_to(np.asarray(self.rate1(t, x, u, v), dtype=float), np.shape(u))

    def f2(self, t, x, u, v):
        return np.broadcast_to(np.asarray(self.rate2(t, x, u, v), dtype=float), np.shape(v))

    @property
    def k0(self) -> float:
        return self.declared_k0

    @property
    def r(self) -> float:
        return self.declared_r

    def theta(self, k: float) -> float:
        return float(self.theta_fn(k))

    def lipschitz(self, c1: float, c2: float) -> float:
        if self.lipschitz_fn is not None:
            return float(self.lipschitz_fn(c1, c2))
        u = np.linspace(0.0, c1, LIPSCHITZ_SAMPLES)
        v = np.linspace(0.0, c2, LIPSCHITZ_SAMPLES)
        uu, vv = np.meshgrid(u, v, indexing="ij")
        worst = 0.0
        for rate in (self.f1, self.f2):
            values = np.asarray(rate(0.0, 0.0, uu, vv), dtype=float)
            if c1 > 0:
                worst = max(worst, float(np.max(np.abs(np.diff(values, axis=0)))) / (u[1] - u[0]))
            if c2 > 0:
                worst = max(worst, float(np.max(np.abs(np.diff(values, axis=1)))) / (v[1] - v[0]))
        return LIPSCHITZ_SAFETY * worst

    def lipschitz_x(self, c1: float, c2: float) -> float:
        if self.lipschitz_x_fn is not None:
            return float(self.lipschitz_x_fn(c1, c2))
        x = np.linspace(-1.0, 1.0, 11)
        uu, vv, xx = np.meshgrid(
            np.linspace(0.0, c1, 101), np.linspace(0.0, c2, 101), x, indexing="ij"
        )
        worst = 0.0
        for rate in (self.f1, self.f2):
            values = np.asarray(rate(0.0, xx, uu, vv), dtype=float)
            worst = max(worst, float(np.max(np.abs(np.diff(values, axis=2)))) / (x[1] - x[0]))
        return LIPSCHITZ_SAFETY * worst


def _zero_rate(t, x, u, v):
    return np.zeros(np.shape(u))


def _unit_theta(k):
    return 1.0


def _no_slope(c1, c2):
    return 0.0


def evaluate_f(model: ReactionModel, which: int, t, x, u, v):
    """Checked evaluation of f1 (which=1) or f2 (which=2).

    Raises:
        NegativeDensityInputError: If u or v has a negative entry
        ValueError: If which is not 1 or 2
    """
    if np.any(np.asarray(u) < 0) or np.any(np.asarray(v) < 0):
        raise NegativeDensityInputError(float(np.min(u)), float(np.min(v)))
    if which == 1:
        return model.f1(t, x, u, v)
    elif which == 2:
        return model.f2(t, x, u, v)
    raise ValueError(f"which must be 1 or 2, got {which!r}")
