"""Problem instances: coefficients, initial data, discretisation controls."""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, Union

import math

import numpy as np

from .base import ReactionModel
from .kernels import KernelSpec

AUTO_DT = "auto"


class ProfileShape(str, Enum):
    BUMP = "bump"
    PARABOLA = "parabola"


@dataclass(frozen=True)
class InitialProfile:
    """Named initial density on [-h0, h0], zero outside."""
    shape: ProfileShape
    amplitude: float
    h0: float

    def __post_init__(self):
        object.__setattr__(self, "shape", ProfileShape(self.shape))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) <= self.h0
        if self.shape is ProfileShape.BUMP:
            values = self.amplitude * np.cos(math.pi * x / (2.0 * self.h0))
        else:
            values = self.amplitude * (1.0 - (x / self.h0) ** 2)
        return np.where(inside, values, 0.0)


@dataclass(frozen=True)
class ProblemConfig:
    """Full problem instance for the free-boundary system."""
    d1: float
    d2: float
    mu: float
    rho: float
    h0: float
    u0: Callable = field(repr=False)
    v0: Callable = field(repr=False)
    kernel: KernelSpec
    reaction: ReactionModel
    T: float
    N: int = 201
    dt: Union[float, str] = AUTO_DT
    picard_tol: float = 1e-10
    picard_max: int = 8
    theta_scheme: float = 1.0
    recheck_every: int = 20
    snapshots: int = 200
    allow_nonlipschitz_kernel: bool = False

    @property
    def auto_dt(self) -> bool:
        return isinstance(self.dt, str) and self.dt == AUTO_DT

    def with_updates(self, **changes) -> 'ProblemConfig':
        """Copy with some fields replaced; named profiles follow a new h0."""
        if "h0" in changes:
            h0 = changes["h0"]
            for name in ("u0", "v0"):
                profile = changes.get(name, getattr(self, name))
                if isinstance(profile, InitialProfile):
                    changes[name] = replace(profile, h0=h0)
        return replace(self, **changes)

    def to_mapping(self) -> Dict[str, str]:
        """Flat key/value echo, re-parsable by utils.config."""
        mapping = {
            "d1": _fmt(self.d1),
            "d2": _fmt(self.d2),
            "mu": _fmt(self.mu),
            "rho": _fmt(self.rho),
            "h0": _fmt(self.h0),
            "T": _fmt(self.T),
            "kernel.family": self.kernel.family.value,
            "kernel.a": _fmt(self.kernel.a),
        }
        if self.kernel.sigma is not None:
            mapping["kernel.sigma"] = _fmt(self.kernel.sigma)
        mapping["kernel.allow_nonlipschitz"] = "true" if self.allow_nonlipschitz_kernel else "false"
        mapping["reaction.kind"] = self.reaction.kind.value
        for key in ("a", "b", "c"):
            if hasattr(self.reaction, key):
                mapping[f"reaction.{key}"] = _fmt(getattr(self.reaction, key))
        mapping["grid.N"] = str(self.N)
        mapping["grid.dt"] = self.dt if self.auto_dt else _fmt(self.dt)
        mapping["grid.recheck_every"] = str(self.recheck_every)
        for name in ("u0", "v0"):
            profile = getattr(self, name)
            if isinstance(profile, InitialProfile):
                mapping[f"init.{name}"] = profile.shape.value
                mapping[f"init.{name}_amp"] = _fmt(profile.amplitude)
            else:
                mapping[f"init.{name}"] = "custom"
        mapping["picard.tol"] = _fmt(self.picard_tol)
        mapping["picard.max"] = str(self.picard_max)
        mapping["theta"] = _fmt(self.theta_scheme)
        mapping["output.snapshots"] = str(self.snapshots)
        return mapping


def _fmt(value: float) -> str:
    return format(float(value), ".17g")
