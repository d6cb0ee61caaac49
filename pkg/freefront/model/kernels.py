"""Dispersal kernels with compact support and closed-form tail mass."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import math

import numpy as np
from scipy import integrate
from scipy.special import erf


class KernelFamily(str, Enum):
    UNIFORM = "uniform"
    TENT = "tent"
    TRUNCATED_GAUSSIAN = "truncated_gaussian"
    CUSTOM = "custom"


@dataclass(frozen=True)
class KernelSpec:
    """A symmetric dispersal kernel J supported on [-a, a].

    Built-in families are even by construction. The truncated Gaussian is
    shifted down by its value at the support edge so that it vanishes at
    +-a and stays Lipschitz on the whole line.
    """
    family: KernelFamily
    a: float
    sigma: Optional[float] = None
    profile: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        object.__setattr__(self, "family", KernelFamily(self.family))
        if not self.a > 0:
            raise ValueError(f"Support radius must be positive, got {self.a!r}")
        if self.family is KernelFamily.TRUNCATED_GAUSSIAN:
            if self.sigma is None:
                object.__setattr__(self, "sigma", self.a / 2.0)
            if not self.sigma > 0:
                raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if self.family is KernelFamily.CUSTOM and self.profile is None:
            raise ValueError("Custom kernels need a density profile")

    @property
    def _gauss_shift(self) -> float:
        return math.exp(-self.a ** 2 / (2.0 * self.sigma ** 2))

    @property
    def _gauss_norm(self) -> float:
        # 1 / integral of (exp(-r^2/2s^2) - exp(-a^2/2s^2)) over [-a, a]
        s, a = self.sigma, self.a
        raw = s * math.sqrt(2.0 * math.pi) * math.erf(a / (s * math.sqrt(2.0)))
        return 1.0 / (raw - 2.0 * a * self._gauss_shift)

    def density(self, x) -> np.ndarray:
        """Evaluate J at x (scalar or array)."""
        x = np.asarray(x, dtype=float)
        r = np.abs(x)
        inside = r <= self.a
        if self.family is KernelFamily.UNIFORM:
            return np.where(inside, 0.5 / self.a, 0.0)
        if self.family is KernelFamily.TENT:
            return np.where(inside, (1.0 - r / self.a) / self.a, 0.0)
        if self.family is KernelFamily.TRUNCATED_GAUSSIAN:
            values = self._gauss_norm * (
                np.exp(-r ** 2 / (2.0 * self.sigma ** 2)) - self._gauss_shift
            )
            return np.where(inside, values, 0.0)
        values = np.asarray(self.profile(x), dtype=float)
        return np.where(inside, values, 0.0)

    __call__ = density

    def tail_mass(self, s) -> np.ndarray:
        """Mass of J beyond s, i.e. the integral of J over [s, inf).

        Defined for s >= 0; negative s uses symmetry (1 - tail(-s)).
        """
        s = np.asarray(s, dtype=float)
        neg = s < 0
        r = np.minimum(np.abs(s), self.a)
        a = self.a
        if self.family is KernelFamily.UNIFORM:
            tail = (a - r) / (2.0 * a)
        elif self.family is KernelFamily.TENT:
            tail = (a - r) ** 2 / (2.0 * a ** 2)
        elif self.family is KernelFamily.TRUNCATED_GAUSSIAN:
            sig = self.sigma
            root2 = math.sqrt(2.0)
            gauss = sig * math.sqrt(math.pi / 2.0) * (
                math.erf(a / (sig * root2)) - erf(r / (sig * root2))
            )
            tail = self._gauss_norm * (gauss - self._gauss_shift * (a - r))
        else:
            tail = np.vectorize(self._custom_tail, otypes=[float])(r)
        tail = np.maximum(tail, 0.0)
        return np.where(neg, 1.0 - tail, tail)

    def _custom_tail(self, s: float) -> float:
        if s >= self.a:
            return 0.0
        value, _ = integrate.quad(
            lambda r: float(self.density(r)), s, self.a, limit=200
        )
        return value

    @property
    def is_lipschitz(self) -> bool:
        """Whether J is Lipschitz on the whole real line."""
        if self.family in (KernelFamily.TENT, KernelFamily.TRUNCATED_GAUSSIAN):
            return True
        if self.family is KernelFamily.UNIFORM:
            return False
        # a custom profile must vanish at the support edge
        edge = self.profile(np.array([-self.a, self.a]))
        return bool(np.all(np.abs(edge) < 1e-12))

    def lipschitz_constant(self) -> float:
        """L(J); infinite for families with a jump at the support edge."""
        if self.family is KernelFamily.TENT:
            return 1.0 / self.a ** 2
        if self.family is KernelFamily.TRUNCATED_GAUSSIAN:
            peak = min(self.sigma, self.a)
            slope = peak / self.sigma ** 2 * math.exp(-peak ** 2 / (2.0 * self.sigma ** 2))
            return self._gauss_norm * slope
        if not self.is_lipschitz:
            return math.inf
        x = np.linspace(-self.a, self.a, 20001)
        return float(np.max(np.abs(np.diff(self.density(x))) / np.diff(x)))

    def to_dict(self) -> dict:
        data = {"family": self.family.value, "a": self.a}
        if self.sigma is not None:
            data["sigma"] = self.sigma
        return data
