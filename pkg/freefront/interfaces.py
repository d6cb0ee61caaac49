from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import math

import numpy as np


@dataclass(frozen=True)
class FrontPair:
    """Positions and speeds of the two free boundaries at one time level."""
    g: float
    h: float
    gdot: float = 0.0
    hdot: float = 0.0

    @property
    def width(self) -> float:
        return self.h - self.g

    def to_dict(self) -> Dict[str, float]:
        return {"g": self.g, "h": self.h, "gdot": self.gdot, "hdot": self.hdot}


@dataclass(frozen=True)
class ReferenceGrid:
    """Uniform odd-sized grid on the reference interval [-1, 1]."""
    N: int

    def __post_init__(self):
        if self.N < 5 or self.N % 2 == 0:
            raise ValueError(f"Grid size must be odd and at least 5, got {self.N}")

    @property
    def nodes(self) -> np.ndarray:
        # integer numerators keep y_0 = -1, y_mid = 0, y_last = 1 and y odd exactly
        j = np.arange(self.N)
        return (2 * j - (self.N - 1)) / (self.N - 1)

    @property
    def spacing(self) -> float:
        return 2.0 / (self.N - 1)

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid weights on the reference grid."""
        w = np.full(self.N, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w


@dataclass(frozen=True)
class KernelFloor:
    """Constants with J(r) > delta0 whenever |r| < eps_bar."""
    eps_bar: float
    delta0: float

    def to_dict(self) -> Dict[str, float]:
        return {"eps_bar": self.eps_bar, "delta0": self.delta0}


@dataclass(frozen=True)
class AprioriBounds:
    """A-priori constants derived from the data before any solve."""
    k1: float
    k2: float
    L: float
    Lstar: float
    k3: float
    eps0: float
    M: float
    T0: float
    Rbar: float
    rho_c0: float
    rho_c0_star: float
    h0: float
    mu: float
    rho: float
    lipschitz_u0: float = 0.0
    lipschitz_kernel: float = 0.0
    flags: Tuple[str, ...] = ()

    def R(self, t) -> float:
        """Speed ceiling R(t) = mu k3 + 2(h0 rho k1 + mu k3) e^{rho k1 t}."""
        mk = self.mu * self.k3
        return mk + 2.0 * (self.h0 * self.rho * self.k1 + mk) * np.exp(self.rho * self.k1 * np.asarray(t))

    def growth_bound(self, t) -> float:
        """Width ceiling 2[h0 + mu k3/(rho k1)] e^{rho k1 t}; infinite when rho k1 = 0."""
        if self.rho * self.k1 <= 0:
            return np.full(np.shape(t), math.inf) if np.ndim(t) else math.inf
        rk = self.rho * self.k1
        return 2.0 * (self.h0 + self.mu * self.k3 / rk) * np.exp(rk * np.asarray(t))

    @property
    def front_floor_enabled(self) -> bool:
        return self.rho_c0 > 0 and self.rho_c0_star > 0

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "k1": self.k1, "k2": self.k2, "L": self.L, "Lstar": self.Lstar,
            "k3": self.k3, "eps0": self.eps0, "M": self.M, "T0": self.T0,
            "Rbar": self.Rbar, "rho_c0": self.rho_c0, "rho_c0_star": self.rho_c0_star,
            "R0": float(self.R(0.0)),
            "lipschitz_u0": self.lipschitz_u0, "lipschitz_kernel": self.lipschitz_kernel,
        }
        # non-finite constants are "not computed"
        data = {k: (v if math.isfinite(v) else None) for k, v in data.items()}
        data["flags"] = list(self.flags)
        return data


@dataclass
class SimState:
    """One accepted time level in reference coordinates."""
    t: float
    fronts: FrontPair
    w: np.ndarray
    z: np.ndarray
    picard_iters: int = 0
    residual: float = 0.0
    # largest residual[k+1] / residual[k] of the step's Picard loop; 0 for a single pass
    contraction: float = 0.0


@dataclass(frozen=True)
class FieldSnapshot:
    """Fields at one output time, in both reference and physical coordinates."""
    t: float
    g: float
    h: float
    y: np.ndarray
    x: np.ndarray
    w: np.ndarray
    z: np.ndarray


@dataclass
class Trajectory:
    """Front history at every step plus field snapshots."""
    t: List[float] = field(default_factory=list)
    g: List[float] = field(default_factory=list)
    h: List[float] = field(default_factory=list)
    gdot: List[float] = field(default_factory=list)
    hdot: List[float] = field(default_factory=list)
    picard_iters: List[int] = field(default_factory=list)
    residual: List[float] = field(default_factory=list)
    flux: List[float] = field(default_factory=list)
    flux_left: List[float] = field(default_factory=list)
    contraction: List[float] = field(default_factory=list)
    snapshots: List[FieldSnapshot] = field(default_factory=list)
    report: Optional[Dict[str, Any]] = None

    def record(
        self,
        t: float,
        fronts: FrontPair,
        picard_iters: int = 0,
        residual: float = 0.0,
        flux: float = math.nan,
        flux_left: float = math.nan,
        contraction: float = 0.0,
    ) -> None:
        """Append one time level; ``flux`` is -v_x at h and ``flux_left`` is v_x at g."""
        self.t.append(t)
        self.g.append(fronts.g)
        self.h.append(fronts.h)
        self.gdot.append(fronts.gdot)
        self.hdot.append(fronts.hdot)
        self.picard_iters.append(picard_iters)
        self.residual.append(residual)
        self.flux.append(flux)
        self.flux_left.append(flux_left)
        self.contraction.append(contraction)

    @property
    def steps(self) -> int:
        return len(self.t) - 1

    def arrays(self) -> Dict[str, np.ndarray]:
        return {
            "t": np.asarray(self.t), "g": np.asarray(self.g), "h": np.asarray(self.h),
            "gdot": np.asarray(self.gdot), "hdot": np.asarray(self.hdot),
            "picard_iters": np.asarray(self.picard_iters), "residual": np.asarray(self.residual),
            "flux": np.asarray(self.flux), "flux_left": np.asarray(self.flux_left),
            "contraction": np.asarray(self.contraction),
        }

    @property
    def final(self) -> FieldSnapshot:
        return self.snapshots[-1]
