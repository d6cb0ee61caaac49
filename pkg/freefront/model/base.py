from abc import ABC, abstractmethod
from enum import Enum

import numpy as np


class ReactionKind(str, Enum):
    COMPETITION = "competition"
    PREY_PREDATOR = "prey_predator"
    CUSTOM = "custom"


class ReactionModel(ABC):
    """Abstract base class for the reaction pair (f1, f2).

    Implementations must accept numpy arrays for every argument and
    broadcast elementwise.
    """

    kind: ReactionKind

    @abstractmethod
    def f1(self, t, x, u, v) -> np.ndarray:
        """Growth rate of the nonlocally dispersing species."""
        pass

    @abstractmethod
    def f2(self, t, x, u, v) -> np.ndarray:
        """Growth rate of the locally diffusing species."""
        pass

    @property
    @abstractmethod
    def k0(self) -> float:
        """Density above which f1 is strictly negative."""
        pass

    @property
    @abstractmethod
    def r(self) -> float:
        """Rate with f1 <= r*u on (0, k0]."""
        pass

    @abstractmethod
    def theta(self, k: float) -> float:
        """Theta(k): f2 < 0 once v >= Theta(k) and 0 <= u <= k."""
        pass

    @abstractmethod
    def lipschitz(self, c1: float, c2: float) -> float:
        """L(c1, c2) on the box [0, c1] x [0, c2]."""
        pass

    @abstractmethod
    def lipschitz_x(self, c1: float, c2: float) -> float:
        """L*(c1, c2): Lipschitz constant in x on the same box."""
        pass

    def to_dict(self) -> dict:
        return {"kind": self.kind.value}
