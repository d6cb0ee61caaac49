from abc import ABC, abstractmethod
from typing import Any, Dict, List

from ..interfaces import Trajectory


class OutputBackend(ABC):
    """Abstract base class for run output backends."""

    @abstractmethod
    async def initialize(self) -> None:
        """Prepare the output location."""
        pass

    @abstractmethod
    async def cleanup(self) -> None:
        """Release resources."""
        pass

    @abstractmethod
    def child(self, name: str) -> 'OutputBackend':
        """Backend for a nested run (one sweep value, one level)."""
        pass

    @abstractmethod
    async def write_header(self, header: Dict[str, Any]) -> None:
        """Config echo, a-priori bounds and versions."""
        pass

    @abstractmethod
    async def write_fronts(self, traj: Trajectory) -> None:
        """Front history, one row per accepted step."""
        pass

    @abstractmethod
    async def write_fields(self, traj: Trajectory) -> None:
        """Field snapshots in long format."""
        pass

    @abstractmethod
    async def write_report(self, report: Dict[str, Any], name: str = "report.json") -> None:
        """Structured verdicts or an error response."""
        pass

    @abstractmethod
    async def write_summary(self, rows: List[Dict[str, Any]]) -> None:
        """Sweep summary table."""
        pass
