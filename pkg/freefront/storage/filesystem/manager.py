import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List

import aiofiles
import numpy as np

from ...interfaces import Trajectory
from ..base import OutputBackend

logger = logging.getLogger(__name__)

FRONT_COLUMNS = ("t", "g", "h", "gdot", "hdot", "picard_iters", "residual")
FIELD_COLUMNS = ("t", "y", "x", "w", "z")
SUMMARY_COLUMNS = ("value", "h_T", "g_T", "max_u_T", "max_v_T", "width_T", "status")


def format_number(value: Any) -> str:
    """17 significant digits for floats so values round-trip exactly."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; non-finite floats become null."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _csv_text(columns: Iterable[str], rows: Iterable[Iterable[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(value) for value in row])
    return buffer.getvalue()


class FilesystemOutputBackend(OutputBackend):
    """Writes one run per directory; every file is replaced atomically."""

    def __init__(self, root: Path):
        self.root = Path(root)

    async def initialize(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)

    async def cleanup(self) -> None:
        for stale in self.root.glob("*.tmp"):
            try:
                stale.unlink()
            except Exception as e:
                logger.warning(f"Error cleaning up temp file: {e}")

    def child(self, name: str) -> 'FilesystemOutputBackend':
        return FilesystemOutputBackend(self.root / name)

    async def _write_text(self, name: str, text: str) -> Path:
        """Write to <name>.tmp, then replace the target."""
        path = self.root / name
        temp_path = path.with_suffix(path.suffix + ".tmp")
        path.parent.mkdir(parents=True, exist_ok=True)

        try:
            async with aiofiles.open(temp_path, mode="w", encoding="utf-8", newline="") as f:
                await f.write(text)
            temp_path.replace(path)
        except Exception as e:
            logger.error(f"Error writing {path}: {e}")
            raise
        finally:
            if temp_path.exists():
                try:
                    temp_path.unlink()
                except Exception as e:
                    logger.warning(f"Error cleaning up temp file: {e}")
        return path

    async def _write_json(self, name: str, data: Dict[str, Any]) -> Path:
        text = json.dumps(to_jsonable(data), indent=2, sort_keys=True, allow_nan=False)
        return await self._write_text(name, text + "\n")

    async def write_header(self, header: Dict[str, Any]) -> None:
        await self._write_json("header.json", header)

    async def write_fronts(self, traj: Trajectory) -> None:
        rows = zip(*(getattr(traj, column) for column in FRONT_COLUMNS))
        path = await self._write_text("fronts.csv", _csv_text(FRONT_COLUMNS, rows))
        logger.debug(f"Wrote {len(traj.t)} front rows to {path}")

    async def write_fields(self, traj: Trajectory) -> None:
        def rows():
            for snap in traj.snapshots:
                for y, x, w, z in zip(snap.y, snap.x, snap.w, snap.z):
                    yield snap.t, y, x, w, z

        await self._write_text("fields.csv", _csv_text(FIELD_COLUMNS, rows()))

    async def write_report(self, report: Dict[str, Any], name: str = "report.json") -> None:
        await self._write_json(name, report)

    async def write_summary(self, rows: List[Dict[str, Any]]) -> None:
        table = ([row.get(column) for column in SUMMARY_COLUMNS] for row in rows)
        await self._write_text("summary.csv", _csv_text(SUMMARY_COLUMNS, table))
