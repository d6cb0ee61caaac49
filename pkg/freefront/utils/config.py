"""Flat ``key = value`` problem files."""
import logging
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple

import aiofiles

from ..exceptions import ConfigError
from ..model import (
    AUTO_DT,
    InitialProfile,
    ProblemConfig,
    ProfileShape,
    create_kernel,
    create_reaction,
)

logger = logging.getLogger(__name__)

REQUIRED_KEYS = (
    "d1", "d2", "mu", "rho", "h0", "T",
    "kernel.family", "kernel.a",
    "reaction.kind", "reaction.a", "reaction.b", "reaction.c",
    "grid.N", "grid.dt",
    "init.u0", "init.v0",
)

OPTIONAL_KEYS = {
    "kernel.sigma": None,
    "kernel.allow_nonlipschitz": "false",
    "init.u0_amp": "1.0",
    "init.v0_amp": "1.0",
    "picard.tol": "1e-10",
    "picard.max": "8",
    "theta": "1",
    "grid.recheck_every": "20",
    "output.snapshots": "200",
}


def parse_config_text(text: str) -> Tuple[Dict[str, str], Dict[str, int]]:
    """Split a config file into a key/value mapping and the line of each key."""
    values: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", line=number)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=number)
        if key not in REQUIRED_KEYS and key not in OPTIONAL_KEYS:
            raise ConfigError("unknown key", key=key, line=number)
        values[key] = value
        lines[key] = number
    return values, lines


def parse_config_mapping(
    mapping: Mapping[str, str],
    lines: Optional[Mapping[str, int]] = None,
    allow_nonlipschitz_kernel: Optional[bool] = None,
) -> ProblemConfig:
    """Build a ProblemConfig from string values.

    Raises:
        ConfigError: For missing keys or values that do not parse
    """
    lines = lines or {}
    for key in REQUIRED_KEYS:
        if key not in mapping:
            raise ConfigError("missing required key", key=key)
    values = {key: mapping.get(key, default) for key, default in OPTIONAL_KEYS.items()}
    values.update(mapping)

    def number(key: str, kind=float):
        try:
            return kind(values[key])
        except (TypeError, ValueError):
            raise ConfigError(f"cannot parse {values[key]!r} as {kind.__name__}",
                              key=key, line=lines.get(key))

    def flag(key: str) -> bool:
        text = str(values[key]).lower()
        if text not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigError(f"expected a boolean, got {values[key]!r}", key=key, line=lines.get(key))
        return text in ("true", "1", "yes")

    h0 = number("h0")

    def profile(name: str) -> InitialProfile:
        key = f"init.{name}"
        try:
            shape = ProfileShape(values[key])
        except ValueError:
            raise ConfigError(
                f"unknown profile {values[key]!r} (expected bump or parabola)",
                key=key, line=lines.get(key),
            )
        return InitialProfile(shape=shape, amplitude=number(f"{key}_amp"), h0=h0)

    try:
        kernel = create_kernel(
            values["kernel.family"],
            a=number("kernel.a"),
            sigma=None if values["kernel.sigma"] is None else number("kernel.sigma"),
        )
    except ValueError as e:
        raise ConfigError(str(e), key="kernel.family", line=lines.get("kernel.family"))
    if kernel.family.value == "custom":
        raise ConfigError("custom kernels are programmatic only", key="kernel.family")

    kind = values["reaction.kind"]
    if kind not in ("competition", "prey_predator"):
        raise ConfigError(f"unsupported reaction kind {kind!r}", key="reaction.kind",
                          line=lines.get("reaction.kind"))
    try:
        reaction = create_reaction(kind, a=number("reaction.a"), b=number("reaction.b"),
                                   c=number("reaction.c"))
    except ValueError as e:
        raise ConfigError(str(e), key="reaction.a")

    dt_text = str(values["grid.dt"]).strip()
    dt = AUTO_DT if dt_text == AUTO_DT else number("grid.dt")

    if allow_nonlipschitz_kernel is None:
        allow_nonlipschitz_kernel = flag("kernel.allow_nonlipschitz")

    return ProblemConfig(
        d1=number("d1"),
        d2=number("d2"),
        mu=number("mu"),
        rho=number("rho"),
        h0=h0,
        u0=profile("u0"),
        v0=profile("v0"),
        kernel=kernel,
        reaction=reaction,
        T=number("T"),
        N=number("grid.N", int),
        dt=dt,
        picard_tol=number("picard.tol"),
        picard_max=number("picard.max", int),
        theta_scheme=number("theta"),
        recheck_every=number("grid.recheck_every", int),
        snapshots=number("output.snapshots", int),
        allow_nonlipschitz_kernel=allow_nonlipschitz_kernel,
    )


def format_config(cfg: ProblemConfig) -> str:
    """Render a config back to ``key = value`` text."""
    return "".join(f"{key} = {value}\n" for key, value in cfg.to_mapping().items())


async def load_config(path: Path, allow_nonlipschitz_kernel: Optional[bool] = None) -> ProblemConfig:
    """Read and parse a config file.

    Raises:
        ConfigError: If the file cannot be read or parsed
    """
    try:
        async with aiofiles.open(path, mode="r", encoding="utf-8") as f:
            text = await f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}")
    mapping, lines = parse_config_text(text)
    logger.debug(f"Parsed {len(mapping)} keys from {path}")
    return parse_config_mapping(mapping, lines, allow_nonlipschitz_kernel)
