import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from freefront.api.commands import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_SOLVER,
    apply_sweep_value,
    cmd_convergence,
    cmd_oracle,
    cmd_run,
    cmd_sweep,
    cmd_validate,
)
from freefront.exceptions import ConfigError
from freefront.main import build_parser, main, parse_runtime_config
from freefront.storage import FilesystemOutputBackend, create_output_backend
from freefront.storage.filesystem.manager import format_number, to_jsonable
from freefront.utils.config import format_config, parse_config_mapping


@pytest.fixture
def write_config(tmp_path, make_config):
    """Write a short standard problem, optionally edited, and return its path."""
    def _write(name="problem.conf", drop=None, **changes):
        changes.setdefault("T", 0.2)
        changes.setdefault("N", 101)
        changes.setdefault("snapshots", 4)
        text = format_config(make_config(**changes))
        if drop is not None:
            text = "".join(line + "\n" for line in text.splitlines() if not line.startswith(f"{drop} "))
        path = tmp_path / name
        path.write_text(text)
        return path
    return _write


def read_rows(path: Path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_format_number():
    """17 significant digits; ints and booleans stay plain."""
    assert format_number(0.1) == "0.10000000000000001"
    assert float(format_number(1.0 / 3.0)) == 1.0 / 3.0
    assert format_number(np.int64(7)) == "7"
    assert format_number(True) == "true"
    assert format_number(None) == ""


def test_to_jsonable():
    """Non-finite floats become null and numpy values become plain."""
    data = to_jsonable({"a": math.inf, "b": np.float64(0.5), "c": np.arange(2), "d": (math.nan,)})
    assert data == {"a": None, "b": 0.5, "c": [0, 1], "d": [None]}


def test_backend_factory(tmp_path):
    """Filesystem is the only backend type."""
    assert isinstance(create_output_backend("filesystem", root=tmp_path), FilesystemOutputBackend)
    with pytest.raises(ValueError):
        create_output_backend("sqlite")


@pytest.mark.asyncio
async def test_atomic_writes_leave_no_temp_files(tmp_path):
    """Reports are written via a temporary file that is always removed."""
    backend = create_output_backend("filesystem", root=tmp_path / "out")
    await backend.initialize()
    await backend.write_report({"x": 1.0, "bad": math.nan})
    await backend.cleanup()
    assert json.loads((tmp_path / "out" / "report.json").read_text()) == {"bad": None, "x": 1.0}
    assert not list((tmp_path / "out").glob("*.tmp"))


@pytest.mark.asyncio
async def test_run_writes_outputs(tmp_path, write_config):
    """A standard run succeeds and writes every file."""
    out = tmp_path / "run"
    assert await cmd_run(write_config(), out) == EXIT_OK
    for name in ("header.json", "fronts.csv", "fields.csv", "report.json"):
        assert (out / name).exists(), name

    rows = read_rows(out / "fronts.csv")
    h = [float(row["h"]) for row in rows]
    assert all(b > a for a, b in zip(h, h[1:]))
    assert float(rows[-1]["t"]) == 0.2
    report = json.loads((out / "report.json").read_text())
    assert report["ok"] is True
    assert report["steps"] == len(rows) - 1


@pytest.mark.asyncio
async def test_run_is_deterministic(tmp_path, write_config):
    """Two runs of one config give byte-identical front histories."""
    path = write_config()
    await cmd_run(path, tmp_path / "a")
    await cmd_run(path, tmp_path / "b")
    assert (tmp_path / "a" / "fronts.csv").read_bytes() == (tmp_path / "b" / "fronts.csv").read_bytes()


@pytest.mark.asyncio
async def test_header_round_trip(tmp_path, write_config, make_config):
    """The config echo in header.json re-parses to the same problem."""
    out = tmp_path / "run"
    await cmd_run(write_config(), out)
    header = json.loads((out / "header.json").read_text())
    assert parse_config_mapping(header["config"]) == make_config(T=0.2, N=101, snapshots=4)
    assert header["apriori"]["k1"] == 1.0
    assert "numpy" in header["versions"]


@pytest.mark.asyncio
async def test_run_missing_key(tmp_path, write_config):
    """A config without d1 fails with exit 1 and names the key."""
    out = tmp_path / "run"
    assert await cmd_run(write_config(drop="d1"), out) == EXIT_CONFIG
    report = json.loads((out / "report.json").read_text())
    assert report["error"]["type"] == "ConfigError"
    assert report["error"]["details"]["key"] == "d1"


@pytest.mark.asyncio
async def test_run_unstable_dt(tmp_path, write_config):
    """dt = 10 trips the stability bound on the first step."""
    out = tmp_path / "run"
    assert await cmd_run(write_config(dt=10.0, T=20.0), out) == EXIT_SOLVER
    report = json.loads((out / "report.json").read_text())
    assert report["error"]["type"] == "CFLViolatedError"


@pytest.mark.asyncio
async def test_validate(tmp_path, write_config, capsys):
    """Hypotheses pass for the standard problem and the bounds are printed."""
    assert await cmd_validate(write_config(), out_dir=tmp_path / "v") == EXIT_OK
    printed = capsys.readouterr().out
    assert "k3" in printed and "T0" in printed
    report = json.loads((tmp_path / "v" / "validate.json").read_text())
    assert report["reaction"]["closed_form_constants"] is True


@pytest.mark.asyncio
async def test_validate_uniform_kernel(write_config):
    """The uniform kernel needs the opt-in flag."""
    path = write_config(kind="competition", family="uniform", allow_nonlipschitz_kernel=False)
    assert await cmd_validate(path) == EXIT_CONFIG
    assert await cmd_validate(path, allow_nonlipschitz_kernel=True) == EXIT_OK


@pytest.mark.asyncio
async def test_validate_with_comparison_cases(write_config):
    """Randomized comparison cases run on request."""
    assert await cmd_validate(write_config(), comparison_seeds=5) == EXIT_OK


def test_apply_sweep_value(make_config):
    """Sweeps replace coefficients or profile amplitudes."""
    cfg = make_config()
    assert apply_sweep_value(cfg, "mu", 0.5).mu == 0.5
    assert apply_sweep_value(cfg, "init.v0_amp", 0.25).v0.amplitude == 0.25
    assert apply_sweep_value(cfg, "h0", 2.0).u0.h0 == 2.0
    with pytest.raises(ConfigError):
        apply_sweep_value(cfg, "d1", 2.0)


@pytest.mark.asyncio
async def test_sweep(tmp_path, write_config):
    """One row per value; the baseline value reproduces cmd_run."""
    path = write_config()
    out = tmp_path / "sweep"
    assert await cmd_sweep(path, "mu", "0.5, 1", out, threads=2) == EXIT_OK
    rows = read_rows(out / "summary.csv")
    assert [row["value"] for row in rows] == ["0.5", "1"]
    assert all(row["status"] == "ok" for row in rows)

    await cmd_run(path, tmp_path / "baseline")
    assert (out / "mu=1" / "fronts.csv").read_bytes() == (tmp_path / "baseline" / "fronts.csv").read_bytes()


@pytest.mark.asyncio
async def test_sweep_rejects_bad_input(tmp_path, write_config):
    """Empty value lists and unknown parameters are config errors."""
    path = write_config()
    assert await cmd_sweep(path, "mu", "", tmp_path / "s") == EXIT_CONFIG
    assert await cmd_sweep(path, "viscosity", "1", tmp_path / "s") == EXIT_CONFIG


@pytest.mark.asyncio
async def test_convergence_command(tmp_path, write_config):
    """The study runs and writes its report."""
    path = write_config(T=0.05)
    assert await cmd_convergence(path, levels=3, out_dir=tmp_path / "c") == EXIT_OK
    report = json.loads((tmp_path / "c" / "convergence.json").read_text())
    assert len(report["levels"]) == 3
    assert await cmd_convergence(path, levels=2) == EXIT_CONFIG


@pytest.mark.asyncio
async def test_oracle_command(tmp_path, write_config):
    """Both solvers run and the discrepancy report is written."""
    out = tmp_path / "o"
    code = await cmd_oracle(write_config(T=0.05), out, nx=301)
    report = json.loads((out / "oracle.json").read_text())
    assert code == (EXIT_OK if report["within_tolerance"] else EXIT_SOLVER)
    assert (out / "oracle" / "fronts.csv").exists()


def test_runtime_config(monkeypatch):
    """Thread count and log level come from the environment."""
    monkeypatch.setenv("FREEFRONT_THREADS", "3")
    monkeypatch.setenv("FREEFRONT_LOG_LEVEL", "debug")
    assert parse_runtime_config() == {"threads": 3, "log_level": "DEBUG"}
    monkeypatch.setenv("FREEFRONT_THREADS", "many")
    with pytest.raises(ValueError):
        parse_runtime_config()


def test_parser_defaults():
    """Output directories default per subcommand."""
    args = build_parser().parse_args(["run", "--config", "p.conf"])
    assert args.out == Path("out")
    assert args.allow_nonlipschitz_kernel is None
    args = build_parser().parse_args(["convergence", "--config", "p.conf", "--refine", "space"])
    assert args.out is None and args.levels == 3 and args.refine == "space"


def test_main_exit_code(tmp_path, write_config, monkeypatch):
    """main exits with the command's status."""
    monkeypatch.setenv("FREEFRONT_THREADS", "1")
    with pytest.raises(SystemExit) as excinfo:
        main(["validate", "--config", str(write_config())])
    assert excinfo.value.code == 0
    with pytest.raises(SystemExit) as excinfo:
        main(["run", "--config", str(write_config("bad.conf", drop="d1")), "--out", str(tmp_path / "bad")])
    assert excinfo.value.code == 1
