import pytest

from freefront.exceptions import ConfigError
from freefront.model import AUTO_DT, KernelFamily
from freefront.utils.config import format_config, load_config, parse_config_mapping, parse_config_text


@pytest.fixture
def config_text(make_config):
    return format_config(make_config())


def test_parse_standard_config(config_text):
    """A rendered standard config parses back to its values."""
    mapping, lines = parse_config_text(config_text)
    cfg = parse_config_mapping(mapping, lines)
    assert cfg.d1 == 1.0
    assert cfg.kernel.family is KernelFamily.TENT
    assert cfg.dt == AUTO_DT
    assert cfg.u0(0.0) == pytest.approx(0.5)


@pytest.mark.parametrize("kind,family", [("competition", "truncated_gaussian"), ("prey_predator", "uniform")])
def test_mapping_round_trip(make_config, kind, family):
    """to_mapping output rebuilds an equal config."""
    cfg = make_config(kind, family, dt=1e-3, theta_scheme=0.5)
    assert parse_config_mapping(cfg.to_mapping()) == cfg


def test_comments_and_blank_lines():
    """Comments and blank lines are ignored."""
    mapping, lines = parse_config_text("# header\n\nd1 = 2  # trailing\n")
    assert mapping == {"d1": "2"}
    assert lines == {"d1": 3}


def test_missing_key(config_text):
    """A missing required key names the key."""
    text = "".join(line + "\n" for line in config_text.splitlines() if not line.startswith("d1 "))
    mapping, lines = parse_config_text(text)
    with pytest.raises(ConfigError) as excinfo:
        parse_config_mapping(mapping, lines)
    assert excinfo.value.key == "d1"


def test_duplicate_and_unknown_keys():
    """Duplicates and unknown keys carry their line number."""
    with pytest.raises(ConfigError) as excinfo:
        parse_config_text("d1 = 1\nd1 = 2\n")
    assert excinfo.value.line == 2
    with pytest.raises(ConfigError) as excinfo:
        parse_config_text("d1 = 1\nviscosity = 3\n")
    assert excinfo.value.key == "viscosity"
    with pytest.raises(ConfigError):
        parse_config_text("just words\n")


def test_unparsable_value(config_text):
    """Values that do not parse point at their line."""
    text = config_text.replace("grid.N = 201", "grid.N = many")
    mapping, lines = parse_config_text(text)
    with pytest.raises(ConfigError) as excinfo:
        parse_config_mapping(mapping, lines)
    assert excinfo.value.key == "grid.N"
    assert excinfo.value.line == lines["grid.N"]


def test_custom_kernel_not_configurable(config_text):
    """Custom kernels cannot be named in a file."""
    mapping, _ = parse_config_text(config_text.replace("kernel.family = tent", "kernel.family = custom"))
    with pytest.raises(ConfigError):
        parse_config_mapping(mapping)


def test_allow_flag_override(config_text):
    """The command-line flag overrides the file."""
    mapping, _ = parse_config_text(config_text)
    assert parse_config_mapping(mapping, allow_nonlipschitz_kernel=True).allow_nonlipschitz_kernel


@pytest.mark.asyncio
async def test_load_config(tmp_path, config_text):
    """Config files are read asynchronously."""
    path = tmp_path / "problem.conf"
    path.write_text(config_text)
    cfg = await load_config(path)
    assert cfg.T == 2.0
    with pytest.raises(ConfigError):
        await load_config(tmp_path / "missing.conf")
