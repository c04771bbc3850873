from pathlib import Path

import pytest

from src.config.config_loader_service import ConfigLoaderService, parse_lines, parse_value
from src.core.errors import ConfigError

RECIPES = Path(__file__).resolve().parents[2] / "recipes"

BASIC = """
# comment line
seed = 3
output_dir = runs/test   # trailing comment
expander.mode = local
expander.alpha = 0.5
expander.adjoint.batch_size = 32
metrics.enabled = ["entropy", "vendi"]
expander.record_phases = false
"""


@pytest.fixture
def loader():
    return ConfigLoaderService()


def test_parse_value():
    assert parse_value("3") == 3
    assert parse_value("0.25") == 0.25
    assert parse_value("(1.0, -2.0)") == (1.0, -2.0)
    assert parse_value("true") is True
    assert parse_value("None") is None
    assert parse_value("ellipse_partial") == "ellipse_partial"
    assert parse_value("global") == "global"


def test_nested_sections(loader):
    config = loader.parse(BASIC)
    assert config.seed == 3
    assert config.output_dir == "runs/test"
    assert config.expander.mode == "local"
    assert config.expander.alpha == 0.5
    assert config.expander.adjoint.batch_size == 32
    assert config.metrics.enabled == ["entropy", "vendi"]
    assert config.expander.record_phases is False


def test_command_line_overrides(loader):
    config = loader.parse(BASIC, seed=11, output_dir="elsewhere")
    assert config.seed == 11
    assert config.output_dir == "elsewhere"


def test_line_without_equals_names_line():
    with pytest.raises(ConfigError) as caught:
        parse_lines("seed = 1\nexpander.mode global\n")
    assert caught.value.line == 2


def test_malformed_key_names_key_and_line():
    with pytest.raises(ConfigError) as caught:
        parse_lines("seed = 1\n\nexpander..mode = global\n")
    assert caught.value.key == "expander..mode"
    assert caught.value.line == 3
    assert "expander..mode" in str(caught.value) and "line 3" in str(caught.value)


def test_repeated_key():
    with pytest.raises(ConfigError) as caught:
        parse_lines("seed = 1\nseed = 2\n")
    assert caught.value.key == "seed"
    assert caught.value.line == 2


def test_value_and_section_clash():
    with pytest.raises(ConfigError):
        parse_lines("expander = 1\nexpander.mode = global\n")
    with pytest.raises(ConfigError):
        parse_lines("expander.mode = global\nexpander = 1\n")


def test_missing_value():
    with pytest.raises(ConfigError) as caught:
        parse_lines("seed =\n")
    assert caught.value.key == "seed"


def test_unknown_key_is_located(loader):
    with pytest.raises(ConfigError) as caught:
        loader.parse("seed = 1\nexpander.bogus = 2\n")
    assert caught.value.key == "expander.bogus"
    assert caught.value.line == 2


def test_out_of_range_value_is_located(loader):
    with pytest.raises(ConfigError) as caught:
        loader.parse("seed = 1\n\nexpander.gamma_base = -1.0\n")
    assert caught.value.key == "expander.gamma_base"
    assert caught.value.line == 3


def test_cross_field_rule_points_at_section(loader):
    with pytest.raises(ConfigError) as caught:
        loader.parse("seed = 1\nexpander.mode = global\nexpander.alpha = 0.5\n")
    assert caught.value.key == "expander"
    assert caught.value.line == 2


def test_seed_is_mandatory(loader):
    with pytest.raises(ConfigError) as caught:
        loader.parse("output_dir = somewhere\n")
    assert caught.value.key == "seed"


def test_missing_file(loader, tmp_path):
    with pytest.raises(ConfigError):
        loader.load(tmp_path / "absent.conf")


@pytest.mark.parametrize(
    "name",
    [
        "global_toy.conf",
        "constr_toy.conf",
        "terminal_only_toy.conf",
        "nse_toy.conf",
        "local_toy.conf",
        "fdc_toy.conf",
        "oracle.conf",
        "eval_global.conf",
    ],
)
def test_shipped_recipes_load(loader, name):
    config = loader.load(RECIPES / name)
    assert config.seed is not None
