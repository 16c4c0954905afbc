"""
Pruebas del formato de configuración de ejecuciones y de sus validadores
"""

from pathlib import Path

import pytest

from config.run_config import load_run_config, parse_run_config
from config.settings import LabConfig
from utils.error_handler import ConfigError
from utils.validator import InputValidator

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

EIGEN = """
# barrido de ejemplo
[run]
name = prueba
mode = eigen-sweep

[domain]
shape = disk
radius = 1.0
h = 0.0625

[problem]
beta = 1.0
p_list = 2, 4, 8
"""


def test_parse_eigen_config():
    config = parse_run_config(EIGEN)

    assert config.name == "prueba"
    assert config.mode == "eigen-sweep"
    assert config.shape == "disk"
    assert config.shape_params == {"radius": 1.0}
    assert config.h == 0.0625
    assert config.p_list == [2.0, 4.0, 8.0]
    assert config.source == "const(1)"
    assert config.strict is False
    assert config.output_dir == Path(LabConfig().RESULTS_DIR) / "prueba"


def test_error_names_field_and_line():
    text = EIGEN.replace("beta = 1.0", "beta = -2")
    with pytest.raises(ConfigError) as excinfo:
        parse_run_config(text)
    assert excinfo.value.field == "problem.beta"
    assert excinfo.value.line == 13
    assert "problem.beta" in str(excinfo.value)


@pytest.mark.parametrize("old, new, field", [
    ("mode = eigen-sweep", "mode = heat", "run.mode"),
    ("shape = disk", "shape = hexagon", "domain.shape"),
    ("p_list = 2, 4, 8", "p_list = 4, 2", "problem.p_list"),
    ("p_list = 2, 4, 8", "p_list = 1, 2", "problem.p_list"),
    ("radius = 1.0", "radio = 1.0", "domain.radio"),
    ("[problem]", "[problema]", "problema"),
])
def test_invalid_values_are_rejected(old, new, field):
    with pytest.raises(ConfigError) as excinfo:
        parse_run_config(EIGEN.replace(old, new))
    assert excinfo.value.field == field


def test_missing_required_keys():
    with pytest.raises(ConfigError) as excinfo:
        parse_run_config(EIGEN.replace("p_list = 2, 4, 8", ""))
    assert excinfo.value.field == "problem.p_list"

    with pytest.raises(ConfigError) as excinfo:
        parse_run_config(EIGEN.replace("h = 0.0625", ""))
    assert excinfo.value.field == "domain.h"


def test_duplicate_key_and_orphan_key():
    with pytest.raises(ConfigError):
        parse_run_config(EIGEN + "beta = 2.0\n")
    with pytest.raises(ConfigError):
        parse_run_config("name = x\n" + EIGEN)


def test_shape_and_mask_file_are_exclusive():
    with pytest.raises(ConfigError) as excinfo:
        parse_run_config(EIGEN.replace("radius = 1.0", "mask_file = forma.pbm"))
    assert excinfo.value.field == "domain.mask_file"


def test_bare_ball_indicator_takes_eps():
    text = EIGEN.replace("beta = 1.0", "beta = 1.0\nf = ball_indicator\neps = 0.25")
    assert parse_run_config(text).source == "ball_indicator(0.25)"

    with pytest.raises(ConfigError) as excinfo:
        parse_run_config(EIGEN.replace("beta = 1.0", "beta = 1.0\nf = ball_indicator"))
    assert excinfo.value.field == "problem.eps"


def test_relative_paths_resolve_from_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(EIGEN.replace("beta = 1.0", "beta = 1.0\nf = fuente.csv"), encoding="utf-8")

    config = load_run_config(path)

    assert config.source == str(tmp_path / "fuente.csv")
    assert config.source_path == path


def test_check_mode_needs_no_domain():
    config = parse_run_config("[run]\nname = suite\nmode = check\nseed = 3\n")
    assert config.mode == "check"
    assert config.seed == 3


def test_unreadable_file():
    with pytest.raises(ConfigError):
        load_run_config("/no/existe/run.cfg")


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.cfg")), ids=lambda p: p.name)
def test_shipped_configs_parse(path):
    config = load_run_config(path)
    assert config.mode in ("eigen-sweep", "poisson-sweep", "limit-solve", "uniqueness", "check")


def test_validator_helpers():
    v = InputValidator
    assert v.parse_float("inf") == float("inf")
    assert v.parse_float("abc") is None
    assert v.parse_int("12") == 12 and v.parse_int("1.5") is None
    assert v.parse_bool("sí") is True and v.parse_bool("quizá") is None
    assert v.parse_p_list("2, 4, 8") == [2.0, 4.0, 8.0]
    assert v.parse_p_list("2, inf") is None
    assert v.is_valid_run_name("limit-square_1")
    assert not v.is_valid_run_name("../fuera")
    assert v.is_valid_source_spec("annulus_indicator(0.5, 0.9)")
    assert not v.is_valid_source_spec("gauss(1)")
    assert v.is_valid_grid_size(33) and not v.is_valid_grid_size(2)
