"""
Pruebas de extremo a extremo: configuración → modo → report.txt → código de salida
"""

from pathlib import Path

import pytest

import main as cli
from config.run_config import load_run_config, parse_run_config
from config.settings import LabConfig, LabConstants
from core.lab_manager import EXIT_ASSERTION, EXIT_CONFIG, EXIT_NONCONVERGED, EXIT_OK, LabManager
from numerics.shapes import square_domain, write_mask_file
from storage.artifact_store import listed_artifacts, verify_round_trip
from utils.error_handler import ConfigError


def _config(tmp_path, body: str, name: str = "prueba"):
    text = f"[run]\nname = {name}\n{body}\n[output]\ndirectory = {tmp_path}\n"
    return parse_run_config(text, base_dir=tmp_path)


LIMIT_SQUARE = """mode = limit-solve
[domain]
shape = square
side = 1.0
h = 0.03125
[problem]
beta = 1.0
"""

UNIQUENESS_ANNULUS = """mode = uniqueness
[domain]
shape = disk
radius = 1.0
h = 0.03125
[problem]
beta = 1.0
f = annulus_indicator(0.6, 0.9)
"""

EIGEN_SHORT = """mode = eigen-sweep
[domain]
shape = square
side = 1.0
h = 0.125
[problem]
beta = 1.0
p_list = 2, 4
[solver]
max_iter = 1
"""


@pytest.fixture(autouse=True)
def results_in_tmp(monkeypatch, tmp_path):
    # results/ y el log relativos caen dentro de tmp_path
    monkeypatch.chdir(tmp_path)


def test_limit_solve_on_square(tmp_path):
    run = _config(tmp_path, LIMIT_SQUARE)

    code = LabManager().run(run)

    report = (run.output_dir / "report.txt").read_text(encoding="utf-8")
    assert code == EXIT_OK
    assert "lambda_infinity = 0.666667" in report
    assert "modo = limit-solve" in report
    assert listed_artifacts(run.output_dir) == ["distance.csv", "v_infinity.csv", "residual_interior.csv"]
    assert verify_round_trip(run.output_dir) == []


def test_report_is_deterministic(tmp_path):
    first = _config(tmp_path, LIMIT_SQUARE, name="a")
    second = _config(tmp_path, LIMIT_SQUARE, name="b")
    LabManager().run(first)
    LabManager().run(second)

    read = lambda run: (run.output_dir / "report.txt").read_text(encoding="utf-8").splitlines()[1:]
    assert read(first) == read(second)


def test_unconverged_sweep_exits_with_three(tmp_path):
    run = _config(tmp_path, EIGEN_SHORT)

    assert LabManager().run(run) == EXIT_NONCONVERGED
    assert "eigen_sweep.csv" in listed_artifacts(run.output_dir)
    assert verify_round_trip(run.output_dir) == []


def test_strict_solver_failure_is_noted_in_sweep_rows(tmp_path):
    run = _config(tmp_path, EIGEN_SHORT.replace("max_iter = 1", "max_iter = 1\nstrict = true"))

    assert LabManager().run(run) == EXIT_NONCONVERGED
    report = (run.output_dir / "report.txt").read_text(encoding="utf-8")
    noted = ("NotConverged", "LineSearchStall", "NoProgress")
    rows = [line for line in report.splitlines() if line.rstrip().endswith(noted)]
    assert len(rows) == 2
    assert "## Solver" not in report
    assert "eigen_sweep.csv" in listed_artifacts(run.output_dir)


def test_uniqueness_witness_is_infinity_harmonic(tmp_path):
    run = _config(tmp_path, UNIQUENESS_ANNULUS)

    assert LabManager().run(run) == EXIT_OK
    report = (run.output_dir / "report.txt").read_text(encoding="utf-8")
    assert f"{LabConstants.SUCCESS} testigo_infinito_armonico: p95 |Δ∞ testigo|" in report
    assert f"{LabConstants.SUCCESS} testigo_valido" in report


def test_mode_run_prints_resource_line(tmp_path, capsys):
    run = _config(tmp_path, LIMIT_SQUARE)

    LabManager().run(run)

    out = capsys.readouterr().out
    assert "Recursos:" in out
    assert "Recursos" not in (run.output_dir / "report.txt").read_text(encoding="utf-8")


def test_mask_file_domain(tmp_path):
    dom = square_domain(1.0, 0.125)
    write_mask_file(tmp_path / "cuadrado.pbm", dom.index >= 0, 0.125)
    run = _config(tmp_path, f"mode = limit-solve\n[domain]\nmask_file = {tmp_path / 'cuadrado.pbm'}\n[problem]\nbeta = 1.0\n")

    built = LabManager().build_domain(run)

    assert built.n_vertices == dom.n_vertices
    assert built.area == pytest.approx(1.0)


def test_domain_errors_become_config_errors(tmp_path):
    manager = LabManager()
    incommensurate = _config(tmp_path, LIMIT_SQUARE.replace("side = 1.0", "side = 1.01"))
    with pytest.raises(ConfigError) as excinfo:
        manager.build_domain(incommensurate)
    assert excinfo.value.field == "domain.shape"

    missing = _config(tmp_path, f"mode = limit-solve\n[domain]\nmask_file = {tmp_path / 'no.pbm'}\n[problem]\nbeta = 1.0\n")
    with pytest.raises(ConfigError) as excinfo:
        manager.build_domain(missing)
    assert excinfo.value.field == "domain.mask_file"

    assert manager.run(incommensurate) == EXIT_CONFIG


def test_bad_source_file(tmp_path):
    run = _config(tmp_path, LIMIT_SQUARE.replace("beta = 1.0", f"beta = 1.0\nf = {tmp_path / 'f.csv'}"))
    manager = LabManager()
    with pytest.raises(ConfigError) as excinfo:
        manager.build_source(run, manager.build_domain(run))
    assert excinfo.value.field == "problem.f"


def test_show_report(tmp_path):
    run = _config(tmp_path, LIMIT_SQUARE)
    manager = LabManager()
    manager.run(run)

    assert manager.show_report(run.output_dir) == EXIT_OK
    assert manager.show_report(tmp_path / "no-existe") == EXIT_CONFIG

    (run.output_dir / "distance.csv").unlink()
    assert manager.show_report(run.output_dir) == EXIT_ASSERTION


def test_main_run_and_report(tmp_path, capsys):
    cfg = tmp_path / "limite.cfg"
    cfg.write_text("[run]\nname = limite\n" + LIMIT_SQUARE, encoding="utf-8")

    assert cli.main(["run", str(cfg)]) == EXIT_OK
    output_dir = load_run_config(cfg).output_dir
    assert output_dir == Path(LabConfig().RESULTS_DIR) / "limite"
    assert (output_dir / "report.txt").exists()
    assert cli.main(["report", str(output_dir)]) == EXIT_OK
    assert "lambda_infinity" in capsys.readouterr().out


def test_main_config_errors(tmp_path):
    cfg = tmp_path / "malo.cfg"
    cfg.write_text("[run]\nname = malo\nmode = heat\n", encoding="utf-8")

    assert cli.main(["run", str(cfg)]) == EXIT_CONFIG
    assert cli.main(["run", str(tmp_path / "no.cfg")]) == EXIT_CONFIG
    assert cli.main(["check", "--seed", "-1"]) == EXIT_CONFIG
    assert cli.main(["report", str(tmp_path / "vacio")]) == EXIT_CONFIG
