"""
Pruebas de la suite de invariantes (registro, determinismo, resumen)
"""

import numpy as np
import pytest

from checks import check_suite as suite
from checks.check_suite import REGISTRY, CheckContext, check_suite, run_check_suite
from utils.report_formatter import ReportFormatter

CHEAP = [
    "dominio.malla_3x3", "campos.gradiente_afin", "campos.norma_estabilizada",
    "campos.norma_monotona", "artefactos.ida_y_vuelta",
]


def test_registry_names_are_unique():
    names = [name for name, _ in REGISTRY]
    assert len(names) == len(set(names))
    assert set(CHEAP) <= set(names)


def test_context_rng_depends_on_seed_and_name():
    a = CheckContext(7).rng("x").uniform(size=4)
    assert np.array_equal(a, CheckContext(7).rng("x").uniform(size=4))
    assert not np.array_equal(a, CheckContext(8).rng("x").uniform(size=4))
    assert not np.array_equal(a, CheckContext(7).rng("y").uniform(size=4))


def test_context_caches_domains():
    ctx = CheckContext(0, h=0.25)
    assert ctx.domain("square") is ctx.domain("square")


def test_cheap_checks_pass_in_registry_order():
    results = run_check_suite(0, only=CHEAP)

    assert [r.name for r in results] == [name for name, _ in REGISTRY if name in CHEAP]
    assert all(r.passed for r in results), [(r.name, r.detail) for r in results]


def test_summary_is_deterministic():
    formatter = ReportFormatter()
    first = formatter.format_check_summary(3, run_check_suite(3, only=CHEAP))
    second = formatter.format_check_summary(3, run_check_suite(3, only=CHEAP))

    assert first == second
    assert first.endswith(f"total = {len(CHEAP)}, fallidas = 0\n")


def test_exception_in_check_is_reported_as_failure(monkeypatch):
    def broken(ctx):
        raise RuntimeError("sin datos")

    monkeypatch.setattr(suite, "REGISTRY", [("rota", broken), ("ok", lambda ctx: (True, "bien"))])

    results = run_check_suite(0)

    assert [(r.name, r.passed) for r in results] == [("rota", False), ("ok", True)]
    assert "RuntimeError" in results[0].detail


@pytest.mark.parametrize("passed, code", [(True, 0), (False, 1)])
def test_check_suite_writes_summary(monkeypatch, tmp_path, capsys, passed, code):
    monkeypatch.setattr(suite, "REGISTRY", [("unica", lambda ctx: (passed, "detalle"))])

    assert check_suite(5, output_dir=tmp_path) == code

    summary = (tmp_path / "summary.txt").read_text(encoding="utf-8")
    assert "Recursos:" in capsys.readouterr().out
    assert "Recursos" not in summary
    assert summary.startswith("# Suite de invariantes (semilla 5)")
    assert ("PASS" if passed else "FAIL") + " unica: detalle" in summary


def test_health_line_reports_status_and_blocks():
    report = {
        'status': 'warning',
        'memory': {'percent': 81.0, 'rss_mb': 512.0},
        'alerts_sent': 1,
        'tasks': {'dominio.malla_3x3': {}, 'campos.gradiente_afin': {}},
    }

    line = ReportFormatter().format_health(report)

    assert "estado=warning" in line
    assert "memoria=81.0%" in line
    assert "(512.0MB)" in line
    assert "alertas=1" in line
    assert "bloques=2" in line


def test_health_line_when_sampling_fails():
    line = ReportFormatter().format_health({'status': 'error', 'error': 'sin acceso'})
    assert "no disponibles (sin acceso)" in line
