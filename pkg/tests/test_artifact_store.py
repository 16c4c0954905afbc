"""
Pruebas del almacén de artefactos y de la verificación de ida y vuelta
"""

import csv

import pytest

from numerics.eigen import SweepRow, SweepTable
from numerics.fields import ScalarField
from numerics.poisson import limit_maximal_solution
from storage.artifact_store import (
    EIGEN_COLUMNS,
    ArtifactStore,
    listed_artifacts,
    verify_round_trip,
)
from utils.report_formatter import ReportFormatter


@pytest.fixture
def store(tmp_path):
    store = ArtifactStore(tmp_path / "resultados")
    assert store.initialize()
    return store


def test_artifacts_keep_write_order(store, square16):
    store.write_field("v.csv", limit_maximal_solution(square16, 1.0))
    store.write_text("summary.txt", "resumen")
    store.write_field("v.csv", ScalarField.constant(square16, 1.0))

    assert store.artifacts == ["v.csv", "summary.txt"]


def test_eigen_table_columns_and_floats(store):
    table = SweepTable(beta=1.0, lambda_inf_geometric=0.5, rows=(
        SweepRow(4.0, 0.1 + 0.2, 0.74, 0.24, 120, True),
        SweepRow(8.0, 0.05, 0.69, 0.19, 300, False),
    ))
    path = store.write_eigen_table("eigen_sweep.csv", table)

    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))

    assert rows[0] == EIGEN_COLUMNS
    assert float(rows[1][1]) == 0.1 + 0.2
    assert rows[1][5] == "true" and rows[2][5] == "false"


def test_failed_write_leaves_no_partial_file(store):
    with pytest.raises(RuntimeError):
        with store.writer("roto.csv") as f:
            f.write("p,valor\n")
            raise RuntimeError("fallo a mitad")

    assert not store.path("roto.csv").exists()
    assert "roto.csv" not in store.artifacts


def test_report_lists_artifacts_and_round_trips(store, square16):
    store.write_field("v.csv", limit_maximal_solution(square16, 1.0))
    store.write_table("tabla.csv", ["p", "valor"], [(2.0, 0.5), (4.0, 0.25)])
    store.write_report("# reporte", ReportFormatter().format_artifacts(store.artifacts))

    assert listed_artifacts(store.directory) == ["v.csv", "tabla.csv"]
    assert verify_round_trip(store.directory, square16) == []
    assert verify_round_trip(store.directory) == []


def test_round_trip_reports_missing_and_corrupt_files(store, square16):
    store.write_field("v.csv", limit_maximal_solution(square16, 1.0))
    store.write_table("tabla.csv", ["p", "valor"], [(2.0, 0.5)])
    store.write_report("# reporte", ReportFormatter().format_artifacts(store.artifacts + ["falta.csv"]))
    store.path("tabla.csv").write_text("p,valor\n2.0,abc\n", encoding="utf-8")

    problems = verify_round_trip(store.directory, square16)

    assert any(p.startswith("falta.csv") for p in problems)
    assert any(p.startswith("tabla.csv") for p in problems)
    assert not any(p.startswith("v.csv") for p in problems)


def test_round_trip_detects_field_on_other_domain(store, square16, disk16):
    store.write_field("v.csv", ScalarField.constant(disk16, 1.0))
    store.write_report("# reporte", ReportFormatter().format_artifacts(store.artifacts))

    problems = verify_round_trip(store.directory, square16)

    assert len(problems) == 1 and "DomainMismatch" in problems[0]


def test_round_trip_without_report(tmp_path):
    assert verify_round_trip(tmp_path) == [f"report.txt no existe en {tmp_path}"]
