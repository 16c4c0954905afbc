"""
Almacén de artefactos de una ejecución: results/<nombre>/ con tablas CSV,
campos, report.txt y summary.txt. Las escrituras se serializan con un lock.
"""

import csv
import logging
import threading
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

from numerics.fields import ScalarField, load_field, save_field
from utils.error_handler import LabError

logger = logging.getLogger(__name__)

EIGEN_COLUMNS = ["p", "lambda_p", "lambda_root", "gap", "iters", "converged"]
POISSON_COLUMNS = ["p", "j_value", "residual_norm", "sup_gap", "envelope_violation", "iters", "converged"]
FIELD_COLUMNS = ["ix", "iy", "value"]

REPORT_NAME = "report.txt"
ARTIFACT_PREFIX = "artifact = "


def _cell(value) -> str:
    """Valor de celda CSV; los float con repr para recuperarlos bit a bit"""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_cell(raw: str):
    if raw in ("true", "false"):
        return raw == "true"
    return float(raw)


class ArtifactStore:
    """Directorio de resultados con registro ordenado de artefactos"""

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)
        self._lock = threading.Lock()
        self._artifacts: List[str] = []

    def initialize(self) -> bool:
        """Crea el directorio de resultados"""
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            logger.info(f"Directorio de resultados: {self.directory}")
            return True
        except OSError as e:
            logger.error(f"Error creando directorio de resultados {self.directory}: {e}")
            return False

    @property
    def artifacts(self) -> List[str]:
        with self._lock:
            return list(self._artifacts)

    def path(self, name: str) -> Path:
        return self.directory / name

    def _register(self, name: str):
        if name not in self._artifacts:
            self._artifacts.append(name)

    @contextmanager
    def writer(self, name: str):
        """Abre un artefacto para escritura; si falla se elimina el archivo parcial"""
        target = self.path(name)
        handle = None
        with self._lock:
            try:
                handle = open(target, "w", newline="", encoding="utf-8")
                yield handle
                handle.close()
                self._register(name)
            except Exception:
                if handle is not None:
                    handle.close()
                target.unlink(missing_ok=True)
                logger.error(f"Error escribiendo artefacto {name}")
                raise

    def write_table(self, name: str, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
        with self.writer(name) as f:
            writer = csv.writer(f)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
        logger.debug(f"Tabla {name} escrita")
        return self.path(name)

    def write_eigen_table(self, name: str, table) -> Path:
        rows = [
            (float(r.p), float(r.lambda_p), float(r.lambda_root), float(r.gap), int(r.iterations), bool(r.converged))
            for r in table.rows
        ]
        return self.write_table(name, EIGEN_COLUMNS, rows)

    def write_poisson_table(self, name: str, table) -> Path:
        rows = [
            (float(r.p), float(r.j_value), float(r.residual_norm), float(r.sup_gap),
             float(r.envelope_violation), int(r.iterations), bool(r.converged))
            for r in table.rows
        ]
        return self.write_table(name, POISSON_COLUMNS, rows)

    def write_field(self, name: str, w: ScalarField) -> Path:
        with self._lock:
            path = save_field(self.path(name), w)
            self._register(name)
        return path

    def write_text(self, name: str, text: str) -> Path:
        with self.writer(name) as f:
            f.write(text if text.endswith("\n") else text + "\n")
        return self.path(name)

    def write_report(self, body: str, artifact_block: str) -> Path:
        """report.txt: cuerpo del reporte seguido de la lista de artefactos"""
        return self.write_text(REPORT_NAME, body.rstrip("\n") + "\n\n" + artifact_block)


def listed_artifacts(directory: Union[str, Path]) -> List[str]:
    """Artefactos nombrados en report.txt"""
    report = Path(directory) / REPORT_NAME
    names = []
    for line in report.read_text(encoding="utf-8").splitlines():
        if line.startswith(ARTIFACT_PREFIX):
            names.append(line[len(ARTIFACT_PREFIX):].strip())
    return names


def _check_csv(path: Path, dom) -> Optional[str]:
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    if not rows:
        return "CSV vacío"
    header, body = rows[0], rows[1:]
    if any(len(row) != len(header) for row in body):
        return "filas con número de columnas distinto de la cabecera"
    if header == FIELD_COLUMNS:
        if dom is not None:
            load_field(path, dom)
            return None
        for row in body:
            int(row[0]), int(row[1]), float(row[2])
        return None
    for row in body:
        for raw in row:
            _parse_cell(raw)
    return None


def verify_round_trip(directory: Union[str, Path], dom=None) -> List[str]:
    """Cada artefacto listado en report.txt existe y se vuelve a leer; devuelve los problemas"""
    directory = Path(directory)
    report = directory / REPORT_NAME
    if not report.exists():
        return [f"{REPORT_NAME} no existe en {directory}"]

    problems = []
    for name in listed_artifacts(directory):
        path = directory / name
        if not path.exists():
            problems.append(f"{name}: no existe")
            continue
        try:
            if path.suffix == ".csv":
                issue = _check_csv(path, dom)
            else:
                issue = None if path.read_text(encoding="utf-8").strip() else "archivo vacío"
        except (ValueError, OSError, UnicodeDecodeError) as e:
            issue = str(e)
        except LabError as e:
            issue = f"{type(e).__name__}: {e}"
        if issue:
            problems.append(f"{name}: {issue}")

    if problems:
        logger.warning(f"Verificación de artefactos en {directory}: {len(problems)} problemas")
    else:
        logger.info(f"Artefactos de {directory} verificados")
    return problems
