"""
Gestor principal del laboratorio: construye dominio y fuente a partir de la
configuración, despacha el modo y traduce el resultado a un código de salida
"""

import gc
import logging
import math
from pathlib import Path
from typing import Callable, Dict, Optional

from config.run_config import RunConfig
from config.settings import LabConfig
from handlers.mode_handlers import ModeHandlers, ModeOutcome
from numerics.domain import Domain, build_grid_domain, inradius, lambda_infinity
from numerics.fields import ScalarField, load_field
from numerics.poisson import make_source
from numerics.shapes import build_named_domain, read_mask_file
from storage.artifact_store import ArtifactStore, REPORT_NAME, verify_round_trip
from utils.error_handler import (
    ConfigError,
    DomainError,
    ErrorHandler,
    FieldError,
    SolverError,
)
from utils.health_check import ResourceMonitor
from utils.report_formatter import ReportFormatter
from utils.validator import InputValidator

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3


class LabManager:
    """Clase que gestiona una ejecución completa del laboratorio"""

    def __init__(self, config: Optional[LabConfig] = None):
        self.config = config or LabConfig()
        self.monitor = ResourceMonitor(self.config)
        self.formatter = ReportFormatter()
        self.store: Optional[ArtifactStore] = None
        self.mode_handlers: Optional[ModeHandlers] = None

    # Construcción de entradas

    def build_domain(self, run: RunConfig) -> Domain:
        """Dominio por nombre de forma o desde un archivo de máscara"""
        try:
            if run.mask_file is not None:
                mask, h_file = read_mask_file(run.mask_file)
                if run.h is not None and not math.isclose(run.h, h_file, rel_tol=1e-12):
                    raise ConfigError("domain.h", f"h={run.h:g} no coincide con h={h_file:g} del archivo")
                dom = build_grid_domain(mask, h_file)
            else:
                dom = build_named_domain(run.shape, run.h, **run.shape_params)
        except (ValueError, OSError) as e:
            raise ConfigError("domain.shape" if run.shape else "domain.mask_file", str(e))
        except DomainError as e:
            raise ConfigError("domain", str(e))

        if not InputValidator.is_valid_grid_size(max(dom.shape)):
            raise ConfigError("domain.h", f"malla de {dom.shape[0]}x{dom.shape[1]} vértices fuera de rango")
        return dom

    def build_source(self, run: RunConfig, dom: Domain) -> ScalarField:
        """Fuente f por generador o desde un CSV de campo"""
        try:
            if run.source.endswith(".csv"):
                return load_field(run.source, dom)
            return make_source(dom, run.source)
        except (ValueError, OSError, FieldError) as e:
            raise ConfigError("problem.f", str(e))

    def _domain_label(self, run: RunConfig) -> str:
        if run.mask_file is not None:
            return f"mask_file {run.mask_file.name}"
        params = ", ".join(f"{k}={v:g}" for k, v in sorted(run.shape_params.items()))
        return f"{run.shape}({params})" if params else run.shape

    def _dispatch(self) -> Dict[str, Callable]:
        return {
            "eigen-sweep": self.mode_handlers.handle_eigen_sweep,
            "poisson-sweep": self.mode_handlers.handle_poisson_sweep,
            "limit-solve": self.mode_handlers.handle_limit_solve,
            "uniqueness": self.mode_handlers.handle_uniqueness,
        }

    # Ejecución

    def run(self, run: RunConfig) -> int:
        """Ejecuta el modo configurado; devuelve el código de salida"""
        if run.mode == "check":
            from checks.check_suite import check_suite
            return check_suite(run.seed, output_dir=run.output_dir, config=self.config)

        try:
            dom = self.build_domain(run)
        except ConfigError as e:
            ErrorHandler.log_config_error(e)
            print(f"Error de configuración: {e}")
            return EXIT_CONFIG

        self.store = ArtifactStore(run.output_dir)
        if not self.store.initialize():
            return EXIT_CONFIG
        self.mode_handlers = ModeHandlers(self)

        outcome = ModeOutcome()
        try:
            with self.monitor.track(run.mode):
                self._dispatch()[run.mode](run, dom, outcome)
        except ConfigError as e:
            ErrorHandler.log_config_error(e)
            print(f"Error de configuración: {e}")
            return EXIT_CONFIG
        except SolverError as e:
            ErrorHandler.log_solver_error(run.mode, e)
            outcome.nonconverged = True
            outcome.sections.append(f"## Solver\nerror = {type(e).__name__}: {e}")
        except MemoryError:
            ErrorHandler.handle_memory_error()
            raise
        finally:
            gc.collect()

        code = self._finish(run, dom, outcome)
        health = self.formatter.format_health(self.monitor.get_health_report())
        print(health)
        logger.info(health)
        print(self.formatter.format_exit(code))
        return code

    def _finish(self, run: RunConfig, dom: Domain, outcome: ModeOutcome) -> int:
        """Escribe report.txt, comprueba los artefactos y decide el código de salida"""
        beta = run.beta
        body = [
            self.formatter.format_header(run.name, run.mode, self._domain_label(run), dom.h, beta),
            self.formatter.format_geometry(
                dom.n_vertices, dom.faces.shape[0], dom.area, dom.perimeter,
                inradius(dom), lambda_infinity(dom, beta),
            ),
        ]
        body += outcome.sections
        if outcome.assertions:
            body.append(self.formatter.format_assertions(outcome.assertions))

        self.store.write_report("\n\n".join(body), self.formatter.format_artifacts(self.store.artifacts))
        problems = verify_round_trip(self.store.directory, dom)
        for problem in problems:
            logger.error(f"Artefacto inválido: {problem}")

        if outcome.nonconverged:
            return EXIT_NONCONVERGED
        if problems or not outcome.passed:
            return EXIT_ASSERTION
        return EXIT_OK

    def show_report(self, results_dir: Path) -> int:
        """Imprime report.txt y verifica que sus artefactos se puedan releer"""
        results_dir = Path(results_dir)
        report = results_dir / REPORT_NAME
        if not report.exists():
            print(f"No existe {report}")
            return EXIT_CONFIG
        print(report.read_text(encoding="utf-8"))
        problems = verify_round_trip(results_dir)
        for problem in problems:
            print(f"Artefacto inválido: {problem}")
        return EXIT_ASSERTION if problems else EXIT_OK
