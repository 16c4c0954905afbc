#!/usr/bin/env python3
"""
Laboratorio del límite p → ∞ para el p-Laplaciano con condición de Robin
Descripción: barridos de autovalores y de p-Poisson, problema límite,
dicotomía de unicidad y suite de invariantes reproducible
"""

import os
import sys
import logging
import argparse
from pathlib import Path
from typing import List, Optional

# Añadir el directorio actual al path para imports
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config.settings import LabConfig, setup_logging
from config.run_config import load_run_config
from core.lab_manager import EXIT_CONFIG, LabManager
from utils.error_handler import ConfigError, ErrorHandler

logger = logging.getLogger(__name__)


class RobinLab:
    """Clase principal del laboratorio"""

    def __init__(self):
        self.config = LabConfig()
        self.lab_manager: Optional[LabManager] = None

    def initialize(self) -> bool:
        """Valida la configuración de proceso y prepara logging y gestor"""
        ok, message = self.config.validate()
        if not ok:
            print(f"Error: {message}")
            return False

        setup_logging(self.config)
        self.lab_manager = LabManager(self.config)
        logger.info(f"Laboratorio inicializado (hilos: {self.config.THREADS})")
        return True

    def run_config(self, path: str) -> int:
        try:
            run = load_run_config(path)
        except ConfigError as e:
            ErrorHandler.log_config_error(e)
            print(f"Error de configuración: {e}")
            return EXIT_CONFIG
        logger.info(f"Ejecutando '{run.name}' en modo {run.mode}")
        return self.lab_manager.run(run)

    def run_checks(self, seed: int) -> int:
        from checks.check_suite import check_suite
        output_dir = Path(self.config.RESULTS_DIR) / f"check-seed{seed}"
        return check_suite(seed, output_dir=output_dir, config=self.config)

    def show_report(self, results_dir: str) -> int:
        return self.lab_manager.show_report(Path(results_dir))

    def shutdown(self):
        """Cierra ordenadamente: vacía los handlers de logging"""
        for handler in logging.getLogger().handlers:
            try:
                handler.flush()
            except Exception as e:
                print(f"Error durante shutdown: {e}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robin-lab",
        description="Laboratorio del límite p → ∞ del p-Laplaciano con condición de Robin",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="ejecuta un archivo de configuración")
    run.add_argument("config", help="ruta al archivo .cfg")

    check = sub.add_parser("check", help="corre la suite de invariantes")
    check.add_argument("--seed", type=int, default=0, help="semilla de las verificaciones aleatorias")

    report = sub.add_parser("report", help="muestra el reporte de una ejecución")
    report.add_argument("results_dir", help="directorio results/<nombre>")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Función principal"""
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", 0) < 0:
        print("Error: --seed debe ser no negativo")
        return EXIT_CONFIG

    app = RobinLab()
    if not app.initialize():
        return EXIT_CONFIG

    try:
        if args.command == "run":
            return app.run_config(args.config)
        if args.command == "check":
            return app.run_checks(args.seed)
        return app.show_report(args.results_dir)
    except KeyboardInterrupt:
        logger.info("Ejecución interrumpida por el usuario")
        print("\nEjecución interrumpida")
        return EXIT_CONFIG
    finally:
        app.shutdown()


if __name__ == "__main__":
    sys.exit(main())
