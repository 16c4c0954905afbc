"""
Configuración centralizada del laboratorio
"""

import os
import logging
from dataclasses import dataclass
from typing import Optional


@dataclass
class LabConfig:
    """Configuración de proceso del laboratorio (variables de entorno)"""

    # Paralelismo
    THREADS: int = int(os.getenv("ROBIN_LAB_THREADS", "1"))

    # Configuración de logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE: str = os.getenv("LOG_FILE", "robin_lab.log")
    MAX_LOG_SIZE: int = int(os.getenv("MAX_LOG_SIZE", "10485760"))  # 10MB
    LOG_BACKUP_COUNT: int = int(os.getenv("LOG_BACKUP_COUNT", "5"))

    # Resultados
    RESULTS_DIR: str = os.getenv("RESULTS_DIR", "results")

    # Memoria
    MEMORY_WARNING_PERCENT: float = float(os.getenv("MEMORY_WARNING_PERCENT", "75"))

    def validate(self) -> tuple[bool, Optional[str]]:
        """Valida la configuración"""
        if self.THREADS < 1:
            return False, "ROBIN_LAB_THREADS debe ser mayor o igual a 1"

        if self.LOG_LEVEL.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            return False, f"LOG_LEVEL inválido: {self.LOG_LEVEL}"

        if not 0 < self.MEMORY_WARNING_PERCENT <= 100:
            return False, "MEMORY_WARNING_PERCENT debe estar en (0, 100]"

        return True, None


def setup_logging(config: Optional[LabConfig] = None):
    """Configura el sistema de logging con rotación"""
    from logging.handlers import RotatingFileHandler

    config = config or LabConfig()

    root_logger = logging.getLogger()
    if getattr(root_logger, "_robin_lab_configured", False):
        return

    # Crear directorio de logs si no existe
    log_dir = os.path.dirname(config.LOG_FILE)
    if log_dir and not os.path.exists(log_dir):
        os.makedirs(log_dir)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # Handler para archivo con rotación
    file_handler = RotatingFileHandler(
        config.LOG_FILE,
        maxBytes=config.MAX_LOG_SIZE,
        backupCount=config.LOG_BACKUP_COUNT,
        encoding="utf-8"
    )
    file_handler.setFormatter(formatter)

    # Handler para consola
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)

    root_logger.setLevel(getattr(logging, config.LOG_LEVEL.upper()))
    root_logger.addHandler(file_handler)
    root_logger.addHandler(console_handler)
    root_logger._robin_lab_configured = True

    # Reducir logging de terceros
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
    logging.getLogger("numexpr").setLevel(logging.WARNING)


class LabConstants:
    """Constantes utilizadas en el laboratorio"""

    # Marcas de estado
    SUCCESS = "✅"
    ERROR = "❌"
    WARNING = "⚠️"

    # Modos de ejecución
    RUN_MODES = ["eigen-sweep", "poisson-sweep", "limit-solve", "uniqueness", "check"]

    # Formas de dominio disponibles
    DOMAIN_SHAPES = ["disk", "square", "rectangle", "l_shape", "annulus"]

    # Cresta (eje medial)
    RIDGE_TOL_FACTOR = 1.5          # tol = 1.5 h
    RIDGE_MIN_ANGLE_DEG = 75.0
    RIDGE_SPREAD_FACTOR = 1.3       # separación mínima c·d(x)
    RIDGE_MIN_DEPTH = 3.0           # d(x) ≥ 3h
    RIDGE_GRAD_DROP = 0.9           # verificación cruzada con |∇d|

    # Trazado hacia la cresta
    TRACE_STEP_FACTOR = 0.5         # paso h/2
    TRACE_MIN_GRAD = 0.5

    # Solvers
    EIGEN_TOL = 1e-8
    EIGEN_MAX_ITER = 20000
    POISSON_TOL = 1e-6
    POISSON_MAX_ITER = 2000
    POISSON_STAGE_TOL = 1e-3
    PRECOND_EVERY = 5
    ARMIJO_C = 1e-4
    ARMIJO_SHRINK = 0.5
    ARMIJO_MAX_BACKTRACK = 60
    LINESEARCH_SLACK = 1e-13        # aumento admitido bajo el redondeo
    BB_RESET_AFTER = 3

    # Extensión AMLE
    AMLE_TOL = 1e-10
    AMLE_MAX_ITER = 200000

    # Viscosidad
    RIDGE_COLLAR_CELLS = 2
    BOUNDARY_COLLAR_CELLS = 2
    GRADIENT_FLAT_TOL = 1e-8

    # Unicidad
    WITNESS_FEASIBILITY_FACTOR = 2.0   # violación tolerada 2h
    WITNESS_MIN_GAP_FACTOR = 10.0      # diferencia mínima 10h

    # Suite de verificación
    CHECK_H = 1.0 / 32.0
    CHECK_RANDOM_MASKS = 20

    # Límites de configuración
    MIN_GRID_VERTICES = 3
    MAX_GRID_VERTICES = 1025
    MAX_FINITE_P = 1000.0
