"""
Sistema de manejo de errores del laboratorio
"""

import gc
import logging
import functools
import traceback
from typing import Any, Callable, Optional

logger = logging.getLogger(__name__)


class LabError(Exception):
    """Error base de todo el laboratorio"""


# Dominio

class DomainError(LabError):
    """Errores de construcción o uso de un dominio"""


class EmptyDomain(DomainError):
    """La máscara no contiene ninguna celda interior"""


class DisconnectedComponent(DomainError):
    """Una componente libre no alcanza ningún vértice fijo"""


class DisconnectedDomainWarning(UserWarning):
    """Ω tiene más de una componente conexa (no es un error)"""


# Campos

class FieldError(LabError):
    """Errores sobre campos escalares"""


class ZeroField(FieldError):
    """El campo tiene norma nula y el cociente no está definido"""


class DomainMismatch(FieldError):
    """Los campos viven en dominios distintos"""


class NonpositiveField(FieldError):
    """Se esperaba un campo estrictamente positivo"""


# Solvers

class SolverError(LabError):
    """Error de un solver; conserva el resultado parcial"""

    def __init__(self, message: str, result: Any = None):
        super().__init__(message)
        self.result = result


class NotConverged(SolverError):
    """Se alcanzó max_iter sin cumplir la tolerancia"""


class LineSearchStall(SolverError):
    """La búsqueda de línea no encontró descenso suficiente"""


class NoProgress(SolverError):
    """El trazado no puede avanzar (|∇d| degenerado en el punto inicial)"""


class WitnessConstructionFailed(LabError):
    """El testigo de no unicidad viola las restricciones"""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


# Configuración

class ConfigError(LabError):
    """Error de configuración con campo y línea"""

    def __init__(self, field: str, message: str, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = f"línea {line}, " if line is not None else ""
        super().__init__(f"{location}campo '{field}': {message}")


def handle_errors(func: Callable) -> Callable:
    """Decorador para manejar errores de forma consistente"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        try:
            return func(*args, **kwargs)
        except Exception as e:
            logger.error(f"Error en {func.__name__}: {str(e)}")
            logger.error(f"Traceback: {traceback.format_exc()}")

            # Limpiar memoria en caso de error
            gc.collect()
            raise

    return wrapper


class ErrorHandler:
    """Clase para manejo centralizado de errores"""

    @staticmethod
    def log_solver_error(operation: str, error: Exception):
        """Log específico para errores de solvers"""
        result = getattr(error, "result", None)
        iterations = getattr(result, "iterations", None)
        logger.error(f"Solver error in {operation}: {str(error)} (iteraciones={iterations})")
        logger.debug(f"Traceback: {traceback.format_exc()}")

    @staticmethod
    def log_config_error(error: ConfigError):
        """Log específico para errores de configuración"""
        logger.error(f"Config error: {error}")

    @staticmethod
    def log_validation_error(field: str, value: Any, error: str):
        """Log específico para errores de validación"""
        logger.warning(f"Validation error for {field} with value '{value}': {error}")

    @staticmethod
    def handle_memory_error():
        """Manejo específico para errores de memoria"""
        logger.critical("Memory error detected, attempting cleanup")
        gc.collect()
