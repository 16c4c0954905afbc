"""
Ejecutor de trabajos independientes con paralelismo acotado por ROBIN_LAB_THREADS
"""

import gc
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple

from config.settings import LabConfig
from utils.error_handler import ErrorHandler

logger = logging.getLogger(__name__)


@dataclass
class TaskOutcome:
    """Resultado de un trabajo; `error` queda en None si terminó bien"""

    name: str
    value: Any = None
    error: Optional[BaseException] = None
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.error is None


class TaskRunner:
    """Ejecuta trabajos con nombre y devuelve los resultados en orden de envío"""

    def __init__(self, config: Optional[LabConfig] = None, max_workers: Optional[int] = None):
        self.config = config or LabConfig()
        self.max_workers = max(1, max_workers or self.config.THREADS)

    def _safe_run(self, name: str, task_func: Callable[[], Any]) -> TaskOutcome:
        """Ejecuta una tarea de forma segura; la excepción queda en el resultado"""
        start = time.perf_counter()
        try:
            value = task_func()
            return TaskOutcome(name=name, value=value, seconds=time.perf_counter() - start)
        except MemoryError as e:
            ErrorHandler.handle_memory_error()
            return TaskOutcome(name=name, error=e, seconds=time.perf_counter() - start)
        except Exception as e:
            logger.error(f"Error ejecutando tarea {name}: {e}")
            ErrorHandler.log_solver_error(name, e)
            return TaskOutcome(name=name, error=e, seconds=time.perf_counter() - start)
        finally:
            # Limpieza ligera después de cada tarea
            gc.collect()

    def run_all(self, tasks: Sequence[Tuple[str, Callable[[], Any]]]) -> List[TaskOutcome]:
        """Lanza todas las tareas; el orden de salida es el de `tasks`"""
        if not tasks:
            return []
        if self.max_workers == 1:
            return [self._safe_run(name, func) for name, func in tasks]

        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            futures = [pool.submit(self._safe_run, name, func) for name, func in tasks]
            outcomes = [future.result() for future in futures]
        logger.debug(f"{len(outcomes)} tareas completadas con {self.max_workers} hilos")
        return outcomes
