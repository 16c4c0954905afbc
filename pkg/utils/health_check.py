"""
Monitor de recursos del proceso (memoria y CPU) alrededor de cada tarea
"""

import gc
import os
import time
import logging
from contextlib import contextmanager
from typing import Any, Dict, Optional

import psutil

from config.settings import LabConfig

logger = logging.getLogger(__name__)


class ResourceMonitor:
    """Muestrea memoria RSS y tiempo de CPU; solo escribe en el log"""

    def __init__(self, config: Optional[LabConfig] = None):
        self.config = config or LabConfig()
        self.memory_warning_threshold = self.config.MEMORY_WARNING_PERCENT
        self.memory_critical_threshold = max(self.memory_warning_threshold, 90.0)
        self.process = psutil.Process(os.getpid())
        self.samples: Dict[str, Dict[str, float]] = {}
        self.alerts_sent = 0

    def sample(self) -> Dict[str, float]:
        """Toma una muestra instantánea del proceso"""
        memory_info = self.process.memory_info()
        cpu = self.process.cpu_times()
        return {
            'rss_mb': memory_info.rss / 1024 / 1024,
            'memory_percent': self.process.memory_percent(),
            'cpu_seconds': cpu.user + cpu.system,
            'wall': time.perf_counter(),
        }

    def _check_memory_usage(self, memory_percent: float):
        if memory_percent > self.memory_critical_threshold:
            logger.critical(f"Memoria crítica: {memory_percent:.1f}%")
            self.alerts_sent += 1
            collected = gc.collect()
            logger.info(f"Limpieza forzada: {collected} objetos recolectados")
        elif memory_percent > self.memory_warning_threshold:
            logger.warning(f"Memoria alta: {memory_percent:.1f}%")
            self.alerts_sent += 1
            gc.collect()

    @contextmanager
    def track(self, label: str):
        """Registra memoria y tiempos antes y después del bloque"""
        before = self.sample()
        try:
            yield
        finally:
            after = self.sample()
            stats = {
                'wall_seconds': after['wall'] - before['wall'],
                'cpu_seconds': after['cpu_seconds'] - before['cpu_seconds'],
                'rss_mb': after['rss_mb'],
                'rss_delta_mb': after['rss_mb'] - before['rss_mb'],
            }
            self.samples[label] = stats
            logger.info(
                f"Recursos [{label}] - "
                f"Tiempo: {stats['wall_seconds']:.2f}s, "
                f"CPU: {stats['cpu_seconds']:.2f}s, "
                f"Memoria: {stats['rss_mb']:.1f}MB ({stats['rss_delta_mb']:+.1f}MB)"
            )
            self._check_memory_usage(after['memory_percent'])

    def get_health_report(self) -> Dict[str, Any]:
        """Reporte completo de recursos (para consola, nunca para archivos de resultados)"""
        try:
            current = self.sample()
            if current['memory_percent'] > self.memory_critical_threshold:
                status = 'critical'
            elif current['memory_percent'] > self.memory_warning_threshold:
                status = 'warning'
            else:
                status = 'healthy'
            return {
                'status': status,
                'memory': {'percent': current['memory_percent'], 'rss_mb': current['rss_mb']},
                'alerts_sent': self.alerts_sent,
                'tasks': dict(self.samples),
            }
        except Exception as e:
            logger.error(f"Error generando reporte de recursos: {e}")
            return {'status': 'error', 'error': str(e)}
