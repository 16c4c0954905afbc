"""
Búsqueda de línea de Armijo por retroceso, compartida por los solvers
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from config.settings import LabConstants

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LineSearchStep:
    """Paso aceptado: x nuevo, su valor y el tamaño de paso usado"""

    x: np.ndarray
    value: float
    rate: float
    evaluations: int


def armijo_backtrack(
    objective: Callable[[np.ndarray], float],
    x: np.ndarray,
    value: float,
    grad: np.ndarray,
    direction: np.ndarray,
    rate: float,
    c: float = LabConstants.ARMIJO_C,
    shrink: float = LabConstants.ARMIJO_SHRINK,
    max_backtrack: int = LabConstants.ARMIJO_MAX_BACKTRACK,
    transform: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    slack: float = 0.0,
) -> Optional[LineSearchStep]:
    """Retrocede hasta cumplir f(x + t·d) ≤ f(x) + c·t·⟨g, d⟩.

    `transform` se aplica al punto de prueba antes de evaluarlo (p. ej.
    valor absoluto y normalización). `slack` admite un aumento absoluto del
    objetivo por debajo del redondeo. Devuelve None si `direction` no es de
    descenso o si se agota el retroceso.
    """
    slope = float(np.dot(grad, direction))
    if not slope < 0.0:
        return None

    for attempt in range(1, max_backtrack + 1):
        trial = x + rate * direction
        if transform is not None:
            trial = transform(trial)
        trial_value = objective(trial)
        if np.isfinite(trial_value) and trial_value <= value + c * rate * slope + slack:
            return LineSearchStep(x=trial, value=float(trial_value), rate=rate, evaluations=attempt)
        rate *= shrink

    logger.debug(f"Armijo agotó {max_backtrack} retrocesos (pendiente={slope:.3e})")
    return None


def barzilai_borwein_rate(dx: np.ndarray, dg: np.ndarray, fallback: float) -> float:
    """Paso inicial ⟨s, s⟩/⟨s, y⟩; `fallback` si la curvatura no es positiva"""
    curvature = float(np.dot(dx, dg))
    if curvature <= 0.0 or not np.isfinite(curvature):
        return fallback
    return float(np.dot(dx, dx)) / curvature
