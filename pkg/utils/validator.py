"""
Validador de los valores leídos de los archivos de configuración
"""

import re
import math
from typing import Optional

from config.settings import LabConstants


class InputValidator:
    """Clase para validar todas las entradas de configuración"""

    @staticmethod
    def parse_float(value_str: str) -> Optional[float]:
        """Convierte a float aceptando `inf`; None si no es numérico"""
        if not value_str or not isinstance(value_str, str):
            return None
        cleaned = value_str.strip().lower()
        if cleaned in ("inf", "infinity", "∞"):
            return math.inf
        try:
            value = float(cleaned)
        except ValueError:
            return None
        return value if math.isfinite(value) else None

    @staticmethod
    def parse_int(value_str: str) -> Optional[int]:
        if not value_str or not re.match(r'^\s*[+-]?\d+\s*$', value_str):
            return None
        return int(value_str)

    @staticmethod
    def parse_bool(value_str: str) -> Optional[bool]:
        cleaned = (value_str or "").strip().lower()
        if cleaned in ("true", "yes", "1", "si", "sí"):
            return True
        if cleaned in ("false", "no", "0"):
            return False
        return None

    @staticmethod
    def is_valid_beta(beta: Optional[float]) -> bool:
        """β > 0 y finito"""
        return beta is not None and 0 < beta < math.inf

    @staticmethod
    def is_valid_h(h: Optional[float]) -> bool:
        return h is not None and 0 < h < math.inf

    @staticmethod
    def parse_p_list(value_str: str) -> Optional[list[float]]:
        """Lista separada por comas, estrictamente creciente y con p > 1"""
        if not value_str or not isinstance(value_str, str):
            return None
        values = [InputValidator.parse_float(part) for part in value_str.split(",")]
        if not values or any(v is None for v in values):
            return None
        if any(v <= 1 or v > LabConstants.MAX_FINITE_P for v in values):
            return None
        if any(b <= a for a, b in zip(values, values[1:])):
            return None
        return values

    @staticmethod
    def is_valid_grid_size(n_vertices: int) -> bool:
        return LabConstants.MIN_GRID_VERTICES <= n_vertices <= LabConstants.MAX_GRID_VERTICES

    @staticmethod
    def is_valid_run_name(name: str) -> bool:
        """Nombre usable como directorio: letras, dígitos, '-', '_' y '.'"""
        if not name or not isinstance(name, str):
            return False
        return re.match(r'^[A-Za-z0-9][A-Za-z0-9_.-]{0,63}$', name) is not None

    @staticmethod
    def is_valid_source_spec(spec: str) -> bool:
        """`const(c)`, `ball_indicator(eps)`, `annulus_indicator(r0,r1)` o un CSV de campo.

        `const` y `ball_indicator` sin argumentos toman 1 y `problem.eps`.
        """
        if not spec or not isinstance(spec, str):
            return False
        spec = spec.strip()
        if spec.endswith(".csv"):
            return True
        return re.match(
            r'^(const(\(\s*[0-9.eE+-]+\s*\))?|ball_indicator(\(\s*[0-9.eE+-]+\s*\))?'
            r'|annulus_indicator\(\s*[0-9.eE+-]+\s*,\s*[0-9.eE+-]+\s*\))$',
            spec,
        ) is not None

    @staticmethod
    def sanitize_text(text: str, max_length: int = None) -> str:
        """Elimina caracteres de control de un texto"""
        if not text:
            return ""
        sanitized = re.sub(r'[\x00-\x1f\x7f-\x9f]', '', text)
        if max_length and len(sanitized) > max_length:
            sanitized = sanitized[:max_length].strip()
        return sanitized.strip()
