"""
Generadores de máscaras (disco, cuadrado, rectángulo, L, anillo, aleatorias)
y lectura/escritura de máscaras en formato de mapa de bits P1
"""

from __future__ import annotations

import math
import logging
from pathlib import Path
from typing import Union

import numpy as np
from scipy import ndimage

from numerics.domain import Domain, build_grid_domain
from utils.error_handler import ConfigError

logger = logging.getLogger(__name__)

# Holgura para incluir vértices sobre curvas exactas
_EPS = 1e-9


def _centered_axes(extent: float, h: float) -> tuple[np.ndarray, int]:
    half = int(math.ceil(extent / h - _EPS)) + 1
    return h * np.arange(-half, half + 1), half


def disk_domain(radius: float, h: float) -> Domain:
    """Disco de radio `radius` centrado en el origen"""
    axis, half = _centered_axes(radius, h)
    x, y = np.meshgrid(axis, axis, indexing="ij")
    mask = x * x + y * y <= radius * radius * (1.0 + _EPS)
    return build_grid_domain(mask, h, origin=(-half * h, -half * h))


def annulus_domain(inner: float, outer: float, h: float) -> Domain:
    """Anillo inner ≤ |x| ≤ outer centrado en el origen"""
    if not 0 < inner < outer:
        raise ValueError(f"Se requiere 0 < inner < outer, recibido ({inner}, {outer})")
    axis, half = _centered_axes(outer, h)
    x, y = np.meshgrid(axis, axis, indexing="ij")
    rr = x * x + y * y
    mask = (rr <= outer * outer * (1.0 + _EPS)) & (rr >= inner * inner * (1.0 - _EPS))
    return build_grid_domain(mask, h, origin=(-half * h, -half * h))


def _steps(length: float, h: float) -> int:
    steps = int(round(length / h))
    if steps < 1 or abs(steps * h - length) > 1e-9 * max(1.0, length):
        raise ValueError(f"La longitud {length} no es múltiplo de h={h}")
    return steps


def rectangle_domain(width: float, height: float, h: float) -> Domain:
    """Rectángulo [0, width] × [0, height]"""
    mask = np.ones((_steps(width, h) + 1, _steps(height, h) + 1), dtype=bool)
    return build_grid_domain(mask, h)


def square_domain(side: float, h: float) -> Domain:
    """Cuadrado [0, side]²"""
    return rectangle_domain(side, side, h)


def l_shape_domain(h: float, size: float = 2.0) -> Domain:
    """L = [0, size]² \\ (size/2, size]²"""
    n = _steps(size, h)
    half = size / 2.0
    coords = h * np.arange(n + 1)
    x, y = np.meshgrid(coords, coords, indexing="ij")
    mask = ~((x > half + _EPS) & (y > half + _EPS))
    return build_grid_domain(mask, h)


def random_connected_mask(rng: np.random.Generator, size: int = 33) -> np.ndarray:
    """Unión aleatoria de discos, reducida a su mayor componente de celdas"""
    coords = np.arange(size)
    x, y = np.meshgrid(coords, coords, indexing="ij")
    mask = np.zeros((size, size), dtype=bool)
    center = (size - 1) / 2.0
    for _ in range(int(rng.integers(2, 6))):
        cx, cy = center + rng.uniform(-0.25, 0.25, size=2) * size
        radius = rng.uniform(0.12, 0.3) * size
        mask |= (x - cx) ** 2 + (y - cy) ** 2 <= radius ** 2
    mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = False

    cells = mask[:-1, :-1] & mask[1:, :-1] & mask[:-1, 1:] & mask[1:, 1:]
    labels, count = ndimage.label(cells)
    if count > 1:
        sizes = ndimage.sum(cells, labels, index=np.arange(1, count + 1))
        cells = labels == (1 + int(np.argmax(sizes)))

    kept = np.zeros_like(mask)
    kept[:-1, :-1] |= cells
    kept[1:, :-1] |= cells
    kept[:-1, 1:] |= cells
    kept[1:, 1:] |= cells
    return kept


def build_named_domain(name: str, h: float, **params) -> Domain:
    """Construye un dominio por nombre: disk, square, rectangle, l_shape, annulus"""
    builders = {
        "disk": lambda: disk_domain(float(params.get("radius", 1.0)), h),
        "square": lambda: square_domain(float(params.get("side", 1.0)), h),
        "rectangle": lambda: rectangle_domain(float(params.get("width", 2.0)),
                                              float(params.get("height", 1.0)), h),
        "l_shape": lambda: l_shape_domain(h, float(params.get("size", 2.0))),
        "annulus": lambda: annulus_domain(float(params.get("inner", 0.5)),
                                          float(params.get("outer", 1.0)), h),
    }
    if name not in builders:
        raise ValueError(f"Forma de dominio desconocida: {name}")
    dom = builders[name]()
    logger.info(f"Dominio '{name}' construido: h={h}, |Ω|={dom.area:.6f}, {dom.n_vertices} vértices")
    return dom


# Formato P1 + línea `h=<paso>`

def write_mask_file(path: Union[str, Path], mask: np.ndarray, h: float) -> Path:
    """Escribe la máscara como mapa de bits P1 (fila superior = y máxima)"""
    path = Path(path)
    mask = np.asarray(mask, dtype=bool)
    width, height = mask.shape
    lines = ["P1", f"{width} {height}"]
    for row in range(height - 1, -1, -1):
        lines.append(" ".join("1" if v else "0" for v in mask[:, row]))
    lines.append(f"h={h!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_mask_file(path: Union[str, Path]) -> tuple[np.ndarray, float]:
    """Lee una máscara P1 con su línea `h=`; devuelve (máscara[ix, iy], h)"""
    path = Path(path)
    tokens, spacing = [], None
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("h="):
            try:
                spacing = float(line[2:])
            except ValueError:
                raise ConfigError("mask_file", f"valor de h inválido en {path}", lineno)
            continue
        tokens.extend(line.split())

    if not tokens or tokens[0] != "P1":
        raise ConfigError("mask_file", f"{path} no es un mapa de bits P1")
    try:
        width, height = int(tokens[1]), int(tokens[2])
    except (IndexError, ValueError):
        raise ConfigError("mask_file", f"dimensiones inválidas en {path}")

    bits = "".join(tokens[3:])
    if len(bits) != width * height or set(bits) - {"0", "1"}:
        raise ConfigError("mask_file", f"se esperaban {width * height} bits 0/1 en {path}")
    if spacing is None or not spacing > 0:
        raise ConfigError("mask_file", f"falta la línea h=<paso> en {path}")

    rows = np.array([c == "1" for c in bits], dtype=bool).reshape(height, width)
    return rows[::-1].T.copy(), spacing
