"""
Configuración de una ejecución: archivo de texto con secciones `[seccion]`
y líneas `clave = valor`; los comentarios empiezan con `#`
"""

import re
import math
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

from config.settings import LabConfig, LabConstants
from utils.error_handler import ConfigError, ErrorHandler
from utils.validator import InputValidator

logger = logging.getLogger(__name__)

_SECTION = re.compile(r'^\[\s*([A-Za-z_]+)\s*\]$')
_ENTRY = re.compile(r'^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$')

SHAPE_PARAMS = ("radius", "side", "width", "height", "size", "inner", "outer")

SCHEMA = {
    "run": ("name", "mode", "seed"),
    "domain": ("shape", "mask_file", "h") + SHAPE_PARAMS,
    "problem": ("beta", "p_list", "f", "eps"),
    "solver": ("tol", "max_iter", "strict"),
    "output": ("directory",),
}

SWEEP_MODES = ("eigen-sweep", "poisson-sweep")


@dataclass
class RunConfig:
    """Una ejecución completa del laboratorio"""

    name: str
    mode: str
    seed: int = 0
    shape: Optional[str] = None
    shape_params: dict = field(default_factory=dict)
    mask_file: Optional[Path] = None
    h: Optional[float] = None
    beta: float = 1.0
    p_list: list = field(default_factory=list)
    source: str = "const(1)"
    eps: Optional[float] = None
    tol: Optional[float] = None
    max_iter: Optional[int] = None
    strict: bool = False
    directory: Path = field(default_factory=lambda: Path(LabConfig().RESULTS_DIR))
    source_path: Optional[Path] = None

    @property
    def output_dir(self) -> Path:
        return self.directory / self.name


def _read_entries(text: str) -> dict:
    """{(sección, clave): (valor, línea)} con rechazo de claves desconocidas"""
    entries = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        header = _SECTION.match(line)
        if header:
            section = header.group(1).lower()
            if section not in SCHEMA:
                raise ConfigError(section, f"sección desconocida [{section}]", lineno)
            continue

        entry = _ENTRY.match(line)
        if not entry:
            raise ConfigError("?", f"línea no reconocida: {line!r}", lineno)
        key, value = entry.group(1).lower(), entry.group(2).strip()
        if section is None:
            raise ConfigError(key, "clave fuera de cualquier sección", lineno)
        if key not in SCHEMA[section]:
            raise ConfigError(f"{section}.{key}", "clave desconocida", lineno)
        if (section, key) in entries:
            raise ConfigError(f"{section}.{key}", "clave duplicada", lineno)
        entries[(section, key)] = (value, lineno)
    return entries


def _take(entries: dict, section: str, key: str, parser: Callable, check: Callable = None,
          message: str = "valor inválido", default=None, required: bool = False):
    if (section, key) not in entries:
        if required:
            raise ConfigError(f"{section}.{key}", "clave obligatoria ausente")
        return default
    raw, lineno = entries[(section, key)]
    value = parser(raw)
    if value is None or (check is not None and not check(value)):
        ErrorHandler.log_validation_error(f"{section}.{key}", raw, message)
        raise ConfigError(f"{section}.{key}", f"{message}: {raw!r}", lineno)
    return value


def parse_run_config(text: str, base_dir: Optional[Path] = None) -> RunConfig:
    """Construye y valida un RunConfig a partir del texto del archivo"""
    v = InputValidator
    entries = _read_entries(text)
    base_dir = Path(base_dir) if base_dir is not None else Path.cwd()

    name = _take(entries, "run", "name", v.sanitize_text, v.is_valid_run_name,
                 "nombre inválido (letras, dígitos, '-', '_' y '.')", required=True)
    mode = _take(entries, "run", "mode", lambda s: s.strip().lower(),
                 lambda m: m in LabConstants.RUN_MODES,
                 f"modo desconocido (opciones: {', '.join(LabConstants.RUN_MODES)})", required=True)
    seed = _take(entries, "run", "seed", v.parse_int, lambda s: s >= 0,
                 "la semilla debe ser un entero no negativo", default=0)

    config = RunConfig(name=name, mode=mode, seed=seed)

    # Dominio
    shape = _take(entries, "domain", "shape", lambda s: s.strip().lower(),
                  lambda s: s in LabConstants.DOMAIN_SHAPES,
                  f"forma desconocida (opciones: {', '.join(LabConstants.DOMAIN_SHAPES)})")
    mask_file = _take(entries, "domain", "mask_file", lambda s: s.strip() or None)
    if shape and mask_file:
        _, lineno = entries[("domain", "mask_file")]
        raise ConfigError("domain.mask_file", "usar shape o mask_file, no ambos", lineno)
    config.shape = shape
    config.mask_file = (base_dir / mask_file) if mask_file else None
    config.h = _take(entries, "domain", "h", v.parse_float, v.is_valid_h, "h debe ser positivo")
    for key in SHAPE_PARAMS:
        value = _take(entries, "domain", key, v.parse_float, lambda x: 0 < x < math.inf,
                      "el parámetro de forma debe ser positivo")
        if value is not None:
            config.shape_params[key] = value

    if mode != "check":
        if not (shape or mask_file):
            raise ConfigError("domain.shape", "se requiere shape o mask_file")
        if shape and config.h is None:
            raise ConfigError("domain.h", "clave obligatoria ausente")

    # Problema
    config.beta = _take(entries, "problem", "beta", v.parse_float, v.is_valid_beta,
                        "beta debe ser positivo y finito", default=1.0,
                        required=mode != "check")
    config.p_list = _take(entries, "problem", "p_list", v.parse_p_list, None,
                          f"p_list debe ser creciente con 1 < p ≤ {LabConstants.MAX_FINITE_P:g}",
                          default=[], required=mode in SWEEP_MODES)
    config.source = _take(entries, "problem", "f", str.strip, v.is_valid_source_spec,
                          "fuente desconocida", default="const(1)")
    if config.source.endswith(".csv"):
        config.source = str(base_dir / config.source)
    config.eps = _take(entries, "problem", "eps", v.parse_float, lambda e: 0 < e < 1,
                       "eps debe estar en (0, 1)")
    if config.source == "ball_indicator":
        if config.eps is None:
            raise ConfigError("problem.eps", "ball_indicator sin radio requiere eps")
        config.source = f"ball_indicator({config.eps!r})"

    # Solver
    config.tol = _take(entries, "solver", "tol", v.parse_float, lambda t: 0 < t < 1,
                       "tol debe estar en (0, 1)")
    config.max_iter = _take(entries, "solver", "max_iter", v.parse_int, lambda n: n > 0,
                            "max_iter debe ser positivo")
    config.strict = _take(entries, "solver", "strict", v.parse_bool, None,
                          "se esperaba true/false", default=False)

    directory = _take(entries, "output", "directory", lambda s: s.strip() or None)
    if directory:
        config.directory = Path(directory)

    logger.debug(f"Configuración '{config.name}' cargada: modo={config.mode}")
    return config


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Lee el archivo; las rutas relativas se resuelven desde su directorio"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError("archivo", f"no se pudo leer {path}: {e}")
    config = parse_run_config(text, base_dir=path.parent)
    config.source_path = path
    return config
