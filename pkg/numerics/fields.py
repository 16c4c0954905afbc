"""
Campos escalares sobre el dominio, operadores discretos y normas p estabilizadas.

Toda acumulación de potencias p pasa por `_scaled_log_sum`: se escala por el
máximo y la suma se toma con logsumexp, así que p → ∞ no desborda.
"""

from __future__ import annotations

import csv
import math
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Callable, NamedTuple, Union

import numpy as np
from scipy.special import logsumexp

from utils.error_handler import DomainMismatch, FieldError, ZeroField

if TYPE_CHECKING:
    from numerics.domain import Domain

logger = logging.getLogger(__name__)

# Por debajo de este exponente las sumas directas no desbordan
RAW_P_LIMIT = 60.0


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Un valor real por vértice interior del dominio"""

    dom: "Domain"
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.dom.n_vertices,):
            raise FieldError(
                f"El campo tiene forma {values.shape}, se esperaba ({self.dom.n_vertices},)"
            )
        if not np.all(np.isfinite(values)):
            raise FieldError("El campo contiene valores no finitos")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, dom: "Domain", value: float) -> "ScalarField":
        return cls(dom, np.full(dom.n_vertices, float(value)))

    @classmethod
    def from_function(cls, dom: "Domain", fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "ScalarField":
        x, y = dom.coords[:, 0], dom.coords[:, 1]
        return cls(dom, np.broadcast_to(fn(x, y), x.shape))

    def with_values(self, values: np.ndarray) -> "ScalarField":
        return ScalarField(self.dom, values)

    def scaled(self, factor: float) -> "ScalarField":
        return ScalarField(self.dom, factor * self.values)

    def __neg__(self) -> "ScalarField":
        return self.scaled(-1.0)

    def same_domain(self, other: "ScalarField") -> bool:
        return self.dom is other.dom


@dataclass(frozen=True)
class RobinParams:
    """Rigidez de frontera β > 0 y exponente p ∈ (1, ∞]"""

    beta: float
    p: float

    def __post_init__(self):
        if not (isinstance(self.beta, (int, float)) and self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta debe ser positivo y finito, recibido {self.beta}")
        if not (self.p > 1 or self.p == math.inf):
            raise ValueError(f"p debe estar en (1, ∞], recibido {self.p}")

    @property
    def is_infinite(self) -> bool:
        return self.p == math.inf

    def with_p(self, p: float) -> "RobinParams":
        return RobinParams(self.beta, p)


class Energy(NamedTuple):
    grad_term: float
    bdry_term: float


class SupNorms(NamedTuple):
    grad_sup: float
    bdry_sup: float
    vol_sup: float


@dataclass(frozen=True)
class FeasibilityReport:
    """Restricciones del problema límite: ‖∇φ‖∞ ≤ 1 y β‖φ‖_{L∞(∂Ω)} ≤ 1"""

    lipschitz_defect: float
    boundary_defect: float

    def feasible(self, slack: float = 1e-12) -> bool:
        return self.lipschitz_defect <= slack and self.boundary_defect <= slack


# Núcleo compartido de potencias p

def _scaled_log_sum(values: np.ndarray, weights: np.ndarray, p: float) -> tuple[float, float]:
    """(M, log Σ wᵢ(|vᵢ|/M)^p) con M = max|vᵢ|; M = 0 si todo es nulo"""
    mags = np.abs(values)
    active = (mags > 0) & (weights > 0)
    if not active.any():
        return 0.0, -math.inf
    scale = float(mags[active].max())
    ratios = mags[active] / scale
    return scale, float(logsumexp(p * np.log(ratios), b=weights[active]))


def log_power_sum(values: np.ndarray, weights: np.ndarray, p: float) -> float:
    """log Σ wᵢ|vᵢ|^p (−∞ si la suma es nula)"""
    scale, log_sum = _scaled_log_sum(values, weights, p)
    if scale == 0.0:
        return -math.inf
    return p * math.log(scale) + log_sum


def power_sum(values: np.ndarray, weights: np.ndarray, p: float) -> float:
    """Σ wᵢ|vᵢ|^p; forma directa cuando no hay riesgo de desborde"""
    if p <= RAW_P_LIMIT:
        mags = np.abs(values)
        peak = float(mags.max()) if mags.size else 0.0
        if peak == 0.0 or (p * math.log(peak) < 600.0 and p * math.log(peak) > -600.0):
            return float(np.sum(weights * mags ** p))
    return math.exp(log_power_sum(values, weights, p))


def stabilized_p_norm(samples, weights, p: float) -> float:
    """(Σ wᵢ|sᵢ|^p)^{1/p} calculada como M·(Σ wᵢ(|sᵢ|/M)^p)^{1/p}"""
    samples = np.asarray(samples, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if samples.shape != weights.shape:
        raise ValueError(f"Longitudes distintas: {samples.shape} y {weights.shape}")
    if not p >= 1:
        raise ValueError(f"p debe ser ≥ 1, recibido {p}")
    if np.any(weights <= 0):
        raise ValueError("Los pesos deben ser positivos")
    scale, log_sum = _scaled_log_sum(samples, weights, p)
    if scale == 0.0:
        return 0.0
    return scale * math.exp(log_sum / p)


# Operadores discretos

def gradient(dom: "Domain", w: Union[ScalarField, np.ndarray]) -> np.ndarray:
    """Gradiente exacto del interpolante P1 en cada triángulo, forma (T, 2)"""
    values = w.values if isinstance(w, ScalarField) else np.asarray(w, dtype=float)
    gx, gy = dom.grad_operators
    return np.column_stack((gx @ values, gy @ values))


def vertex_gradient(dom: "Domain", w: Union[ScalarField, np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Promedio por vértice de los triángulos incidentes: (vectores, normas)"""
    grads = gradient(dom, w)
    counts = dom.incidence.T @ np.ones(dom.n_triangles)
    vectors = np.column_stack((dom.incidence.T @ grads[:, 0], dom.incidence.T @ grads[:, 1]))
    norms = dom.incidence.T @ np.hypot(grads[:, 0], grads[:, 1])
    return vectors / counts[:, None], norms / counts


def _require_finite_p(rp: RobinParams):
    if rp.is_infinite:
        raise ValueError("p = ∞ no admite energía p; usar sup_norms / infinity_quotient")


def log_p_energy(dom: "Domain", w: ScalarField, rp: RobinParams) -> tuple[float, float]:
    """(log ∫|∇w|^p, log β^p∫_∂|w|^p) en forma estabilizada"""
    _require_finite_p(rp)
    grads = gradient(dom, w)
    mags = np.hypot(grads[:, 0], grads[:, 1])
    log_grad = log_power_sum(mags, np.full(mags.size, dom.tri_area), rp.p)
    mids = dom.face_operator @ w.values
    log_bdry = log_power_sum(rp.beta * mids, dom.face_measure, rp.p)
    return log_grad, log_bdry


def p_energy(dom: "Domain", w: ScalarField, rp: RobinParams) -> Energy:
    """(∫_Ω|∇w|^p, β^p ∫_∂Ω|w|^p) con cuadratura exacta P1 y punto medio en caras"""
    _require_finite_p(rp)
    grads = gradient(dom, w)
    mags = np.hypot(grads[:, 0], grads[:, 1])
    grad_term = power_sum(mags, np.full(mags.size, dom.tri_area), rp.p)
    mids = dom.face_operator @ w.values
    bdry_term = power_sum(rp.beta * mids, dom.face_measure, rp.p)
    return Energy(grad_term, bdry_term)


def log_volume_norm(dom: "Domain", w: Union[ScalarField, np.ndarray], p: float) -> float:
    """log ‖w‖_{L^p(Ω)}^p con el valor en el baricentro de cada triángulo"""
    values = w.values if isinstance(w, ScalarField) else np.asarray(w, dtype=float)
    centroids = dom.centroid_operator @ values
    return log_power_sum(centroids, np.full(centroids.size, dom.tri_area), p)


def volume_norm(dom: "Domain", w: Union[ScalarField, np.ndarray], p: float) -> float:
    """‖w‖_{L^p(Ω)}"""
    log_norm = log_volume_norm(dom, w, p)
    return 0.0 if log_norm == -math.inf else math.exp(log_norm / p)


def log_rayleigh_quotient(dom: "Domain", w: ScalarField, rp: RobinParams) -> float:
    """log del cociente de Rayleigh"""
    log_den = log_volume_norm(dom, w, rp.p)
    if log_den == -math.inf:
        raise ZeroField("‖w‖_p = 0: el cociente de Rayleigh no está definido")
    log_grad, log_bdry = log_p_energy(dom, w, rp)
    return float(np.logaddexp(log_grad, log_bdry)) - log_den


def rayleigh_quotient(dom: "Domain", w: ScalarField, rp: RobinParams) -> float:
    """(∫|∇w|^p + β^p∫_∂|w|^p) / ‖w‖_p^p"""
    return math.exp(log_rayleigh_quotient(dom, w, rp))


def _power_weight(ratios: np.ndarray, p: float) -> np.ndarray:
    """ratios^{p−2}, nulo donde ratios = 0 (también para p < 2)"""
    out = np.zeros_like(ratios)
    positive = ratios > 0
    out[positive] = ratios[positive] ** (p - 2.0)
    return out


def log_rayleigh_gradient(dom: "Domain", values: np.ndarray, rp: RobinParams) -> tuple[float, np.ndarray]:
    """(log Q(w), ∇ log Q(w)) para el vector de valores nodales.

    Numerador y denominador se escalan por sus máximos antes de elevar a p,
    de modo que la evaluación es estable para cualquier p finito.
    """
    _require_finite_p(rp)
    p, beta, area = rp.p, rp.beta, dom.tri_area
    gx_op, gy_op = dom.grad_operators
    gx, gy = gx_op @ values, gy_op @ values
    mags = np.hypot(gx, gy)
    mids = dom.face_operator @ values
    bmags = beta * np.abs(mids)
    cents = dom.centroid_operator @ values
    cmags = np.abs(cents)

    vol_scale = float(cmags.max())
    if vol_scale == 0.0:
        raise ZeroField("‖w‖_p = 0: el cociente de Rayleigh no está definido")
    num_scale = float(max(mags.max(initial=0.0), bmags.max(initial=0.0)))

    rv = cmags / vol_scale
    vol_sum = area * np.sum(rv ** p)
    grad_vol = (p / vol_scale ** 2) * (dom.centroid_operator.T @ (area * _power_weight(rv, p) * cents))

    if num_scale == 0.0:
        return -math.inf, np.zeros_like(values)

    rg = mags / num_scale
    rb = bmags / num_scale
    num_sum = area * np.sum(rg ** p) + np.sum(dom.face_measure * rb ** p)
    wg = area * _power_weight(rg, p)
    wb = dom.face_measure * _power_weight(rb, p)
    grad_num = (p / num_scale ** 2) * (
        gx_op.T @ (wg * gx) + gy_op.T @ (wg * gy)
        + beta ** 2 * (dom.face_operator.T @ (wb * mids))
    )

    log_q = p * math.log(num_scale) + math.log(num_sum) - p * math.log(vol_scale) - math.log(vol_sum)
    return log_q, grad_num / num_sum - grad_vol / vol_sum


def rayleigh_gradient(dom: "Domain", w: ScalarField, rp: RobinParams) -> np.ndarray:
    """Gradiente funcional del cociente de Rayleigh respecto a los valores nodales"""
    log_q, grad_log = log_rayleigh_gradient(dom, w.values, rp)
    return math.exp(log_q) * grad_log


# Normas del supremo (camino p = ∞)

def sup_norms(dom: "Domain", w: ScalarField) -> SupNorms:
    """(max |∇w| por triángulo, max |w| en puntos medios de caras, max |w| en vértices)"""
    grads = gradient(dom, w)
    mids = dom.face_operator @ w.values
    return SupNorms(
        grad_sup=float(np.hypot(grads[:, 0], grads[:, 1]).max()),
        bdry_sup=float(np.abs(mids).max()),
        vol_sup=float(np.abs(w.values).max()),
    )


def lipschitz_constant(dom: "Domain", w: ScalarField) -> float:
    """max |w(x) − w(y)|/|x − y| sobre pares de vecinos de 8 puntos"""
    from numerics.domain import NEIGHBOR_OFFSETS

    neighbors = dom.neighbors8
    best = 0.0
    # Basta la mitad del stencil: cada par aparece una vez
    for k in range(4):
        valid = neighbors[:, k] >= 0
        if not valid.any():
            continue
        step = dom.h * math.hypot(*NEIGHBOR_OFFSETS[k])
        diffs = np.abs(w.values[neighbors[valid, k]] - w.values[valid])
        best = max(best, float(diffs.max()) / step)
    return best


def lipschitz_defect(dom: "Domain", w: ScalarField) -> float:
    """Exceso discreto sobre la restricción ‖∇φ‖∞ ≤ 1"""
    return lipschitz_constant(dom, w) - 1.0


def feasibility(dom: "Domain", phi: ScalarField, beta: float) -> FeasibilityReport:
    """Ambas restricciones del problema límite"""
    bdry = np.abs(phi.values[dom.boundary_vertices])
    return FeasibilityReport(
        lipschitz_defect=lipschitz_defect(dom, phi),
        boundary_defect=float(beta * bdry.max()) - 1.0,
    )


def infinity_quotient(dom: "Domain", w: ScalarField, beta: float) -> float:
    """max{‖∇w‖∞, β‖w‖_{L∞(∂Ω)}}/‖w‖∞ con ‖∇w‖∞ medido como constante de Lipschitz"""
    vol_sup = float(np.abs(w.values).max())
    if vol_sup == 0.0:
        raise ZeroField("‖w‖∞ = 0: el cociente del supremo no está definido")
    bdry_sup = float(np.abs(w.values[dom.boundary_vertices]).max())
    return max(lipschitz_constant(dom, w), beta * bdry_sup) / vol_sup


# Serialización CSV `ix,iy,value`

def save_field(path: Union[str, Path], w: ScalarField) -> Path:
    """Escribe el campo como CSV; los valores se recuperan bit a bit"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["ix", "iy", "value"])
        for ix, iy, value in zip(w.dom.grid_ix, w.dom.grid_iy, w.values):
            writer.writerow([int(ix), int(iy), repr(float(value))])
    return path


def load_field(path: Union[str, Path], dom: "Domain") -> ScalarField:
    """Lee un CSV `ix,iy,value` sobre el dominio dado"""
    values = np.full(dom.n_vertices, np.nan)
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != ["ix", "iy", "value"]:
            raise FieldError(f"Cabecera inválida en {path}: {reader.fieldnames}")
        for row in reader:
            ix, iy = int(row["ix"]), int(row["iy"])
            if not (0 <= ix < dom.shape[0] and 0 <= iy < dom.shape[1]) or dom.index[ix, iy] < 0:
                raise DomainMismatch(f"El vértice ({ix}, {iy}) de {path} no pertenece al dominio")
            values[dom.index[ix, iy]] = float(row["value"])
    if np.isnan(values).any():
        raise DomainMismatch(f"{path} no cubre todos los vértices del dominio")
    return ScalarField(dom, values)
