"""
Residuos discretos del sistema límite min{|∇u| − Λu, −Δ∞u} = 0 en Ω,
−min{|∇u| − βu, −∂u/∂ν} = 0 en ∂Ω, evaluados en puntos regulares
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from config.settings import LabConstants
from numerics.domain import Domain, RidgeSet, ridge_set
from numerics.fields import ScalarField, gradient, vertex_gradient
from utils.error_handler import NonpositiveField

logger = logging.getLogger(__name__)

STENCILS = ("hessian", "interpolated")

# Evalúa la función exacta en puntos (N, 2) fuera de los vértices
Sampler = Callable[[np.ndarray], np.ndarray]


class Quantiles(NamedTuple):
    p50: float
    p95: float
    sup: float


@dataclass(frozen=True, eq=False)
class LaplacianEvaluation:
    values: np.ndarray
    flat: np.ndarray
    unevaluable: np.ndarray


@dataclass(frozen=True, eq=False)
class ResidualReport:
    """Residuos por vértice interior y por cara, con el conjunto enmascarado"""

    interior_residual: ScalarField
    eikonal_branch: ScalarField
    laplacian_branch: ScalarField
    boundary_residual: np.ndarray
    boundary_gradient_branch: np.ndarray
    boundary_flux_branch: np.ndarray
    masked: np.ndarray
    masked_faces: np.ndarray
    interior_quantiles: Quantiles
    boundary_quantiles: Quantiles

    @property
    def n_masked(self) -> int:
        return int(self.masked.sum())


def _quantiles(values: np.ndarray) -> Quantiles:
    if values.size == 0:
        return Quantiles(np.nan, np.nan, np.nan)
    mags = np.abs(values)
    return Quantiles(
        p50=float(np.quantile(mags, 0.5)),
        p95=float(np.quantile(mags, 0.95)),
        sup=float(mags.max()),
    )


def _hessian_directional(dom: Domain, values: np.ndarray, unit: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """gᵀ(D²u)g con diferencias centradas; requiere los 8 vecinos"""
    nb = dom.neighbors8
    evaluable = np.all(nb >= 0, axis=1)
    out = np.zeros(dom.n_vertices)
    idx = np.flatnonzero(evaluable)
    if idx.size == 0:
        return out, evaluable
    u = values
    n = nb[idx]
    h2 = dom.h * dom.h
    # Orden de NEIGHBOR_OFFSETS: E, NE, N, NW, W, SW, S, SE
    uxx = (u[n[:, 0]] - 2.0 * u[idx] + u[n[:, 4]]) / h2
    uyy = (u[n[:, 2]] - 2.0 * u[idx] + u[n[:, 6]]) / h2
    uxy = (u[n[:, 1]] - u[n[:, 7]] - u[n[:, 3]] + u[n[:, 5]]) / (4.0 * h2)
    gx, gy = unit[idx, 0], unit[idx, 1]
    out[idx] = gx * gx * uxx + 2.0 * gx * gy * uxy + gy * gy * uyy
    return out, evaluable


def _interpolated_directional(dom: Domain, values: np.ndarray, unit: np.ndarray,
                              sampler: Optional[Sampler] = None) -> tuple[np.ndarray, np.ndarray]:
    """(u(x+hg) − 2u(x) + u(x−hg))/h² con muestreo bilineal o exacto.

    Con `sampler` los valores fuera de la malla se toman de la función
    exacta; el muestreo bilineal solo decide si el punto está en Ω.
    """
    xs, ys = dom.axes
    interp = RegularGridInterpolator((xs, ys), dom.to_grid(values), bounds_error=False, fill_value=np.nan)
    ahead = dom.coords + dom.h * unit
    behind = dom.coords - dom.h * unit
    forward = interp(ahead)
    backward = interp(behind)
    if sampler is not None:
        forward = np.where(np.isfinite(forward), sampler(ahead), np.nan)
        backward = np.where(np.isfinite(backward), sampler(behind), np.nan)
    second = (forward - 2.0 * values + backward) / (dom.h * dom.h)
    evaluable = np.isfinite(second)
    return np.where(evaluable, second, 0.0), evaluable


def evaluate_infinity_laplacian(dom: Domain, u: ScalarField, stencil: str = "hessian",
                                flat_tol: float = LabConstants.GRADIENT_FLAT_TOL,
                                sampler: Optional[Sampler] = None) -> LaplacianEvaluation:
    """Δ∞u = |∇u|²·gᵀ(D²u)g por vértice, con las marcas de planitud y evaluabilidad"""
    if stencil not in STENCILS:
        raise ValueError(f"Esténcil desconocido: {stencil}; opciones {STENCILS}")
    if sampler is not None and stencil != "interpolated":
        raise ValueError("El muestreo exacto solo aplica al esténcil interpolado")
    vectors, norms = vertex_gradient(dom, u)
    vec_norm = np.hypot(vectors[:, 0], vectors[:, 1])
    flat = (norms <= flat_tol) | (vec_norm <= flat_tol)
    unit = np.zeros_like(vectors)
    unit[~flat] = vectors[~flat] / vec_norm[~flat, None]

    if stencil == "hessian":
        second, evaluable = _hessian_directional(dom, u.values, unit)
    else:
        second, evaluable = _interpolated_directional(dom, u.values, unit, sampler)

    values = np.where(flat | ~evaluable, 0.0, norms * norms * second)
    return LaplacianEvaluation(values=values, flat=flat, unevaluable=~evaluable & ~flat)


def infinity_laplacian(dom: Domain, u: ScalarField, stencil: str = "hessian") -> ScalarField:
    """Δ∞u = ⟨D²u ∇u, ∇u⟩; 0 en vértices planos o sin esténcil completo"""
    return ScalarField(dom, evaluate_infinity_laplacian(dom, u, stencil).values)


def eikonal_residual(dom: Domain, u: ScalarField, lam: float) -> ScalarField:
    """|∇u| − Λu por vértice, con |∇u| promediado sobre los triángulos incidentes"""
    if lam < 0:
        raise ValueError(f"lambda debe ser ≥ 0, recibido {lam}")
    _, norms = vertex_gradient(dom, u)
    return ScalarField(dom, norms - lam * u.values)


def _face_triangles(dom: Domain) -> np.ndarray:
    """Triángulo que contiene cada cara de frontera"""
    by_vertex = dom.incidence.T.tocsr()
    both = by_vertex[dom.faces[:, 0]].multiply(by_vertex[dom.faces[:, 1]]).tocsr()
    return np.asarray(both.argmax(axis=1)).ravel()


def _inward_face_values(dom: Domain, values: np.ndarray) -> np.ndarray:
    """u en el punto medio de la arista paralela una celda hacia dentro"""
    step = np.rint(dom.face_normals).astype(np.intp)
    out = np.zeros(dom.faces.shape[0])
    for col in range(2):
        vertex = dom.faces[:, col]
        jx = dom.grid_ix[vertex] - step[:, 0]
        jy = dom.grid_iy[vertex] - step[:, 1]
        out += 0.5 * values[dom.index[jx, jy]]
    return out


def limit_pde_residual(dom: Domain, u: ScalarField, lam: float, beta: float,
                       ridge: Optional[RidgeSet] = None, stencil: str = "hessian",
                       sampler: Optional[Sampler] = None) -> ResidualReport:
    """Residuos del sistema límite fuera del collar de la cresta y de la frontera.

    `sampler` evalúa u de forma exacta entre vértices (esténcil interpolado);
    sin él se usa la interpolación bilineal de los valores nodales.
    """
    if np.any(u.values <= 0):
        raise NonpositiveField("limit_pde_residual requiere u > 0 en todo el dominio")
    ridge = ridge if ridge is not None else ridge_set(dom)

    eik = eikonal_residual(dom, u, lam).values
    lap = evaluate_infinity_laplacian(dom, u, stencil, sampler=sampler)
    neg_lap = -lap.values
    interior = np.minimum(eik, neg_lap)
    interior[dom.is_boundary] = 0.0

    ridge_collar = dom.dilate(ridge.as_mask(dom), LabConstants.RIDGE_COLLAR_CELLS)
    masked = ~off_ridge_mask(dom, ridge) | lap.unevaluable

    # Frontera: gradiente del triángulo de la cara y derivada normal unilateral
    grads = gradient(dom, u)
    tri = _face_triangles(dom)
    tri_norm = np.hypot(grads[tri, 0], grads[tri, 1])
    mids = dom.face_operator @ u.values
    grad_branch = tri_norm - beta * mids
    normal_derivative = (mids - _inward_face_values(dom, u.values)) / dom.h
    flux_branch = -normal_derivative
    boundary = -np.minimum(grad_branch, flux_branch)
    masked_faces = ridge_collar[dom.faces[:, 0]] | ridge_collar[dom.faces[:, 1]]

    report = ResidualReport(
        interior_residual=ScalarField(dom, interior),
        eikonal_branch=ScalarField(dom, eik),
        laplacian_branch=ScalarField(dom, neg_lap),
        boundary_residual=boundary,
        boundary_gradient_branch=grad_branch,
        boundary_flux_branch=flux_branch,
        masked=masked,
        masked_faces=masked_faces,
        interior_quantiles=_quantiles(interior[~masked]),
        boundary_quantiles=_quantiles(boundary[~masked_faces]),
    )
    logger.info(
        f"Residuo límite (Λ={lam:.6f}): interior p95={report.interior_quantiles.p95:.3e}, "
        f"frontera p95={report.boundary_quantiles.p95:.3e}, {report.n_masked} vértices enmascarados"
    )
    return report


def off_ridge_mask(dom: Domain, ridge: RidgeSet) -> np.ndarray:
    """Vértices fuera del collar de la cresta y del collar de la frontera"""
    ridge_collar = dom.dilate(ridge.as_mask(dom), LabConstants.RIDGE_COLLAR_CELLS)
    boundary_collar = dom.dilate(dom.is_boundary, LabConstants.BOUNDARY_COLLAR_CELLS)
    return ~(ridge_collar | boundary_collar)


def unit_gradient_defect(dom: Domain, u: ScalarField, ridge: Optional[RidgeSet] = None,
                         where: Optional[np.ndarray] = None) -> Quantiles:
    """Cuantiles de ||∇u| − 1| fuera de la cresta, opcionalmente restringidos a `where`"""
    ridge = ridge if ridge is not None else ridge_set(dom)
    keep = off_ridge_mask(dom, ridge)
    if where is not None:
        keep &= np.asarray(where, dtype=bool)
    return _quantiles(eikonal_residual(dom, u, 0.0).values[keep] - 1.0)
