"""
Primer autovalor del p-Laplaciano con condición de Robin: minimización
del cociente de Rayleigh, barridos en p y verificaciones del límite p → ∞
"""

from __future__ import annotations

import math
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from config.settings import LabConstants
from numerics.domain import Domain, RidgeSet, equal_area_disk, lambda_infinity
from numerics.fields import (
    RobinParams,
    ScalarField,
    log_rayleigh_gradient,
    log_rayleigh_quotient,
    log_volume_norm,
)
from numerics.linesearch import armijo_backtrack, barzilai_borwein_rate
from numerics.viscosity import ResidualReport, limit_pde_residual
from utils.error_handler import LineSearchStall, NotConverged, SolverError, ZeroField

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigenOptions:
    tol: float = LabConstants.EIGEN_TOL
    max_iter: int = LabConstants.EIGEN_MAX_ITER
    strict: bool = False
    keep_history: bool = False


@dataclass(frozen=True, eq=False)
class EigenResult:
    """Λ_p, autofunción normalizada (‖u‖_p = 1, u ≥ 0) y diagnósticos"""

    p: float
    lambda_p: float
    lambda_root: float
    u: ScalarField
    iterations: int
    grad_norm: float
    converged: bool
    history: tuple = field(default=(), repr=False)


@dataclass(frozen=True)
class SweepRow:
    p: float
    lambda_p: float
    lambda_root: float
    gap: float
    iterations: int
    converged: bool
    note: str = ""


@dataclass(frozen=True)
class SweepTable:
    """Sucesión Λ_p^{1/p} frente al valor geométrico Λ∞"""

    beta: float
    lambda_inf_geometric: float
    rows: tuple[SweepRow, ...]

    def gap_nonincreasing(self, last: int = 3, slack: float = 0.1) -> bool:
        """|gap| no crece en las últimas `last` filas (con holgura relativa)"""
        gaps = [abs(row.gap) for row in self.rows[-last:] if math.isfinite(row.gap)]
        return all(b <= (1.0 + slack) * a for a, b in zip(gaps, gaps[1:]))


@dataclass(frozen=True)
class LimitCheckReport:
    """max(u − (1/β + d)) tras reescalar u a max u = 1/Λ_p^{1/p}"""

    violation: float
    scaled: ScalarField

    def passed(self, tol: float = 0.05) -> bool:
        return self.violation <= tol


def _normalized(dom: Domain, values: np.ndarray, p: float) -> np.ndarray:
    magnitudes = np.abs(values)
    log_norm = log_volume_norm(dom, magnitudes, p)
    if log_norm == -math.inf:
        return magnitudes
    return magnitudes * math.exp(-log_norm / p)


def solve_eigen(dom: Domain, rp: RobinParams, opts: Optional[EigenOptions] = None,
                initial: Optional[ScalarField] = None) -> EigenResult:
    """Descenso de gradiente sobre log Q con pasos Barzilai-Borwein y Armijo.

    Tras cada paso el iterado se reemplaza por |w|/‖w‖_p. La parada usa el
    gradiente normalizado por la masa concentrada, relativo al inicial:
    ‖g/m‖∞·‖w‖∞ ≤ tol·max(1, residuo inicial). Armijo admite aumentos de
    log Q por debajo del redondeo; tras BB_RESET_AFTER pasos seguidos con
    retroceso, el paso BB se reinicia al último paso aceptado.
    """
    if rp.is_infinite:
        raise ValueError("solve_eigen requiere p finito; para p = ∞ usar lambda_infinity")
    opts = opts or EigenOptions()
    p = rp.p
    mass = dom.lumped_mass
    sqrt_mass = np.sqrt(mass)

    if initial is None:
        start = 1.0 / rp.beta + dom.distance.d.values
    else:
        if initial.dom is not dom:
            raise ValueError("El arranque en caliente vive en otro dominio")
        start = initial.values
    w = _normalized(dom, np.asarray(start, dtype=float), p)

    cache = {}

    def objective(values: np.ndarray) -> float:
        try:
            log_q, grad = log_rayleigh_gradient(dom, values, rp)
        except ZeroField:
            return math.inf
        cache["grad"] = grad
        return log_q

    value = objective(w)
    if not math.isfinite(value):
        raise SolverError("El punto inicial no tiene cociente finito")
    grad = cache["grad"]
    history = [value] if opts.keep_history else []

    def transform(values: np.ndarray) -> np.ndarray:
        return _normalized(dom, values, p)

    rate = 1.0
    residual = float(np.max(np.abs(grad / mass)) * np.max(np.abs(w)))
    target = opts.tol * max(1.0, residual)
    converged = residual <= target
    stalled = False
    iterations = 0
    backtracked = 0

    while not converged and iterations < opts.max_iter:
        direction = -grad / mass
        slack = LabConstants.LINESEARCH_SLACK * (1.0 + abs(value))
        step = armijo_backtrack(objective, w, value, grad, direction, rate, transform=transform, slack=slack)
        if step is None:
            # Suelo de precisión: el descenso esperado ya no es representable
            expected = -rate * float(np.dot(grad, direction))
            if expected <= 1e-12 * max(1.0, abs(value)):
                converged = True
                logger.debug(f"p={p}: parada por precisión (residuo={residual:.3e})")
            else:
                stalled = True
            break
        assert step.value <= value + slack, f"log Q creció de {value:.15e} a {step.value:.15e}"

        new_grad = cache["grad"]
        dx, dg = step.x - w, new_grad - grad
        backtracked = backtracked + 1 if step.evaluations > 1 else 0
        if backtracked >= LabConstants.BB_RESET_AFTER:
            # Pasos BB rechazados seguidos: reiniciar desde el último paso aceptado
            rate, backtracked = step.rate, 0
        else:
            rate = barzilai_borwein_rate(dx * sqrt_mass, dg / sqrt_mass, fallback=2.0 * step.rate)
        w, value, grad = step.x, step.value, new_grad
        iterations += 1
        if opts.keep_history:
            history.append(value)

        residual = float(np.max(np.abs(grad / mass)) * np.max(np.abs(w)))
        converged = residual <= target
        if iterations % 500 == 0:
            logger.debug(f"p={p} iter={iterations}: log Q={value:.12f}, residuo={residual:.3e}")

    u = ScalarField(dom, w)
    log_q = log_rayleigh_quotient(dom, u, rp)
    result = EigenResult(
        p=p,
        lambda_p=math.exp(log_q),
        lambda_root=math.exp(log_q / p),
        u=u,
        iterations=iterations,
        grad_norm=residual,
        converged=converged,
        history=tuple(history),
    )

    if stalled:
        message = f"Búsqueda de línea estancada en p={p} tras {iterations} iteraciones"
        if opts.strict:
            raise LineSearchStall(message, result)
        logger.warning(message)
    elif not converged:
        message = f"solve_eigen no convergió en p={p}: residuo {residual:.3e} > {target:.1e}"
        if opts.strict:
            raise NotConverged(message, result)
        logger.warning(message)

    logger.info(
        f"Autovalor p={p}: Λ_p^(1/p)={result.lambda_root:.6f}, "
        f"iteraciones={iterations}, residuo={residual:.3e}"
    )
    return result


def eigen_sweep(dom: Domain, beta: float, p_list: Sequence[float],
                opts: Optional[EigenOptions] = None) -> tuple[SweepTable, list[EigenResult]]:
    """Barrido en p con arranque en caliente; los fallos quedan anotados en la fila"""
    p_values = [float(p) for p in p_list]
    if not p_values or any(p <= 1 for p in p_values):
        raise ValueError(f"Todos los p deben ser > 1: {p_values}")
    if any(b <= a for a, b in zip(p_values, p_values[1:])):
        raise ValueError(f"p_list debe ser estrictamente creciente: {p_values}")

    lam_inf = lambda_infinity(dom, beta)
    rows, results = [], []
    warm: Optional[ScalarField] = None

    for p in p_values:
        rp = RobinParams(beta, p)
        note = ""
        try:
            res = solve_eigen(dom, rp, opts, initial=warm)
        except SolverError as e:
            res = e.result
            note = type(e).__name__
            logger.warning(f"Fila p={p} anotada: {e}")
            if res is None:
                rows.append(SweepRow(p, math.nan, math.nan, math.nan, 0, False, note))
                continue
        if not res.converged and not note:
            note = "no convergió"
        rows.append(SweepRow(
            p=p,
            lambda_p=res.lambda_p,
            lambda_root=res.lambda_root,
            gap=res.lambda_root - lam_inf,
            iterations=res.iterations,
            converged=res.converged,
            note=note,
        ))
        results.append(res)
        warm = res.u

    table = SweepTable(beta=float(beta), lambda_inf_geometric=lam_inf, rows=tuple(rows))
    return table, results


def eigenfunction_limit_check(res: EigenResult, dom: Domain, beta: float) -> LimitCheckReport:
    """Cota u ≤ 1/β + d con la normalización max u = 1/Λ"""
    peak = float(np.max(res.u.values))
    if peak <= 0.0:
        raise ValueError("La autofunción es idénticamente nula")
    scaled = res.u.scaled((1.0 / res.lambda_root) / peak)
    envelope = 1.0 / beta + dom.distance.d.values
    return LimitCheckReport(violation=float(np.max(scaled.values - envelope)), scaled=scaled)


def faber_krahn_check(dom: Domain, beta: float, p: float,
                      opts: Optional[EigenOptions] = None,
                      slack: float = 0.02) -> tuple[float, float, bool]:
    """Compara Λ_p(Ω) con Λ_p del disco de igual área.

    Para p = ∞ se comparan los valores geométricos con holgura h; para p
    finito se compara Λ_p con holgura relativa `slack`.
    """
    disk = equal_area_disk(dom)
    if p == math.inf:
        lam_dom = lambda_infinity(dom, beta)
        lam_disk = lambda_infinity(disk, beta)
        return lam_dom, lam_disk, lam_dom >= lam_disk - dom.h

    rp = RobinParams(beta, p)
    lam_dom = solve_eigen(dom, rp, opts).lambda_p
    lam_disk = solve_eigen(disk, rp, opts).lambda_p
    return lam_dom, lam_disk, lam_dom >= (1.0 - slack) * lam_disk


def eigenfunction_residual(res: EigenResult, dom: Domain, beta: float,
                           ridge: Optional[RidgeSet] = None) -> ResidualReport:
    """Residuo del sistema límite para u_p reescalada (max u = 1/Λ_p^{1/p}, Λ = Λ_p^{1/p})"""
    scaled = eigenfunction_limit_check(res, dom, beta).scaled
    return limit_pde_residual(dom, scaled, res.lambda_root, beta, ridge=ridge)


def eigen_residual_bound(dom: Domain, p: float) -> float:
    """Cota 10·max(h, 1/p) del residuo viscoso a p finito"""
    return 10.0 * max(dom.h, 1.0 / p)
