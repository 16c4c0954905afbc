"""
Problema de p-Poisson con condición de Robin y su límite p → ∞.

Incluye el minimizador de J_p (gradiente conjugado no lineal
precondicionado con continuación en p), los oráculos radiales cerrados y
por cuadratura, la solución maximal del problema límite, la extensión AMLE
y el certificado de unicidad basado en la cresta.
"""

from __future__ import annotations

import re
import math
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, sparse
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import factorized

from config.settings import LabConstants
from numerics.domain import Domain, RidgeSet, boundary_distance_at, ridge_set
from numerics.fields import FeasibilityReport, RobinParams, ScalarField, feasibility, power_sum
from numerics.linesearch import armijo_backtrack
from utils.error_handler import (
    DisconnectedComponent,
    DomainMismatch,
    LineSearchStall,
    NonpositiveField,
    NotConverged,
    WitnessConstructionFailed,
)

logger = logging.getLogger(__name__)

# Regularización del precondicionador: |∇φ|² + ε²
_HESSIAN_EPS = 1e-3


@dataclass(frozen=True)
class PoissonOptions:
    tol: float = LabConstants.POISSON_TOL
    max_iter: int = LabConstants.POISSON_MAX_ITER
    strict: bool = False
    continuation: bool = True
    stage_tol: float = LabConstants.POISSON_STAGE_TOL
    precond_every: int = LabConstants.PRECOND_EVERY


@dataclass(frozen=True, eq=False)
class PoissonResult:
    """Minimizador v_p de J_p con su residuo débil"""

    p: float
    v: ScalarField
    j_value: float
    residual_norm: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class PoissonSweepRow:
    p: float
    j_value: float
    residual_norm: float
    sup_gap: float
    envelope_violation: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class PoissonSweepTable:
    beta: float
    rows: tuple[PoissonSweepRow, ...]

    def gap_decreasing(self, slack: float = 0.1) -> bool:
        gaps = [row.sup_gap for row in self.rows]
        return all(b <= (1.0 + slack) * a for a, b in zip(gaps, gaps[1:]))


@dataclass(frozen=True, eq=False)
class UniquenessReport:
    """Veredicto ℛ ⊆ supp f y, si falla, un segundo maximizador de −J_∞"""

    ridge: RidgeSet
    support: np.ndarray
    included: bool
    uncovered: tuple[int, ...] = ()
    witness: Optional[ScalarField] = None
    witness_region: Optional[np.ndarray] = None
    witness_feasibility: Optional[FeasibilityReport] = None
    field_gap: float = 0.0
    objective_gap: float = 0.0
    witness_ok: bool = False

    @property
    def verdict(self) -> str:
        if self.included:
            return "única"
        return "no única (testigo válido)" if self.witness_ok else "no única (testigo inválido)"


# Funcional J_p

def _safe_power(mags: np.ndarray, exponent: float) -> np.ndarray:
    out = np.zeros_like(mags)
    positive = mags > 0
    out[positive] = mags[positive] ** exponent
    return out


def source_load(dom: Domain, f: ScalarField) -> np.ndarray:
    """Vector b con b·φ = ∫ f φ en la cuadratura de baricentros"""
    centroid = dom.centroid_operator
    return centroid.T @ (dom.tri_area * (centroid @ f.values))


class PoissonFunctional:
    """J_p(φ) = (1/p)∫|∇φ|^p + (1/p)∫_∂|βφ|^p − ∫fφ sobre valores nodales"""

    def __init__(self, dom: Domain, f: ScalarField, rp: RobinParams):
        if rp.is_infinite:
            raise ValueError("J_p requiere p finito; para p = ∞ usar j_infinity")
        if f.dom is not dom:
            raise DomainMismatch("La fuente f vive en otro dominio")
        self.dom = dom
        self.p = rp.p
        self.beta = rp.beta
        self.gx, self.gy = dom.grad_operators
        self.mid = dom.face_operator
        self.area = dom.tri_area
        self.cell_weights = np.full(dom.n_triangles, dom.tri_area)
        self.face = dom.face_measure
        self.load = source_load(dom, f)

    def value(self, x: np.ndarray) -> float:
        p = self.p
        mags = np.hypot(self.gx @ x, self.gy @ x)
        bmags = np.abs(self.beta * (self.mid @ x))
        try:
            energy = power_sum(mags, self.cell_weights, p) + power_sum(bmags, self.face, p)
        except OverflowError:
            return math.inf
        return float(energy / p - self.load @ x)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        p, beta = self.p, self.beta
        gx, gy = self.gx @ x, self.gy @ x
        weights = self.area * _safe_power(np.hypot(gx, gy), p - 2.0)
        mids = self.mid @ x
        bweights = self.face * _safe_power(np.abs(beta * mids), p - 2.0)
        return (
            self.gx.T @ (weights * gx) + self.gy.T @ (weights * gy)
            + beta * beta * (self.mid.T @ (bweights * mids))
            - self.load
        )

    def hessian(self, x: np.ndarray) -> sparse.csc_matrix:
        """Hessiano con |∇φ|² regularizado (definido positivo para todo p > 1)"""
        p, beta = self.p, self.beta
        gx, gy = self.gx @ x, self.gy @ x
        reg = gx * gx + gy * gy + _HESSIAN_EPS ** 2
        iso = self.area * reg ** ((p - 2.0) / 2.0)
        aniso = self.area * (p - 2.0) * reg ** ((p - 4.0) / 2.0)

        def diag(values):
            return sparse.diags(values)

        hess = (
            self.gx.T @ diag(iso + aniso * gx * gx) @ self.gx
            + self.gy.T @ diag(iso + aniso * gy * gy) @ self.gy
            + self.gx.T @ diag(aniso * gx * gy) @ self.gy
            + self.gy.T @ diag(aniso * gx * gy) @ self.gx
        )
        mids = beta * (self.mid @ x)
        bw = self.face * (p - 1.0) * beta * beta * (mids * mids + _HESSIAN_EPS ** 2) ** ((p - 2.0) / 2.0)
        hess = hess + self.mid.T @ diag(bw) @ self.mid
        shift = 1e-12 * float(hess.diagonal().max())
        return (hess + shift * sparse.identity(self.dom.n_vertices)).tocsc()


def _minimize(fun: PoissonFunctional, x0: np.ndarray, tol: float, max_iter: int,
              precond_every: int) -> tuple[np.ndarray, float, float, int, bool, bool]:
    """Gradiente conjugado no lineal (PR+) precondicionado con el Hessiano"""
    mass = fun.dom.lumped_mass
    x = np.array(x0, dtype=float)
    value = fun.value(x)
    grad = fun.gradient(x)
    residual = float(np.max(np.abs(grad / mass)))
    iterations = 0
    stalled = False
    solve = None
    direction = z_prev = g_prev = None

    while residual > tol and iterations < max_iter:
        restart = iterations % precond_every == 0 or solve is None
        if restart:
            solve = factorized(fun.hessian(x))
        z = solve(grad)

        if restart or direction is None:
            direction = -z
        else:
            beta_pr = max(0.0, float(grad @ (z - z_prev)) / float(g_prev @ z_prev))
            direction = -z + beta_pr * direction
            if float(grad @ direction) >= 0.0:
                direction = -z

        slack = LabConstants.LINESEARCH_SLACK * (1.0 + abs(value))
        step = armijo_backtrack(fun.value, x, value, grad, direction, 1.0, slack=slack)
        if step is None and not np.array_equal(direction, -z):
            direction = -z
            step = armijo_backtrack(fun.value, x, value, grad, direction, 1.0, slack=slack)
        if step is None:
            stalled = True
            break

        g_prev, z_prev = grad, z
        x, value = step.x, step.value
        grad = fun.gradient(x)
        residual = float(np.max(np.abs(grad / mass)))
        iterations += 1
        logger.debug(f"p={fun.p} iter={iterations}: J={value:.12e}, residuo={residual:.3e}")

    return x, value, residual, iterations, residual <= tol, stalled


def _continuation_ladder(p: float, start: float = 2.0) -> list[float]:
    """start, 2·start, 4·start, … < p, y finalmente p"""
    if p <= start:
        return [start, p] if p < start else [p]
    ladder = []
    q = start
    while q < p:
        ladder.append(q)
        q *= 2.0
    ladder.append(p)
    return ladder


def solve_p_poisson(dom: Domain, f: ScalarField, rp: RobinParams,
                    opts: Optional[PoissonOptions] = None,
                    initial: Optional[ScalarField] = None,
                    from_p: Optional[float] = None) -> PoissonResult:
    """Minimiza J_p; sin arranque dado recorre la escalera p = 2, 4, 8, … hasta p.

    Con `initial` calculado en `from_p` la escalera empieza en 2·from_p.
    """
    opts = opts or PoissonOptions()
    if rp.is_infinite:
        raise ValueError("solve_p_poisson requiere p finito; para p = ∞ usar limit_maximal_solution")
    if f.dom is not dom:
        raise DomainMismatch("La fuente f vive en otro dominio")
    if np.any(f.values < 0):
        raise NonpositiveField("La fuente f debe ser no negativa")

    f_sup = float(np.max(np.abs(f.values)))
    final_tol = opts.tol * (1.0 + f_sup)

    if initial is not None:
        if initial.dom is not dom:
            raise DomainMismatch("El arranque en caliente vive en otro dominio")
        if from_p is not None and opts.continuation and from_p < rp.p:
            ladder = _continuation_ladder(rp.p, start=from_p)[1:]
        else:
            ladder = [rp.p]
        x = initial.values.copy()
    else:
        ladder = _continuation_ladder(rp.p) if opts.continuation else [rp.p]
        x = np.zeros(dom.n_vertices)

    total_iter = 0
    fun = None
    value = residual = 0.0
    converged = stalled = False
    for stage, q in enumerate(ladder):
        final = stage == len(ladder) - 1
        fun = PoissonFunctional(dom, f, rp.with_p(q))
        tol = final_tol if final else max(final_tol, opts.stage_tol * (1.0 + f_sup))
        x, value, residual, its, converged, stalled = _minimize(
            fun, x, tol, opts.max_iter, max(1, opts.precond_every)
        )
        total_iter += its
        logger.debug(f"Etapa p={q}: {its} iteraciones, residuo={residual:.3e}")

    result = PoissonResult(
        p=rp.p,
        v=ScalarField(dom, x),
        j_value=value,
        residual_norm=residual,
        iterations=total_iter,
        converged=converged,
    )

    if not converged:
        message = (
            f"solve_p_poisson no convergió en p={rp.p}: residuo {residual:.3e} > {final_tol:.1e}"
            + (" (búsqueda de línea estancada)" if stalled else "")
        )
        if opts.strict:
            raise (LineSearchStall if stalled else NotConverged)(message, result)
        logger.warning(message)

    logger.info(
        f"p-Poisson p={rp.p}: J_p={value:.8f}, residuo={residual:.3e}, iteraciones={total_iter}"
    )
    return result


# Fuentes

_SOURCE_PATTERN = re.compile(r"^\s*(\w+)\s*(?:\(([^)]*)\))?\s*$")


def make_source(dom: Domain, spec: str) -> ScalarField:
    """Fuente f a partir de `const(c)`, `ball_indicator(eps)` o `annulus_indicator(r0,r1)`"""
    match = _SOURCE_PATTERN.match(spec)
    if not match:
        raise ValueError(f"Especificación de fuente inválida: {spec!r}")
    name, raw_args = match.group(1), match.group(2)
    try:
        args = [float(a) for a in raw_args.split(",")] if raw_args and raw_args.strip() else []
    except ValueError:
        raise ValueError(f"Argumentos no numéricos en la fuente: {spec!r}")

    radius = np.hypot(dom.coords[:, 0], dom.coords[:, 1])
    if name == "const":
        value = args[0] if args else 1.0
        if value < 0:
            raise NonpositiveField(f"const({value}) es negativa")
        return ScalarField.constant(dom, value)
    if name == "ball_indicator" and len(args) == 1:
        return ScalarField(dom, (radius <= args[0] + 1e-12).astype(float))
    if name == "annulus_indicator" and len(args) == 2:
        r0, r1 = args
        if not 0 <= r0 < r1:
            raise ValueError(f"annulus_indicator requiere 0 ≤ r0 < r1, recibido {args}")
        return ScalarField(dom, ((radius >= r0 - 1e-12) & (radius <= r1 + 1e-12)).astype(float))
    raise ValueError(f"Fuente desconocida o con aridad incorrecta: {spec!r}")


# Oráculos radiales en la bola unidad

def _check_radius(r: float):
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r debe estar en [0, 1], recibido {r}")


def radial_oracle_ball(n: int, p: float, beta: float, r: float) -> float:
    """Solución radial exacta para f ≡ 1 en la bola unidad"""
    _check_radius(r)
    if not beta > 0:
        raise ValueError(f"beta debe ser positivo, recibido {beta}")
    if p == math.inf:
        return -r + 1.0 / beta + 1.0
    if not p > 1:
        raise ValueError(f"p debe ser > 1, recibido {p}")
    alpha = 1.0 / (p - 1.0)
    n_alpha = n ** alpha
    boundary = math.exp(-alpha * (math.log(n) + p * math.log(beta)))
    return -((p - 1.0) / (n_alpha * p)) * r ** (p / (p - 1.0)) + boundary + (p - 1.0) / (n_alpha * p)


def radial_oracle_annular(n: int, p: float, beta: float, eps: float, r: float) -> float:
    """Solución radial exacta para f = χ_{B_eps} en la bola unidad (requiere p > n)"""
    _check_radius(r)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps debe estar en (0, 1), recibido {eps}")
    if not beta > 0:
        raise ValueError(f"beta debe ser positivo, recibido {beta}")
    if p == math.inf:
        return 1.0 / beta + (1.0 - r)
    if not p > max(n, 1):
        raise ValueError(f"La fórmula requiere p > n = {n}, recibido p={p}")

    alpha = 1.0 / (p - 1.0)
    n_alpha = n ** alpha
    eps_na = eps ** (n * alpha)
    outer_exp = (p - n) / (p - 1.0)
    boundary = eps_na * math.exp(-alpha * (math.log(n) + p * math.log(beta)))
    outer_coef = eps_na * (p - 1.0) / (n_alpha * (p - n))

    if r < eps:
        inner = (p - 1.0) / (n_alpha * p) * (eps ** (p / (p - 1.0)) - r ** (p / (p - 1.0)))
        return inner + outer_coef * (1.0 - eps ** outer_exp) + boundary
    return outer_coef * (1.0 - r ** outer_exp) + boundary


def indicator_radial_mass(n: int, eps: float = 1.0) -> Callable[[float], float]:
    """F(s) = ∫_0^s t^{n−1} χ_{[0,eps]}(t) dt"""
    return lambda s: min(s, eps) ** n / n


def radial_profile_quadrature(n: int, p: float, beta: float,
                              radial_mass: Callable[[float], float], r: float,
                              breakpoints: Sequence[float] = ()) -> float:
    """Perfil radial por cuadratura de la EDO integrada una vez"""
    _check_radius(r)
    if not p > 1 or p == math.inf:
        raise ValueError(f"La cuadratura requiere 1 < p < ∞, recibido {p}")
    alpha = 1.0 / (p - 1.0)
    boundary = radial_mass(1.0) ** alpha / beta ** (p * alpha)
    if r >= 1.0:
        return boundary

    def integrand(s: float) -> float:
        if s <= 0.0:
            return 0.0
        return (radial_mass(s) / s ** (n - 1)) ** alpha

    points = [b for b in breakpoints if r < b < 1.0] or None
    value, _ = integrate.quad(integrand, r, 1.0, points=points, epsabs=1e-13, epsrel=1e-12, limit=200)
    return boundary + value


def source_radial_mass(spec: str, n: int = 2) -> Optional[tuple[Callable[[float], float], tuple[float, ...]]]:
    """(F, puntos de quiebre) para las fuentes radiales; None si f no es un generador"""
    match = _SOURCE_PATTERN.match(spec)
    if not match:
        return None
    name, raw_args = match.group(1), match.group(2)
    args = [float(a) for a in raw_args.split(",")] if raw_args and raw_args.strip() else []
    if name == "const":
        c = args[0] if args else 1.0
        return (lambda s: c * s ** n / n), ()
    if name == "ball_indicator" and len(args) == 1:
        return indicator_radial_mass(n, args[0]), (args[0],)
    if name == "annulus_indicator" and len(args) == 2:
        r0, r1 = args
        return (lambda s: (min(max(s, r0), r1) ** n - r0 ** n) / n), (r0, r1)
    return None


def radial_oracle_field(dom: Domain, p: float, beta: float,
                        radial_mass: Callable[[float], float],
                        breakpoints: Sequence[float] = (), samples: int = 513) -> ScalarField:
    """Perfil radial tabulado en [0, 1] e interpolado en |x| de cada vértice"""
    if not p > 1 or p == math.inf:
        raise ValueError(f"El perfil tabulado requiere 1 < p < ∞, recibido {p}")
    radii = np.union1d(np.linspace(0.0, 1.0, samples),
                       [b for b in breakpoints if 0.0 < b < 1.0])
    alpha = 1.0 / (p - 1.0)

    def integrand(s: float) -> float:
        if s <= 0.0:
            return 0.0
        return (radial_mass(s) / s ** (dom.n - 1)) ** alpha

    # Integrales por tramo acumuladas desde r = 1 hacia el centro
    pieces = np.array([
        integrate.quad(integrand, a, b, epsabs=1e-13, epsrel=1e-12, limit=100)[0]
        for a, b in zip(radii[:-1], radii[1:])
    ])
    tail = np.concatenate((np.cumsum(pieces[::-1])[::-1], [0.0]))
    profile = radial_mass(1.0) ** alpha / beta ** (p * alpha) + tail

    r = np.clip(np.hypot(dom.coords[:, 0], dom.coords[:, 1]), 0.0, 1.0)
    return ScalarField(dom, np.interp(r, radii, profile))


# Problema límite

def limit_maximal_solution(dom: Domain, beta: float) -> ScalarField:
    """v̄_∞ = 1/β + d(·, ∂Ω)"""
    if not beta > 0:
        raise ValueError(f"beta debe ser positivo, recibido {beta}")
    return ScalarField(dom, 1.0 / beta + dom.distance.d.values)


def maximal_solution_sampler(dom: Domain, beta: float) -> Callable[[np.ndarray], np.ndarray]:
    """x ↦ 1/β + d(x, ∂Ω) en puntos arbitrarios, exacta respecto a la frontera discreta"""
    if not beta > 0:
        raise ValueError(f"beta debe ser positivo, recibido {beta}")
    return lambda points: 1.0 / beta + boundary_distance_at(dom, points)


def j_infinity(dom: Domain, f: ScalarField, phi: ScalarField) -> float:
    """J_∞(φ) = −∫ f φ"""
    if f.dom is not dom or phi.dom is not dom:
        raise DomainMismatch("f y φ deben vivir en el mismo dominio")
    return -float(source_load(dom, f) @ phi.values)


def upper_envelope_check(v: ScalarField, dom: Domain, beta: float) -> float:
    """max(v − (1/β + d)); no positivo si v respeta la envolvente"""
    return float(np.max(v.values - limit_maximal_solution(dom, beta).values))


def _neighbor_graph(dom: Domain, members: np.ndarray) -> sparse.csr_matrix:
    """Grafo de vecindad 8 restringido a los vértices marcados"""
    neighbors = dom.neighbors8
    rows, cols = [], []
    for k in range(8):
        nb = neighbors[:, k]
        valid = members & (nb >= 0)
        valid[valid] &= members[nb[valid]]
        rows.append(np.flatnonzero(valid))
        cols.append(nb[valid])
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    n = dom.n_vertices
    return sparse.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))


def amle_extend(dom: Domain, fixed, values, tol: float = LabConstants.AMLE_TOL,
                max_iter: int = LabConstants.AMLE_MAX_ITER,
                initial: Optional[np.ndarray] = None) -> ScalarField:
    """Extensión ∞-armónica discreta por iteración del punto medio.

    En cada vértice libre u ← ½(max + min) sobre sus vecinos de 8; la
    actualización es de tipo Jacobi, por lo que no depende del orden.
    """
    fixed_idx = np.asarray(fixed, dtype=np.intp)
    values = np.asarray(values, dtype=float)
    if fixed_idx.size == 0:
        raise ValueError("Se necesita al menos un vértice fijo")
    if values.shape != fixed_idx.shape:
        raise ValueError(f"{values.size} valores para {fixed_idx.size} vértices fijos")

    is_fixed = np.zeros(dom.n_vertices, dtype=bool)
    is_fixed[fixed_idx] = True
    free = np.flatnonzero(~is_fixed)

    n_comp, labels = connected_components(_neighbor_graph(dom, np.ones(dom.n_vertices, dtype=bool)),
                                          directed=False)
    anchored = np.zeros(n_comp, dtype=bool)
    anchored[labels[fixed_idx]] = True
    if free.size and not anchored[labels[free]].all():
        raise DisconnectedComponent("Hay vértices libres sin conexión con ningún vértice fijo")

    u = np.empty(dom.n_vertices)
    if initial is not None:
        u[:] = initial
    else:
        u[:] = float(values.mean())
    u[fixed_idx] = values

    neighbors = dom.neighbors8[free]
    missing = neighbors < 0
    safe = np.where(missing, 0, neighbors)
    change = math.inf
    iterations = 0
    while change > tol and iterations < max_iter:
        samples = u[safe]
        upper = np.where(missing, -np.inf, samples).max(axis=1)
        lower = np.where(missing, np.inf, samples).min(axis=1)
        updated = 0.5 * (upper + lower)
        change = float(np.max(np.abs(updated - u[free]))) if free.size else 0.0
        u[free] = updated
        iterations += 1

    if change > tol:
        logger.warning(f"AMLE sin converger tras {iterations} iteraciones (cambio {change:.3e})")
    else:
        logger.debug(f"AMLE convergió en {iterations} iteraciones")
    return ScalarField(dom, u)


def uniqueness_certificate(dom: Domain, f: ScalarField, beta: float,
                           ridge: Optional[RidgeSet] = None) -> UniquenessReport:
    """Decide ℛ ⊆ supp f; si no se cumple, construye un segundo maximizador"""
    if np.any(f.values < 0):
        raise NonpositiveField("La fuente f debe ser no negativa")
    if not np.any(f.values > 0):
        raise ValueError("La fuente f es idénticamente nula")

    ridge = ridge if ridge is not None else ridge_set(dom)
    support = dom.dilate(f.values > 0, 1)
    ridge_mask = ridge.as_mask(dom)
    uncovered = tuple(int(v) for v in np.flatnonzero(ridge_mask & ~support))
    if not uncovered:
        logger.info(f"Cresta ({len(ridge)} vértices) contenida en supp f: solución única")
        return UniquenessReport(ridge=ridge, support=support, included=True)

    maximal = limit_maximal_solution(dom, beta)
    candidates = ~support & ~dom.is_boundary
    _, labels = connected_components(_neighbor_graph(dom, candidates), directed=False)
    region = candidates & (labels == labels[uncovered[0]])
    fixed = np.flatnonzero(~region)

    witness = amle_extend(dom, fixed, maximal.values[fixed], initial=maximal.values)
    report_feas = feasibility(dom, witness, beta)
    field_gap = float(np.max(np.abs(witness.values - maximal.values)))
    objective_gap = abs(j_infinity(dom, f, witness) - j_infinity(dom, f, maximal))
    slack = LabConstants.WITNESS_FEASIBILITY_FACTOR * dom.h
    witness_ok = (
        report_feas.feasible(slack)
        and field_gap > LabConstants.WITNESS_MIN_GAP_FACTOR * dom.h
        and objective_gap <= 1e-8
    )

    report = UniquenessReport(
        ridge=ridge,
        support=support,
        included=False,
        uncovered=uncovered,
        witness=witness,
        witness_region=region,
        witness_feasibility=report_feas,
        field_gap=field_gap,
        objective_gap=objective_gap,
        witness_ok=witness_ok,
    )
    if not report_feas.feasible(slack):
        raise WitnessConstructionFailed(
            f"El testigo viola las restricciones (Lipschitz {report_feas.lipschitz_defect:.3e}, "
            f"frontera {report_feas.boundary_defect:.3e}) por encima de {slack:.3e}",
            report,
        )
    logger.info(
        f"Cresta no contenida en supp f ({len(uncovered)} vértices descubiertos): "
        f"testigo con diferencia {field_gap:.4f} y ΔJ_∞ = {objective_gap:.2e}"
    )
    return report


def poisson_sweep(dom: Domain, f: ScalarField, beta: float, p_list: Sequence[float],
                  opts: Optional[PoissonOptions] = None) -> tuple[PoissonSweepTable, list[PoissonResult]]:
    """Soluciones para p creciente, cada una arrancando desde la anterior"""
    p_values = [float(p) for p in p_list]
    if not p_values or any(p <= 1 for p in p_values):
        raise ValueError(f"Todos los p deben ser > 1: {p_values}")
    if any(b <= a for a, b in zip(p_values, p_values[1:])):
        raise ValueError(f"p_list debe ser estrictamente creciente: {p_values}")

    maximal = limit_maximal_solution(dom, beta)
    rows, results = [], []
    warm: Optional[ScalarField] = None
    warm_p: Optional[float] = None
    for p in p_values:
        res = solve_p_poisson(dom, f, RobinParams(beta, p), opts, initial=warm, from_p=warm_p)
        rows.append(PoissonSweepRow(
            p=p,
            j_value=res.j_value,
            residual_norm=res.residual_norm,
            sup_gap=float(np.max(np.abs(res.v.values - maximal.values))),
            envelope_violation=upper_envelope_check(res.v, dom, beta),
            iterations=res.iterations,
            converged=res.converged,
        ))
        results.append(res)
        warm, warm_p = res.v, p
    return PoissonSweepTable(beta=float(beta), rows=tuple(rows)), results
