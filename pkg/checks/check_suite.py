"""
Suite de invariantes del laboratorio a resolución de escritorio (h = 1/32).

Cada verificación recibe el contexto compartido y devuelve (pasó, detalle).
El generador aleatorio de cada verificación se deriva de la semilla y del
nombre, así el resumen no depende del orden de ejecución ni del número de
hilos. Los tiempos solo van a la consola y al log.
"""

import math
import logging
import tempfile
import threading
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from config.settings import LabConfig, LabConstants
from core.task_runner import TaskRunner
from numerics.domain import (
    brute_force_distance,
    build_grid_domain,
    lambda_infinity,
    ridge_set,
    trace_to_ridge,
)
from numerics.eigen import (
    eigen_residual_bound,
    eigen_sweep,
    eigenfunction_residual,
    faber_krahn_check,
    solve_eigen,
)
from numerics.fields import (
    RobinParams,
    ScalarField,
    gradient,
    log_rayleigh_gradient,
    log_rayleigh_quotient,
    stabilized_p_norm,
)
from numerics.poisson import (
    PoissonFunctional,
    PoissonOptions,
    amle_extend,
    limit_maximal_solution,
    make_source,
    maximal_solution_sampler,
    radial_oracle_field,
    solve_p_poisson,
    source_load,
    source_radial_mass,
    uniqueness_certificate,
    upper_envelope_check,
)
from numerics.shapes import disk_domain, l_shape_domain, random_connected_mask, square_domain
from numerics.viscosity import (
    eikonal_residual,
    infinity_laplacian,
    limit_pde_residual,
    off_ridge_mask,
    unit_gradient_defect,
)
from storage.artifact_store import ArtifactStore, verify_round_trip
from utils.health_check import ResourceMonitor
from utils.report_formatter import ReportFormatter

logger = logging.getLogger(__name__)

CheckFunc = Callable[["CheckContext"], Tuple[bool, str]]

REGISTRY: List[Tuple[str, CheckFunc]] = []


def register(name: str):
    """Registra una verificación; el orden de registro es el orden del resumen"""
    def decorator(func: CheckFunc) -> CheckFunc:
        REGISTRY.append((name, func))
        return func
    return decorator


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


class CheckContext:
    """Semilla, resolución y dominios compartidos entre verificaciones"""

    def __init__(self, seed: int, h: float = LabConstants.CHECK_H):
        self.seed = int(seed)
        self.h = float(h)
        self._lock = threading.Lock()
        self._domains: Dict[str, object] = {}

    def rng(self, name: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(name.encode("utf-8"))])

    def domain(self, name: str):
        builders = {
            "disk": lambda: disk_domain(1.0, self.h),
            "square": lambda: square_domain(1.0, self.h),
            "l_shape": lambda: l_shape_domain(self.h),
        }
        with self._lock:
            if name not in self._domains:
                self._domains[name] = builders[name]()
            return self._domains[name]


# Dominio y geometría

@register("dominio.malla_3x3")
def _check_small_grid(ctx: CheckContext):
    dom = build_grid_domain(np.ones((3, 3), dtype=bool), 1.0)
    ok = dom.faces.shape[0] == 8 and dom.area == 4.0 and dom.perimeter == 8.0
    return ok, f"caras={dom.faces.shape[0]}, area={dom.area:g}, perimetro={dom.perimeter:g}"


@register("dominio.perimetro")
def _check_perimeter(ctx: CheckContext):
    square = ctx.domain("square").perimeter
    l_shape = ctx.domain("l_shape").perimeter
    exact = 2.0 * math.pi
    disk_err = abs(ctx.domain("disk").perimeter - exact) / exact
    fine_err = abs(disk_domain(1.0, 0.5 * ctx.h).perimeter - exact) / exact
    # El disco digital converge en primer orden: 2.3 % a h = 1/32
    ok = (abs(square - 4.0) <= 1e-12 and abs(l_shape - 8.0) <= 1e-12
          and disk_err <= 0.03 and fine_err <= 0.6 * disk_err)
    return ok, (f"cuadrado={square:.6f}, L={l_shape:.6f}, disco error relativo={disk_err:.4f} "
                f"(h/2: {fine_err:.4f})")


@register("dominio.distancia_exacta")
def _check_distance(ctx: CheckContext):
    rng = ctx.rng("dominio.distancia_exacta")
    domains = [ctx.domain("disk"), ctx.domain("l_shape")]
    domains += [build_grid_domain(random_connected_mask(rng, 33), ctx.h) for _ in range(3)]
    mismatches = 0
    for dom in domains:
        sq, _ = brute_force_distance(dom)
        mismatches += int(np.count_nonzero(sq != dom.distance.sq_half))
    return mismatches == 0, f"{len(domains)} máscaras, {mismatches} vértices distintos"


@register("dominio.lambda_infinito")
def _check_lambda_infinity(ctx: CheckContext):
    disk = lambda_infinity(ctx.domain("disk"), 1.0)
    square = lambda_infinity(ctx.domain("square"), 1.0)
    ok = abs(disk - 0.5) <= 0.02 and abs(square - 2.0 / 3.0) <= 0.02
    return ok, f"disco={disk:.4f} (0.5), cuadrado={square:.4f} (0.6667)"


@register("dominio.lambda_monotonia")
def _check_lambda_monotone(ctx: CheckContext):
    rng = ctx.rng("dominio.lambda_monotonia")
    dom = ctx.domain("square")
    betas = np.sort(rng.uniform(0.1, 10.0, size=6))
    by_beta = [lambda_infinity(dom, b) for b in betas]
    by_radius = [lambda_infinity(disk_domain(r, ctx.h), 1.0) for r in (0.5, 0.75, 1.0)]
    ok = all(b > a for a, b in zip(by_beta, by_beta[1:])) and all(
        b < a for a, b in zip(by_radius, by_radius[1:]))
    return ok, "creciente en β y decreciente en R"


@register("dominio.faber_krahn_infinito")
def _check_faber_krahn(ctx: CheckContext):
    rng = ctx.rng("dominio.faber_krahn_infinito")
    failures = 0
    for _ in range(LabConstants.CHECK_RANDOM_MASKS):
        dom = build_grid_domain(random_connected_mask(rng, 33), ctx.h)
        _, _, ok = faber_krahn_check(dom, 1.0, math.inf)
        failures += 0 if ok else 1
    return failures == 0, f"{LabConstants.CHECK_RANDOM_MASKS} máscaras aleatorias, {failures} fallos"


@register("dominio.cresta")
def _check_ridge(ctx: CheckContext):
    disk, square = ctx.domain("disk"), ctx.domain("square")
    disk_ridge = ridge_set(disk)
    radii = np.hypot(*disk.coords[disk_ridge.sorted_members()].T)
    pts = square.coords[ridge_set(square).sorted_members()]
    # Distancia a la diagonal más cercana del cuadrado unidad
    diagonal = np.minimum(np.abs(pts[:, 0] - pts[:, 1]), np.abs(pts[:, 0] + pts[:, 1] - 1.0)) / math.sqrt(2.0)
    ok = radii.size > 0 and radii.max() <= 4.0 * ctx.h and pts.size > 0 and diagonal.max() <= ctx.h
    return ok, (f"disco: {radii.size} vértices, radio máximo {radii.max() / ctx.h:.2f}h; "
                f"cuadrado: distancia máxima a las diagonales {diagonal.max() / ctx.h:.2f}h")


@register("dominio.gradiente_distancia")
def _check_distance_gradient(ctx: CheckContext):
    dom = ctx.domain("square")
    dist = dom.distance
    excluded = ~off_ridge_mask(dom, ridge_set(dom)) | (dist.d.values < LabConstants.RIDGE_MIN_DEPTH * ctx.h)
    keep = ~excluded[dom.triangles].any(axis=1)
    norms = np.hypot(dist.grad[keep, 0], dist.grad[keep, 1])
    ok = keep.any() and norms.min() >= 1.0 - 2.0 * ctx.h and norms.max() <= 1.0 + 1e-12
    return ok, f"|∇d| en [{norms.min():.6f}, {norms.max():.6f}] sobre {int(keep.sum())} triángulos"


@register("dominio.trazado_recto")
def _check_trace(ctx: CheckContext):
    worst = slack = 0.0
    reached = True
    for name, start in (("disk", (0.5, 0.0)), ("square", (0.2, 0.5))):
        path = trace_to_ridge(ctx.domain(name), start)
        worst = max(worst, path.deviation)
        slack = max(slack, abs(path.length - path.distance_gain))
        reached = reached and path.reached_ridge
    ok = reached and worst <= ctx.h and slack <= 2.0 * ctx.h
    return ok, f"desviación máxima {worst / ctx.h:.3f}h, |longitud − ganancia| {slack / ctx.h:.3f}h"


# Campos

@register("campos.gradiente_afin")
def _check_affine_gradient(ctx: CheckContext):
    dom = ctx.domain("l_shape")
    w = ScalarField.from_function(dom, lambda x, y: 2.0 * x - 3.0 * y + 1.0)
    err = float(np.max(np.abs(gradient(dom, w) - np.array([2.0, -3.0]))))
    return err <= 1e-12, f"error máximo {err:.1e}"


@register("campos.norma_estabilizada")
def _check_stabilized_norm(ctx: CheckContext):
    rng = ctx.rng("campos.norma_estabilizada")
    samples = rng.uniform(0.5, 2.0, size=200)
    weights = rng.uniform(0.1, 1.0, size=200)
    worst = 0.0
    for p in (1.5, 2.0, 7.0, 16.0, 30.0):
        naive = float(np.sum(weights * samples ** p)) ** (1.0 / p)
        worst = max(worst, abs(stabilized_p_norm(samples, weights, p) - naive) / naive)
    large = stabilized_p_norm(rng.uniform(1e3, 1e5, size=200), weights, 200.0)
    ok = worst <= 1e-12 and math.isfinite(large)
    return ok, f"error relativo {worst:.1e}, p=200 finita={math.isfinite(large)}"


@register("campos.cociente_homogeneo")
def _check_quotient_homogeneity(ctx: CheckContext):
    rng = ctx.rng("campos.cociente_homogeneo")
    dom = ctx.domain("square")
    w = ScalarField(dom, rng.uniform(0.1, 1.0, size=dom.n_vertices))
    worst = 0.0
    for p in (2.0, 3.5, 8.0):
        rp = RobinParams(1.0, p)
        base = log_rayleigh_quotient(dom, w, rp)
        for variant in (w.scaled(7.3), w.scaled(-1.0)):
            worst = max(worst, abs(log_rayleigh_quotient(dom, variant, rp) - base))
    return worst <= 1e-10, f"diferencia máxima en log Q {worst:.1e}"


@register("campos.norma_monotona")
def _check_norm_monotone(ctx: CheckContext):
    samples = np.linspace(0.5, 2.0, 200)
    weights = np.full(samples.size, 1.0 / samples.size)
    p_values = (32.0, 64.0, 128.0, 256.0)
    norms = np.array([stabilized_p_norm(samples, weights, p) for p in p_values])
    errors = samples.max() - norms
    ratios = errors[1:] / errors[:-1]
    # Con pesos de masa 1 la norma crece hacia el máximo y el error cae como 1/p
    ok = bool(np.all(np.diff(norms) >= 0) and np.all(ratios >= 0.45) and np.all(ratios <= 0.8))
    return ok, "cociente de errores al doblar p: " + ", ".join(f"{r:.3f}" for r in ratios)


@register("campos.cociente_maximal")
def _check_maximal_quotient(ctx: CheckContext):
    details, ok = [], True
    for name in ("disk", "square"):
        dom = ctx.domain(name)
        vbar = limit_maximal_solution(dom, 1.0)
        lam = lambda_infinity(dom, 1.0)
        for p in (50.0, 100.0):
            root = math.exp(log_rayleigh_quotient(dom, vbar, RobinParams(1.0, p)) / p)
            ok = ok and root >= lam - ctx.h
            details.append(f"{name} p={p:g}: {root:.4f} (Λ∞={lam:.4f})")
    return ok, ", ".join(details)


def _directional_fd(fun: Callable[[np.ndarray], float], x: np.ndarray, grad: np.ndarray) -> float:
    """Error relativo de la derivada en la dirección del gradiente"""
    direction = grad / np.linalg.norm(grad)
    eps = 1e-5
    numeric = (fun(x + eps * direction) - fun(x - eps * direction)) / (2.0 * eps)
    exact = float(grad @ direction)
    return abs(numeric - exact) / abs(exact)


@register("autovalor.gradiente_diferencias")
def _check_eigen_gradient(ctx: CheckContext):
    rng = ctx.rng("autovalor.gradiente_diferencias")
    dom = square_domain(1.0, 1.0 / 16.0)
    x = rng.uniform(0.5, 1.5, size=dom.n_vertices)
    worst = 0.0
    for p in (2.0, 3.0, 6.0):
        rp = RobinParams(1.0, p)
        _, grad = log_rayleigh_gradient(dom, x, rp)
        worst = max(worst, _directional_fd(lambda v: log_rayleigh_gradient(dom, v, rp)[0], x, grad))
    return worst <= 1e-6, f"error relativo {worst:.1e}"


def _square_robin_eigenvalue(beta: float) -> float:
    """Λ_2 del cuadrado unidad: 2μ² con μ·tan(μ/2) = β"""
    mu = brentq(lambda m: m * math.tan(m / 2.0) - beta, 1e-12, math.pi - 1e-9)
    return 2.0 * mu * mu


@register("autovalor.lineal")
def _check_linear_eigen(ctx: CheckContext):
    res = solve_eigen(square_domain(1.0, 1.0 / 16.0), RobinParams(1.0, 2.0))
    exact = _square_robin_eigenvalue(1.0)
    rel = abs(res.lambda_p - exact) / exact
    return res.converged and rel <= 0.05, f"Λ_2 = {res.lambda_p:.5f}, separable {exact:.5f}, error {rel:.4f}"


@register("autovalor.convergencia")
def _check_eigen_convergence(ctx: CheckContext):
    dom = square_domain(1.0, 1.0 / 16.0)
    details, ok = [], True
    for p in (4.0, 8.0):
        res = solve_eigen(dom, RobinParams(1.0, p))
        ok = ok and res.converged
        details.append(f"p={p:g}: {res.iterations} iteraciones, residuo {res.grad_norm:.1e}")
    return ok, ", ".join(details)


@register("autovalor.residuo_viscoso")
def _check_eigen_viscosity(ctx: CheckContext):
    dom = square_domain(1.0, 1.0 / 16.0)
    _, results = eigen_sweep(dom, 1.0, [2.0, 4.0, 8.0, 16.0])
    last = results[-1]
    p95 = eigenfunction_residual(last, dom, 1.0).interior_quantiles.p95
    bound = eigen_residual_bound(dom, last.p)
    ok = last.converged and p95 <= bound
    return ok, f"p={last.p:g}: p95 = {p95:.3e} (cota {bound:.3e})"


@register("poisson.gradiente_diferencias")
def _check_poisson_gradient(ctx: CheckContext):
    rng = ctx.rng("poisson.gradiente_diferencias")
    dom = square_domain(1.0, 1.0 / 16.0)
    f = ScalarField.constant(dom, 1.0)
    x = rng.uniform(0.9, 1.1, size=dom.n_vertices)
    worst = 0.0
    for p in (2.0, 3.0, 6.0):
        fun = PoissonFunctional(dom, f, RobinParams(1.0, p))
        worst = max(worst, _directional_fd(fun.value, x, fun.gradient(x)))
    return worst <= 1e-6, f"error relativo {worst:.1e}"


# p-Poisson

@register("poisson.fuente_nula")
def _check_zero_source(ctx: CheckContext):
    dom = ctx.domain("square")
    res = solve_p_poisson(dom, ScalarField.constant(dom, 0.0), RobinParams(1.0, 3.0))
    peak = float(np.max(np.abs(res.v.values)))
    return res.converged and peak <= 1e-12, f"max|v| = {peak:.1e}"


@register("poisson.oraculo_radial")
def _check_radial_oracle(ctx: CheckContext):
    dom = ctx.domain("disk")
    res = solve_p_poisson(dom, ScalarField.constant(dom, 1.0), RobinParams(1.0, 2.0))
    mass, breaks = source_radial_mass("const(1)")
    oracle = radial_oracle_field(dom, 2.0, 1.0, mass, breaks)
    rel = float(np.max(np.abs(res.v.values - oracle.values)) / np.max(oracle.values))
    return res.converged and rel <= 0.06, f"error relativo sup {rel:.4f} con h = {ctx.h:g}"


@register("poisson.convexidad_estricta")
def _check_strict_convexity(ctx: CheckContext):
    rng = ctx.rng("poisson.convexidad_estricta")
    dom = ctx.domain("disk")
    f = ScalarField.constant(dom, 1.0)
    opts = PoissonOptions(tol=1e-10)
    worst = 0.0
    for p in (2.0, 4.0):
        a, b = (solve_p_poisson(dom, f, RobinParams(1.0, p), opts,
                                initial=ScalarField(dom, rng.uniform(0.0, 2.0, size=dom.n_vertices)))
                for _ in range(2))
        worst = max(worst, float(np.max(np.abs(a.v.values - b.v.values))))
    return worst <= 1e-6, f"diferencia sup entre arranques {worst:.1e}"


@register("poisson.envolvente")
def _check_envelope(ctx: CheckContext):
    dom = ctx.domain("disk")
    res = solve_p_poisson(dom, ScalarField.constant(dom, 1.0), RobinParams(2.0, 24.0))
    violation = upper_envelope_check(res.v, dom, 2.0)
    return violation <= 0.05, f"max(v_24 − (1/β + d)) = {violation:+.4f}"


@register("poisson.unicidad_incluida")
def _check_uniqueness_included(ctx: CheckContext):
    dom = ctx.domain("disk")
    report = uniqueness_certificate(dom, make_source(dom, "ball_indicator(0.5)"), 1.0)
    return report.included, f"veredicto: {report.verdict}"


@register("poisson.unicidad_testigo")
def _check_uniqueness_witness(ctx: CheckContext):
    dom = ctx.domain("disk")
    report = uniqueness_certificate(dom, make_source(dom, "annulus_indicator(0.6,0.9)"), 1.0)
    ok = not report.included and report.witness_ok
    return ok, f"veredicto: {report.verdict}, diferencia sup {report.field_gap:.3f}"


@register("poisson.eikonal_limite")
def _check_eikonal_limit(ctx: CheckContext):
    dom = ctx.domain("disk")
    f = ScalarField.constant(dom, 1.0)
    p = 24.0
    res = solve_p_poisson(dom, f, RobinParams(1.0, p))
    unit = unit_gradient_defect(dom, res.v, where=f.values > 0)
    bound = 5.0 * max(ctx.h, 1.0 / p)
    return res.converged and unit.p95 <= bound, f"p95 ||∇v_24| − 1| = {unit.p95:.3e} (cota {bound:.3e})"


@register("poisson.forma_debil")
def _check_weak_form(ctx: CheckContext):
    rng = ctx.rng("poisson.forma_debil")
    dom = square_domain(1.0, 1.0 / 16.0)
    f = ScalarField.constant(dom, 1.0)
    rp = RobinParams(1.5, 3.0)
    res = solve_p_poisson(dom, f, rp, PoissonOptions(tol=1e-10))
    residual = PoissonFunctional(dom, f, rp).gradient(res.v.values)
    load = np.abs(source_load(dom, f))
    worst = 0.0
    for _ in range(20):
        phi = rng.standard_normal(dom.n_vertices)
        worst = max(worst, abs(float(residual @ phi)) / (1.0 + float(load @ np.abs(phi))))
    return res.converged and worst <= 1e-7, f"máximo relativo sobre 20 campos {worst:.1e}"


@register("poisson.amle_cono")
def _check_amle_cone(ctx: CheckContext):
    dom = disk_domain(1.0, 1.0 / 16.0)
    centre = dom.nearest_vertex((0.0, 0.0))
    fixed = np.concatenate(([centre], dom.boundary_vertices))
    values = np.zeros(fixed.size)
    values[0] = 1.0
    ext = amle_extend(dom, fixed, values).values
    cone = 1.0 - np.minimum(np.hypot(*dom.coords.T), 1.0)
    in_range = ext.min() >= -1e-12 and ext.max() <= 1.0 + 1e-12
    gap = float(np.max(np.abs(ext - cone)))
    return in_range and gap <= 0.2, f"rango [{ext.min():.3f}, {ext.max():.3f}], max|u − (1 − r)| = {gap:.3f}"


# Residuos viscosos

@register("viscosidad.afin")
def _check_affine_laplacian(ctx: CheckContext):
    dom = ctx.domain("square")
    w = ScalarField.from_function(dom, lambda x, y: 0.3 * x - 1.7 * y + 2.0)
    worst = float(np.max(np.abs(infinity_laplacian(dom, w).values)))
    return worst <= 1e-9, f"max|Δ∞u| = {worst:.1e}"


@register("viscosidad.cuadratica")
def _check_quadratic_laplacian(ctx: CheckContext):
    dom = ctx.domain("square")
    w = ScalarField.from_function(dom, lambda x, y: x * x)
    lap = infinity_laplacian(dom, w).values
    interior = np.all(dom.neighbors8 >= 0, axis=1) & (dom.coords[:, 0] > 0.5 * ctx.h)
    expected = 8.0 * dom.coords[interior, 0] ** 2
    worst = float(np.max(np.abs(lap[interior] - expected)))
    return worst <= 1e-8, f"max|Δ∞u − 8x²| = {worst:.1e}"


@register("viscosidad.residuo_maximal")
def _check_maximal_residual(ctx: CheckContext):
    details, ok = [], True
    for name in ("disk", "square"):
        dom = ctx.domain(name)
        vbar = limit_maximal_solution(dom, 1.0)
        report = limit_pde_residual(dom, vbar, lambda_infinity(dom, 1.0), 1.0, ridge=ridge_set(dom),
                                    stencil="interpolated", sampler=maximal_solution_sampler(dom, 1.0))
        p95 = max(report.interior_quantiles.p95, report.boundary_quantiles.p95)
        ok = ok and p95 <= 5.0 * ctx.h
        details.append(f"{name} p95={p95 / ctx.h:.2f}h")
    return ok, ", ".join(details)


@register("viscosidad.signo")
def _check_sign(ctx: CheckContext):
    dom = ctx.domain("disk")
    vbar = limit_maximal_solution(dom, 1.0)
    lam = lambda_infinity(dom, 1.0)
    keep = ~limit_pde_residual(dom, vbar, lam, 1.0).masked
    below = float(eikonal_residual(dom, vbar, lam).values[keep].min())
    above = float(eikonal_residual(dom, vbar, 1.1 * lam).values[keep].min())
    ok = above < 0.0 and below >= -5.0 * ctx.h
    return ok, f"min rama eikonal: Λ∞ → {below:+.3f}, 1.1Λ∞ → {above:+.3f}"


# Artefactos

@register("artefactos.ida_y_vuelta")
def _check_round_trip(ctx: CheckContext):
    dom = ctx.domain("square")
    with tempfile.TemporaryDirectory() as tmp:
        store = ArtifactStore(Path(tmp))
        store.initialize()
        store.write_field("v.csv", limit_maximal_solution(dom, 1.0))
        store.write_table("tabla.csv", ["p", "valor"], [(2.0, 0.5), (4.0, 0.25)])
        store.write_report("# prueba", ReportFormatter().format_artifacts(store.artifacts))
        problems = verify_round_trip(tmp, dom)
    return not problems, f"{len(problems)} problemas"


def run_check_suite(seed: int = 0, config: Optional[LabConfig] = None,
                    only: Optional[List[str]] = None,
                    monitor: Optional[ResourceMonitor] = None) -> List[CheckResult]:
    """Ejecuta las verificaciones registradas y devuelve los resultados en orden"""
    config = config or LabConfig()
    ctx = CheckContext(seed)
    monitor = monitor or ResourceMonitor(config)
    selected = [(name, func) for name, func in REGISTRY if only is None or name in only]

    def job(name: str, func: CheckFunc):
        def run():
            with monitor.track(name):
                return func(ctx)
        return run

    outcomes = TaskRunner(config).run_all([(name, job(name, func)) for name, func in selected])
    results = []
    for outcome in outcomes:
        if outcome.ok:
            passed, detail = outcome.value
        else:
            passed, detail = False, f"excepción {type(outcome.error).__name__}: {outcome.error}"
        results.append(CheckResult(outcome.name, bool(passed), detail, outcome.seconds))
    return results


def check_suite(seed: int = 0, output_dir: Optional[Path] = None,
                config: Optional[LabConfig] = None) -> int:
    """Corre la suite, imprime veredictos y tiempos, y escribe summary.txt; 0 si todo pasa"""
    formatter = ReportFormatter()
    monitor = ResourceMonitor(config)
    results = run_check_suite(seed, config, monitor=monitor)
    summary = formatter.format_check_summary(seed, results)

    for result in results:
        print(f"{formatter.format_check_line(result.name, result.passed, result.detail)} "
              f"[{result.seconds:.2f}s]")
    health = formatter.format_health(monitor.get_health_report())
    print(health)
    logger.info(health)
    failed = [r.name for r in results if not r.passed]

    if output_dir is not None:
        store = ArtifactStore(output_dir)
        if store.initialize():
            store.write_text("summary.txt", summary)

    if failed:
        logger.error(f"Suite con {len(failed)} fallos: {', '.join(failed)}")
        return 1
    logger.info(f"Suite completa: {len(results)} verificaciones pasaron")
    return 0
