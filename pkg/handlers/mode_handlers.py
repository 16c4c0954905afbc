"""
Handlers de los modos de ejecución: cada uno corre su experimento, escribe
sus artefactos y deja en el resultado las secciones del reporte y las
verificaciones del modo
"""

import gc
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config.run_config import RunConfig
from config.settings import LabConstants
from numerics.domain import Domain, lambda_infinity, ridge_set
from numerics.eigen import (
    EigenOptions,
    eigen_residual_bound,
    eigen_sweep,
    eigenfunction_limit_check,
    eigenfunction_residual,
)
from numerics.fields import ScalarField, feasibility, infinity_quotient
from numerics.poisson import (
    PoissonOptions,
    j_infinity,
    limit_maximal_solution,
    maximal_solution_sampler,
    poisson_sweep,
    radial_oracle_field,
    source_radial_mass,
    uniqueness_certificate,
)
from numerics.viscosity import Quantiles, infinity_laplacian, limit_pde_residual, unit_gradient_defect
from utils.error_handler import WitnessConstructionFailed, handle_errors
from utils.report_formatter import ReportFormatter

logger = logging.getLogger(__name__)


@dataclass
class ModeOutcome:
    """Lo que un modo aporta al reporte; se llena aunque el modo falle a mitad"""

    sections: List[str] = field(default_factory=list)
    assertions: List[Tuple[str, bool, str]] = field(default_factory=list)
    nonconverged: bool = False

    def check(self, name: str, ok: bool, detail: str):
        self.assertions.append((name, bool(ok), detail))
        if not ok:
            logger.warning(f"Verificación fallida: {name} ({detail})")

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.assertions)


def _p_label(p: float) -> str:
    return f"{p:g}".replace(".", "_")


def _quantiles(values: np.ndarray) -> Quantiles:
    if values.size == 0:
        return Quantiles(math.nan, math.nan, math.nan)
    mags = np.abs(values)
    return Quantiles(float(np.quantile(mags, 0.5)), float(np.quantile(mags, 0.95)), float(mags.max()))


class ModeHandlers:
    """Gestiona todos los modos de ejecución del laboratorio"""

    def __init__(self, lab_manager):
        from core.lab_manager import LabManager
        self.lab_manager: LabManager = lab_manager
        self.store = lab_manager.store
        self.formatter = ReportFormatter()

    # Utilidades compartidas

    def _unit_disk(self, config: RunConfig) -> bool:
        return config.shape == "disk" and config.shape_params.get("radius", 1.0) == 1.0

    def _oracle_gap(self, dom: Domain, v: ScalarField, p: float, beta: float, source_spec: str):
        """(error relativo sup, v(0), oráculo v(0)) o None si no hay oráculo radial"""
        radial = source_radial_mass(source_spec, n=dom.n)
        if radial is None:
            return None
        mass, breakpoints = radial
        oracle = radial_oracle_field(dom, p, beta, mass, breakpoints)
        scale = float(np.max(np.abs(oracle.values)))
        rel = float(np.max(np.abs(v.values - oracle.values))) / scale
        center = dom.nearest_vertex((0.0, 0.0))
        return rel, float(v.values[center]), float(oracle.values[center])

    # Modos

    @handle_errors
    def handle_eigen_sweep(self, config: RunConfig, dom: Domain, outcome: ModeOutcome):
        """Barrido de autovalores Λ_p^{1/p} hacia Λ∞"""
        opts = EigenOptions(
            tol=config.tol or LabConstants.EIGEN_TOL,
            max_iter=config.max_iter or LabConstants.EIGEN_MAX_ITER,
            strict=config.strict,
        )
        try:
            table, results = eigen_sweep(dom, config.beta, config.p_list, opts)
            self.store.write_eigen_table("eigen_sweep.csv", table)
            for res in results:
                self.store.write_field(f"eigenfunction_p{_p_label(res.p)}.csv", res.u)
            outcome.sections.append(self.formatter.format_eigen_table(table))
            outcome.nonconverged = any(not row.converged for row in table.rows)

            if results:
                last = results[-1]
                limit = eigenfunction_limit_check(last, dom, config.beta)
                outcome.sections.append(
                    f"cota_autofuncion[p={last.p:g}] max(u − (1/β + d)) = {limit.violation:+.6f}"
                )
                if last.converged:
                    residual = eigenfunction_residual(last, dom, config.beta)
                    bound = eigen_residual_bound(dom, last.p)
                    outcome.sections.append(self.formatter.format_residuals(residual, last.lambda_root))
                    outcome.check(f"residuo_viscoso_p{last.p:g}", residual.interior_quantiles.p95 <= bound,
                                  f"p95 = {residual.interior_quantiles.p95:.3e} "
                                  f"(cota 10·max(h, 1/p) = {bound:.3e})")
            if len(table.rows) >= 3:
                gaps = ", ".join(f"{abs(r.gap):.4f}" for r in table.rows[-3:])
                outcome.check("gap_no_creciente", table.gap_nonincreasing(), f"|gap| en los últimos p: {gaps}")
            final = table.rows[-1]
            if final.p >= 40 and math.isfinite(final.gap):
                outcome.check("limite_geometrico", abs(final.gap) <= 0.08,
                              f"|Λ_p^(1/p) − Λ∞| = {abs(final.gap):.4f} en p={final.p:g}")
        finally:
            gc.collect()

    @handle_errors
    def handle_poisson_sweep(self, config: RunConfig, dom: Domain, outcome: ModeOutcome):
        """Barrido de v_p hacia 1/β + d con oráculos radiales en el disco unidad"""
        f = self.lab_manager.build_source(config, dom)
        opts = PoissonOptions(
            tol=config.tol or LabConstants.POISSON_TOL,
            max_iter=config.max_iter or LabConstants.POISSON_MAX_ITER,
            strict=config.strict,
        )
        try:
            table, results = poisson_sweep(dom, f, config.beta, config.p_list, opts)
            self.store.write_poisson_table("poisson_sweep.csv", table)
            for res in results:
                self.store.write_field(f"v_p{_p_label(res.p)}.csv", res.v)
            outcome.sections.append(self.formatter.format_poisson_table(table))
            outcome.nonconverged = any(not row.converged for row in table.rows)

            summary = [f"{'p':>8} {'j_value':>16} {'residual_norm':>14}"]
            summary += [f"{r.p:>8g} {r.j_value:>16.9e} {r.residual_norm:>14.3e}" for r in table.rows]

            if self._unit_disk(config) and not config.source.endswith(".csv"):
                gaps = []
                for res in results:
                    gap = self._oracle_gap(dom, res.v, res.p, config.beta, config.source)
                    if gap is not None:
                        gaps.append((res.p,) + gap)
                if gaps:
                    block = self.formatter.format_oracle_gaps(f"disco unidad, f = {config.source}", gaps)
                    outcome.sections.append(block)
                    summary.append(block)
            self.store.write_text("summary.txt", "\n".join(summary))

            for row in table.rows:
                if row.p >= 20:
                    outcome.check(f"envolvente_p{row.p:g}", row.envelope_violation <= 0.05,
                                  f"max(v_p − (1/β + d)) = {row.envelope_violation:+.4f}")
            if len(table.rows) >= 2 and float(np.min(f.values)) > 0:
                outcome.check("gap_decreciente", table.gap_decreasing(),
                              "sup|v_p − (1/β + d)| = " + ", ".join(f"{r.sup_gap:.4f}" for r in table.rows))
            last = results[-1] if results else None
            if last is not None and last.p >= 20 and float(np.min(f.values)) > 0:
                unit = unit_gradient_defect(dom, last.v, where=f.values > 0)
                outcome.sections.append(self.formatter.format_quantiles(f"gradiente_unitario_p{last.p:g}", unit))
                bound = 5.0 * max(dom.h, 1.0 / last.p)
                outcome.check("eikonal_limite", unit.p95 <= bound,
                              f"p95 ||∇v_p| − 1| = {unit.p95:.3e} en p={last.p:g} (cota 5·max(h, 1/p) = {bound:.3e})")
        finally:
            gc.collect()

    @handle_errors
    def handle_limit_solve(self, config: RunConfig, dom: Domain, outcome: ModeOutcome):
        """Problema límite: v̄ = 1/β + d, Λ∞, factibilidad y residuos viscosos"""
        beta = config.beta
        lam = lambda_infinity(dom, beta)
        vbar = limit_maximal_solution(dom, beta)
        self.store.write_field("distance.csv", dom.distance.d)
        self.store.write_field("v_infinity.csv", vbar)

        slack = 1e-9
        feas = feasibility(dom, vbar, beta)
        quotient = infinity_quotient(dom, vbar, beta)
        lines = [
            "## Problema límite",
            self.formatter.format_feasibility("v_infinity", feas, slack),
            f"cociente_infinito(v_infinity) = {quotient:.6f}",
        ]
        if config.source:
            f = self.lab_manager.build_source(config, dom)
            lines.append(f"J_infinity(v_infinity) = {j_infinity(dom, f, vbar):.9f}")
        if self._unit_disk(config):
            oracle = 1.0 / beta + 1.0 - np.hypot(dom.coords[:, 0], dom.coords[:, 1])
            lines.append(f"oraculo_radial[p=inf] sup|v − (1/β + 1 − r)| = "
                         f"{float(np.max(np.abs(vbar.values - oracle))):.6f}")
        outcome.sections.append("\n".join(lines))
        outcome.check("factible", feas.feasible(slack), "v_infinity cumple ambas restricciones")
        outcome.check("cociente_infinito", abs(quotient - lam) <= 1e-9,
                      f"|cociente − Λ∞| = {abs(quotient - lam):.2e}")

        ridge = ridge_set(dom)
        report = limit_pde_residual(dom, vbar, lam, beta, ridge=ridge, stencil="interpolated",
                                    sampler=maximal_solution_sampler(dom, beta))
        self.store.write_field("residual_interior.csv", report.interior_residual)
        outcome.sections.append(self.formatter.format_residuals(report, lam))

        unit = unit_gradient_defect(dom, vbar, ridge)
        outcome.sections.append(self.formatter.format_quantiles("gradiente_unitario", unit))

        bound = 5.0 * dom.h
        outcome.check("residuo_interior", report.interior_quantiles.p95 <= bound,
                      f"p95 = {report.interior_quantiles.p95:.3e} (cota 5h = {bound:.3e})")
        outcome.check("residuo_frontera", report.boundary_quantiles.p95 <= bound,
                      f"p95 = {report.boundary_quantiles.p95:.3e} (cota 5h = {bound:.3e})")
        outcome.check("gradiente_unitario", unit.p95 <= bound,
                      f"p95 ||∇v| − 1| = {unit.p95:.3e} fuera de la cresta")
        gc.collect()

    @handle_errors
    def handle_uniqueness(self, config: RunConfig, dom: Domain, outcome: ModeOutcome):
        """Dicotomía ℛ ⊆ supp f: única, o un segundo maximizador factible"""
        f = self.lab_manager.build_source(config, dom)
        ridge = ridge_set(dom)
        try:
            report = uniqueness_certificate(dom, f, config.beta, ridge=ridge)
            failure: Optional[WitnessConstructionFailed] = None
        except WitnessConstructionFailed as e:
            report, failure = e.report, e

        self.store.write_field("ridge.csv", ScalarField(dom, ridge.as_mask(dom).astype(float)))
        self.store.write_field("support.csv", ScalarField(dom, report.support.astype(float)))
        outcome.sections.append(self.formatter.format_uniqueness(report))

        if report.included:
            outcome.check("unicidad", True, "la cresta está contenida en supp f")
            return

        self.store.write_field("witness.csv", report.witness)
        slack = LabConstants.WITNESS_FEASIBILITY_FACTOR * dom.h
        outcome.sections.append(self.formatter.format_feasibility("testigo", report.witness_feasibility, slack))

        # Residuo del esquema del punto medio y Δ∞ discreto en la región libre
        region = report.witness_region & ~dom.dilate(~report.witness_region, LabConstants.BOUNDARY_COLLAR_CELLS)
        nb = dom.neighbors8
        inner = region & np.all(nb >= 0, axis=1)
        samples = report.witness.values[nb[inner]]
        midpoint = (samples.max(axis=1) + samples.min(axis=1) - 2.0 * report.witness.values[inner]) / (dom.h * dom.h)
        mid_q = _quantiles(midpoint)
        lap_q = _quantiles(infinity_laplacian(dom, report.witness).values[inner])
        outcome.sections.append("\n".join([
            self.formatter.format_quantiles("testigo_punto_medio", mid_q),
            self.formatter.format_quantiles("testigo_laplaciano_infinito", lap_q),
        ]))

        if failure is not None:
            outcome.check("testigo_factible", False, str(failure))
            return
        outcome.check("testigo_valido", report.witness_ok,
                      f"diferencia sup {report.field_gap:.4f}, ΔJ_∞ = {report.objective_gap:.2e}")
        if inner.any():
            outcome.check("testigo_infinito_armonico", lap_q.p95 <= 10.0 * dom.h,
                          f"p95 |Δ∞ testigo| = {lap_q.p95:.3e} (cota 10h = {10.0 * dom.h:.3e}), "
                          f"punto medio p95 = {mid_q.p95:.3e}")
