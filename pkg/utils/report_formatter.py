"""
Formateador de reportes del laboratorio - centraliza todos los textos de report.txt
"""

import math
from typing import Iterable, Optional, Sequence

from config.settings import LabConstants


def _num(value: float, digits: int = 6) -> str:
    """Número con precisión fija; inf y nan legibles"""
    if value is None:
        return "-"
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}f}"


def _sci(value: float) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "nan"
    return f"{value:.3e}"


def _mark(ok: bool) -> str:
    return LabConstants.SUCCESS if ok else LabConstants.ERROR


class ReportFormatter:
    """Clase para formatear todos los bloques del reporte de forma consistente"""

    def format_header(self, name: str, mode: str, domain_label: str, h: float, beta: Optional[float]) -> str:
        """Cabecera del reporte (sin marcas de tiempo: el archivo es determinista)"""
        lines = [
            f"# Ejecución: {name}",
            f"modo = {mode}",
            f"dominio = {domain_label}",
            f"h = {h:.8g}",
        ]
        if beta is not None:
            lines.append(f"beta = {beta:.8g}")
        return "\n".join(lines)

    def format_geometry(self, n_vertices: int, n_faces: int, area: float, perimeter: float,
                        inradius: float, lam_inf: float) -> str:
        """Bloque geométrico: Λ∞ = 1/(1/β + R_Ω)"""
        return (
            "## Geometría\n"
            f"vertices = {n_vertices}\n"
            f"caras_frontera = {n_faces}\n"
            f"area = {_num(area)}\n"
            f"perimetro = {_num(perimeter)}\n"
            f"inradio = {_num(inradius)}\n"
            f"lambda_infinity = {_num(lam_inf)}\n"
            "cuadratura_frontera = punto medio de cara (peso de escalera)"
        )

    def format_eigen_table(self, table) -> str:
        """Tabla de barrido Λ_p^{1/p} frente a Λ∞"""
        lines = [
            "## Barrido de autovalores",
            f"lambda_infinity geométrico = {_num(table.lambda_inf_geometric)}",
            f"{'p':>8} {'lambda_p':>14} {'lambda_root':>12} {'gap':>10} {'iters':>7}  estado",
        ]
        for row in table.rows:
            status = "convergió" if row.converged else (row.note or "no convergió")
            lines.append(
                f"{row.p:>8g} {row.lambda_p:>14.6e} {_num(row.lambda_root):>12} "
                f"{row.gap:>+10.6f} {row.iterations:>7d}  {status}"
            )
        return "\n".join(lines)

    def format_poisson_table(self, table) -> str:
        """Tabla de barrido de v_p frente a 1/β + d"""
        lines = [
            "## Barrido de p-Poisson",
            f"{'p':>8} {'J_p':>14} {'residuo':>10} {'sup_gap':>10} {'envolvente':>11} {'iters':>7}  estado",
        ]
        for row in table.rows:
            lines.append(
                f"{row.p:>8g} {row.j_value:>14.6e} {_sci(row.residual_norm):>10} "
                f"{_num(row.sup_gap):>10} {row.envelope_violation:>+11.6f} {row.iterations:>7d}  "
                f"{'convergió' if row.converged else 'no convergió'}"
            )
        return "\n".join(lines)

    def format_oracle_gaps(self, title: str, gaps: Sequence[tuple]) -> str:
        """Filas (p, error relativo sup, v(0) numérico, v(0) oráculo)"""
        lines = [f"## Oráculo: {title}"]
        for p, rel_gap, center, center_oracle in gaps:
            lines.append(
                f"p = {p:g}: error_relativo = {_num(rel_gap)}, "
                f"v(0) = {_num(center)}, oraculo v(0) = {_num(center_oracle)}"
            )
        return "\n".join(lines)

    def format_quantiles(self, label: str, quantiles) -> str:
        return (
            f"{label}: p50 = {_sci(quantiles.p50)}, p95 = {_sci(quantiles.p95)}, "
            f"sup = {_sci(quantiles.sup)}"
        )

    def format_residuals(self, report, lam: float) -> str:
        """Cuantiles de los residuos del sistema límite"""
        return "\n".join([
            f"## Residuos del sistema límite (Λ = {_num(lam)})",
            self.format_quantiles("residuo_interior", report.interior_quantiles),
            self.format_quantiles("residuo_frontera", report.boundary_quantiles),
            f"vertices_enmascarados = {report.n_masked}",
            f"caras_enmascaradas = {int(report.masked_faces.sum())}",
            f"mascara = cresta + {LabConstants.RIDGE_COLLAR_CELLS} celdas, "
            f"frontera + {LabConstants.BOUNDARY_COLLAR_CELLS} celdas",
        ])

    def format_feasibility(self, label: str, feas, slack: float) -> str:
        """Líneas de factibilidad ‖∇φ‖∞ ≤ 1 y β|φ| ≤ 1 en ∂Ω"""
        return "\n".join([
            f"factibilidad[{label}] lipschitz_defect = {feas.lipschitz_defect:+.3e}",
            f"factibilidad[{label}] boundary_defect = {feas.boundary_defect:+.3e}",
            f"factibilidad[{label}] = {'sí' if feas.feasible(slack) else 'no'} (holgura {slack:.3e})",
        ])

    def format_uniqueness(self, report) -> str:
        """Veredicto ℛ ⊆ supp f y datos del testigo"""
        lines = [
            "## Unicidad",
            f"vertices_cresta = {len(report.ridge)}",
            f"cresta_incluida = {'sí' if report.included else 'no'}",
            f"veredicto = {report.verdict}",
        ]
        if not report.included:
            lines += [
                f"vertices_descubiertos = {len(report.uncovered)}",
                f"testigo_diferencia_sup = {_num(report.field_gap)}",
                f"testigo_diferencia_J = {_sci(report.objective_gap)}",
                f"testigo_valido = {'sí' if report.witness_ok else 'no'}",
            ]
        return "\n".join(lines)

    def format_assertions(self, assertions: Iterable[tuple[str, bool, str]]) -> str:
        """Verificaciones del modo: (nombre, ok, detalle)"""
        lines = ["## Verificaciones"]
        for name, ok, detail in assertions:
            lines.append(f"{_mark(ok)} {name}: {detail}")
        return "\n".join(lines)

    def format_artifacts(self, artifacts: Sequence[str]) -> str:
        lines = ["## Artefactos"]
        lines += [f"artifact = {name}" for name in artifacts]
        return "\n".join(lines)

    def format_check_line(self, name: str, passed: bool, detail: str) -> str:
        return f"{'PASS' if passed else 'FAIL'} {name}: {detail}"

    def format_check_summary(self, seed: int, outcomes: Sequence) -> str:
        """Resumen determinista de la suite (sin tiempos)"""
        failed = sum(1 for o in outcomes if not o.passed)
        lines = [f"# Suite de invariantes (semilla {seed})"]
        lines += [self.format_check_line(o.name, o.passed, o.detail) for o in outcomes]
        lines.append(f"total = {len(outcomes)}, fallidas = {failed}")
        return "\n".join(lines) + "\n"

    def format_health(self, report: dict) -> str:
        """Línea de recursos para la consola (nunca va a los archivos de resultados)"""
        if report.get('status') == 'error':
            return f"{LabConstants.WARNING} Recursos: no disponibles ({report.get('error')})"
        memory = report['memory']
        mark = LabConstants.SUCCESS if report['status'] == 'healthy' else LabConstants.WARNING
        return (f"{mark} Recursos: estado={report['status']}, memoria={memory['percent']:.1f}% "
                f"({memory['rss_mb']:.1f}MB), alertas={report['alerts_sent']}, "
                f"bloques={len(report['tasks'])}")

    def format_exit(self, code: int) -> str:
        messages = {
            0: f"{LabConstants.SUCCESS} Todas las verificaciones pasaron",
            1: f"{LabConstants.ERROR} Alguna verificación falló",
            2: f"{LabConstants.ERROR} Error de configuración",
            3: f"{LabConstants.WARNING} Un solver no convergió (artefactos parciales)",
        }
        return messages.get(code, f"{LabConstants.ERROR} Código de salida {code}")
