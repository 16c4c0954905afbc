"""
Pruebas del p-Poisson de Robin: fuentes, oráculos radiales, solver,
barrido, extensión AMLE y certificado de unicidad
"""

import math

import numpy as np
import pytest

from numerics.fields import RobinParams, ScalarField, feasibility
from numerics.poisson import (
    PoissonFunctional,
    PoissonOptions,
    amle_extend,
    indicator_radial_mass,
    j_infinity,
    limit_maximal_solution,
    make_source,
    poisson_sweep,
    radial_oracle_annular,
    radial_oracle_ball,
    radial_oracle_field,
    radial_profile_quadrature,
    solve_p_poisson,
    source_load,
    source_radial_mass,
    uniqueness_certificate,
    upper_envelope_check,
)
from numerics.shapes import disk_domain, square_domain
from utils.error_handler import DomainMismatch, NonpositiveField, SolverError


# Fuentes

def test_make_source_generators(disk16):
    assert np.all(make_source(disk16, "const(2.5)").values == 2.5)
    assert np.all(make_source(disk16, "const").values == 1.0)

    ball = make_source(disk16, "ball_indicator(0.5)")
    radius = np.hypot(*disk16.coords.T)
    assert np.array_equal(ball.values > 0, radius <= 0.5 + 1e-12)

    ring = make_source(disk16, "annulus_indicator(0.5, 0.9)")
    assert ring.values[disk16.nearest_vertex((0.0, 0.0))] == 0.0
    assert ring.values[disk16.nearest_vertex((0.75, 0.0))] == 1.0


@pytest.mark.parametrize("spec", ["gauss(1)", "ball_indicator", "annulus_indicator(0.9, 0.5)", "const(a)", "("])
def test_make_source_rejects_bad_specs(disk16, spec):
    with pytest.raises(ValueError):
        make_source(disk16, spec)


def test_make_source_rejects_negative_constant(disk16):
    with pytest.raises(NonpositiveField):
        make_source(disk16, "const(-1)")


# Oráculos radiales

def test_ball_oracle_spot_values():
    assert radial_oracle_ball(2, 2.0, 1.0, 0.0) == pytest.approx(0.75)
    assert radial_oracle_ball(2, 2.0, 1.0, 1.0) == pytest.approx(0.5)
    assert radial_oracle_ball(2, math.inf, 2.0, 0.25) == pytest.approx(1.25)
    with pytest.raises(ValueError):
        radial_oracle_ball(2, 2.0, 1.0, 1.5)


@pytest.mark.parametrize("p", [2.0, 3.0, 10.0])
def test_quadrature_matches_ball_oracle(p):
    mass = indicator_radial_mass(2)
    for r in (0.0, 0.3, 0.8, 1.0):
        assert radial_profile_quadrature(2, p, 1.5, mass, r) == pytest.approx(
            radial_oracle_ball(2, p, 1.5, r), rel=1e-8)


@pytest.mark.parametrize("p", [4.0, 8.0])
def test_quadrature_matches_annular_oracle(p):
    mass = indicator_radial_mass(2, 0.5)
    for r in (0.1, 0.5, 0.8):
        assert radial_profile_quadrature(2, p, 1.0, mass, r, breakpoints=(0.5,)) == pytest.approx(
            radial_oracle_annular(2, p, 1.0, 0.5, r), rel=1e-8)


def test_annular_oracle_requires_p_above_dimension():
    with pytest.raises(ValueError):
        radial_oracle_annular(2, 2.0, 1.0, 0.5, 0.3)


def test_annular_oracle_at_infinity_is_maximal_solution():
    assert radial_oracle_annular(2, math.inf, 2.0, 0.5, 0.2) == pytest.approx(0.5 + 0.8)


def test_source_radial_mass():
    mass, breaks = source_radial_mass("const(2)")
    assert mass(1.0) == pytest.approx(1.0) and breaks == ()
    mass, breaks = source_radial_mass("annulus_indicator(0.5, 0.9)")
    assert mass(0.4) == 0.0
    assert mass(1.0) == pytest.approx((0.81 - 0.25) / 2.0)
    assert breaks == (0.5, 0.9)
    assert source_radial_mass("campo.csv") is None


def test_oracle_field_reproduces_profile(disk16):
    mass, breaks = source_radial_mass("const(1)")
    oracle = radial_oracle_field(disk16, 3.0, 1.0, mass, breaks)
    center = disk16.nearest_vertex((0.0, 0.0))

    assert oracle.values[center] == pytest.approx(radial_oracle_ball(2, 3.0, 1.0, 0.0), rel=1e-7)


# Solver

def test_zero_source_gives_zero_solution(square16):
    res = solve_p_poisson(square16, ScalarField.constant(square16, 0.0), RobinParams(1.0, 3.0))
    assert res.converged
    assert np.max(np.abs(res.v.values)) <= 1e-12


def test_solver_rejects_bad_inputs(square16, disk16):
    f = ScalarField.constant(square16, 1.0)
    with pytest.raises(NonpositiveField):
        solve_p_poisson(square16, f.scaled(-1.0), RobinParams(1.0, 2.0))
    with pytest.raises(ValueError):
        solve_p_poisson(square16, f, RobinParams(1.0, math.inf))
    with pytest.raises(DomainMismatch):
        solve_p_poisson(disk16, f, RobinParams(1.0, 2.0))


@pytest.mark.parametrize("p", [2.0, 3.0, 6.0])
def test_functional_gradient_matches_finite_differences(p, rng):
    dom = square_domain(1.0, 0.125)
    fun = PoissonFunctional(dom, ScalarField.constant(dom, 1.0), RobinParams(1.0, p))
    x = rng.uniform(0.9, 1.1, size=dom.n_vertices)
    grad = fun.gradient(x)
    direction = grad / np.linalg.norm(grad)
    eps = 1e-5

    numeric = (fun.value(x + eps * direction) - fun.value(x - eps * direction)) / (2.0 * eps)

    assert numeric == pytest.approx(float(grad @ direction), rel=1e-6)


def test_functional_value_stays_finite_at_large_p(square16):
    f = ScalarField.constant(square16, 1.0)
    fun = PoissonFunctional(square16, f, RobinParams(1.0, 200.0))
    gentle = 0.5 + 0.4 * square16.coords[:, 0]
    steep = 3.0 * square16.coords[:, 0]

    raw = (square16.tri_area * np.sum(np.hypot(fun.gx @ gentle, fun.gy @ gentle) ** 200.0)
           + np.sum(square16.face_measure * np.abs(square16.face_operator @ gentle) ** 200.0)) / 200.0
    assert fun.value(gentle) == pytest.approx(raw - float(fun.load @ gentle), rel=1e-9)

    huge = PoissonFunctional(square16, f, RobinParams(1.0, 1000.0))
    assert huge.value(steep) == math.inf


def test_weak_form_holds_against_random_fields(square16, rng):
    f = ScalarField.constant(square16, 1.0)
    rp = RobinParams(1.5, 3.0)
    res = solve_p_poisson(square16, f, rp, PoissonOptions(tol=1e-10))
    residual = PoissonFunctional(square16, f, rp).gradient(res.v.values)
    load = source_load(square16, f)

    assert res.converged
    for _ in range(20):
        phi = rng.standard_normal(square16.n_vertices)
        assert abs(float(residual @ phi)) <= 1e-7 * (1.0 + float(np.abs(load) @ np.abs(phi)))


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_boundary_flux_balances_source(square16, p):
    f = ScalarField.constant(square16, 1.0)
    beta = 1.5
    res = solve_p_poisson(square16, f, RobinParams(beta, p), PoissonOptions(tol=1e-9))
    mids = square16.face_operator @ res.v.values

    flux = beta ** p * float(np.sum(square16.face_measure * np.abs(mids) ** (p - 2.0) * mids))

    assert res.converged
    assert flux == pytest.approx(float(source_load(square16, f).sum()), rel=1e-6)


def test_strict_mode_raises(disk16):
    f = ScalarField.constant(disk16, 1.0)
    with pytest.raises(SolverError) as excinfo:
        solve_p_poisson(disk16, f, RobinParams(1.0, 8.0), PoissonOptions(max_iter=1, strict=True))
    assert excinfo.value.result is not None


def test_radial_oracle_match_on_disk(disk32):
    res = solve_p_poisson(disk32, ScalarField.constant(disk32, 1.0), RobinParams(1.0, 2.0))
    mass, breaks = source_radial_mass("const(1)")
    oracle = radial_oracle_field(disk32, 2.0, 1.0, mass, breaks)

    rel = np.max(np.abs(res.v.values - oracle.values)) / np.max(oracle.values)

    assert res.converged
    assert rel <= 0.06


def test_solution_is_unique_from_any_start(disk16, rng):
    f = ScalarField.constant(disk16, 1.0)
    opts = PoissonOptions(tol=1e-10)
    a, b = (solve_p_poisson(disk16, f, RobinParams(1.0, 4.0), opts,
                            initial=ScalarField(disk16, rng.uniform(0.0, 2.0, size=disk16.n_vertices)))
            for _ in range(2))
    assert np.max(np.abs(a.v.values - b.v.values)) <= 1e-6


def test_sweep_gap_decreases(disk16):
    f = ScalarField.constant(disk16, 1.0)
    table, results = poisson_sweep(disk16, f, 2.0, [2.0, 4.0, 8.0])

    assert [r.p for r in table.rows] == [2.0, 4.0, 8.0]
    assert all(r.converged for r in table.rows)
    assert table.gap_decreasing()
    for row, res in zip(table.rows, results):
        assert row.envelope_violation == pytest.approx(upper_envelope_check(res.v, disk16, 2.0))


def test_sweep_rejects_decreasing_p(disk16):
    with pytest.raises(ValueError):
        poisson_sweep(disk16, ScalarField.constant(disk16, 1.0), 1.0, [4.0, 2.0])


# Problema límite

def test_maximal_solution_and_j_infinity(square16):
    vbar = limit_maximal_solution(square16, 2.0)
    f = ScalarField.constant(square16, 1.0)

    assert vbar.values.min() == pytest.approx(0.5)
    assert j_infinity(square16, f, ScalarField.constant(square16, 1.0)) == pytest.approx(-1.0)
    assert j_infinity(square16, f, vbar) < j_infinity(square16, f, vbar.scaled(0.5))


def test_amle_of_affine_data_is_affine(square16):
    exact = ScalarField.from_function(square16, lambda x, y: 0.4 * x - 0.2 * y + 1.0)
    fixed = square16.boundary_vertices

    ext = amle_extend(square16, fixed, exact.values[fixed])

    assert np.max(np.abs(ext.values - exact.values)) <= 1e-6


def test_ball_oracle_at_infinity_is_maximal_solution(disk32):
    vbar = limit_maximal_solution(disk32, 2.0)
    radii = np.clip(np.hypot(*disk32.coords.T), 0.0, 1.0)
    oracle = np.array([radial_oracle_ball(2, math.inf, 2.0, r) for r in radii])

    assert np.max(np.abs(oracle - vbar.values)) <= 1.5 * disk32.h


def test_amle_point_source_obeys_maximum_principle(disk16):
    centre = disk16.nearest_vertex((0.0, 0.0))
    fixed = np.concatenate(([centre], disk16.boundary_vertices))
    values = np.zeros(fixed.size)
    values[0] = 1.0

    ext = amle_extend(disk16, fixed, values)
    radii = np.hypot(*disk16.coords.T)
    on_axis = np.flatnonzero((np.abs(disk16.coords[:, 1]) < 1e-12) & (disk16.coords[:, 0] >= 0.0))
    axis_values = ext.values[on_axis[np.argsort(disk16.coords[on_axis, 0])]]

    assert ext.values.min() >= -1e-12
    assert ext.values.max() <= 1.0 + 1e-12
    assert np.all(np.diff(axis_values) <= 1e-9)
    # Perfil de cono 1 − |x| salvo la anisotropía del esténcil de 8 vecinos
    assert np.max(np.abs(ext.values - (1.0 - np.minimum(radii, 1.0)))) <= 0.2


def test_amle_rejects_bad_arguments(square16):
    with pytest.raises(ValueError):
        amle_extend(square16, [], [])
    with pytest.raises(ValueError):
        amle_extend(square16, [0, 1], [1.0])


def test_uniqueness_when_ridge_is_covered(disk32):
    report = uniqueness_certificate(disk32, make_source(disk32, "ball_indicator(0.5)"), 1.0)
    assert report.included
    assert report.verdict == "única"


def test_witness_when_ridge_is_uncovered(disk32):
    f = make_source(disk32, "annulus_indicator(0.6, 0.9)")
    report = uniqueness_certificate(disk32, f, 1.0)
    vbar = limit_maximal_solution(disk32, 1.0)

    assert not report.included
    assert report.witness_ok
    assert report.field_gap > 10.0 * disk32.h
    assert report.objective_gap <= 1e-8
    assert feasibility(disk32, report.witness, 1.0).feasible(2.0 * disk32.h)
    assert np.array_equal(report.witness.values[f.values > 0], vbar.values[f.values > 0])

    centre = disk32.nearest_vertex((0.0, 0.0))
    assert report.witness_region[centre]
    assert report.witness.values[centre] < vbar.values[centre] - 0.3


@pytest.mark.slow
def test_witness_survives_refinement():
    dom = disk_domain(1.0, 1.0 / 64.0)
    report = uniqueness_certificate(dom, make_source(dom, "annulus_indicator(0.6, 0.9)"), 1.0)

    assert not report.included
    assert report.witness_ok
    assert report.field_gap > 10.0 * dom.h


def test_uniqueness_rejects_zero_source(disk16):
    with pytest.raises(ValueError):
        uniqueness_certificate(disk16, ScalarField.constant(disk16, 0.0), 1.0)
