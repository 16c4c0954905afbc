"""
Pruebas de campos escalares, energías p, normas estabilizadas y serialización
"""

import math

import numpy as np
import pytest

from numerics.domain import lambda_infinity
from numerics.fields import (
    RobinParams,
    ScalarField,
    feasibility,
    gradient,
    infinity_quotient,
    lipschitz_defect,
    load_field,
    log_rayleigh_quotient,
    p_energy,
    rayleigh_gradient,
    rayleigh_quotient,
    save_field,
    stabilized_p_norm,
    sup_norms,
    volume_norm,
)
from numerics.poisson import limit_maximal_solution
from numerics.shapes import square_domain
from utils.error_handler import DomainMismatch, FieldError, ZeroField


def test_scalar_field_validates_shape_and_values(square16):
    with pytest.raises(FieldError):
        ScalarField(square16, np.zeros(3))
    bad = np.zeros(square16.n_vertices)
    bad[0] = np.nan
    with pytest.raises(FieldError):
        ScalarField(square16, bad)


def test_scalar_field_is_read_only(square16):
    w = ScalarField.constant(square16, 2.0)
    with pytest.raises(ValueError):
        w.values[0] = 1.0


def test_robin_params_validation():
    assert RobinParams(1.0, math.inf).is_infinite
    with pytest.raises(ValueError):
        RobinParams(0.0, 2.0)
    with pytest.raises(ValueError):
        RobinParams(1.0, 1.0)


def test_gradient_exact_on_affine(lshape16):
    w = ScalarField.from_function(lshape16, lambda x, y: 2.0 * x - 3.0 * y + 1.0)
    np.testing.assert_allclose(gradient(lshape16, w), np.tile([2.0, -3.0], (lshape16.n_triangles, 1)),
                               atol=1e-12)


def test_stabilized_norm_matches_naive(rng):
    samples = rng.uniform(0.5, 2.0, size=100)
    weights = rng.uniform(0.1, 1.0, size=100)
    for p in (1.5, 2.0, 7.0, 30.0):
        naive = float(np.sum(weights * samples ** p)) ** (1.0 / p)
        assert stabilized_p_norm(samples, weights, p) == pytest.approx(naive, rel=1e-12)


def test_stabilized_norm_overflow_free(rng):
    samples = rng.uniform(1e3, 1e5, size=50)
    weights = np.ones(50)
    value = stabilized_p_norm(samples, weights, 200.0)
    assert math.isfinite(value)
    assert samples.max() <= value <= samples.max() * 50 ** (1.0 / 200.0) * (1 + 1e-12)


def test_stabilized_norm_edge_cases():
    assert stabilized_p_norm(np.zeros(4), np.ones(4), 3.0) == 0.0
    with pytest.raises(ValueError):
        stabilized_p_norm(np.ones(3), np.ones(4), 2.0)
    with pytest.raises(ValueError):
        stabilized_p_norm(np.ones(3), np.ones(3), 0.5)


def test_stabilized_norm_approaches_maximum_at_rate_one_over_p():
    samples = np.linspace(0.5, 2.0, 200)
    weights = np.full(samples.size, 1.0 / samples.size)
    norms = np.array([stabilized_p_norm(samples, weights, p) for p in (32.0, 64.0, 128.0, 256.0)])
    errors = samples.max() - norms
    ratios = errors[1:] / errors[:-1]

    assert np.all(np.diff(norms) >= 0)
    assert np.all(errors > 0)
    # Al doblar p el error cae algo menos de la mitad
    assert np.all((ratios >= 0.45) & (ratios <= 0.8))


def test_energy_of_constant(square16):
    w = ScalarField.constant(square16, 1.0)
    energy = p_energy(square16, w, RobinParams(1.0, 2.0))

    assert energy.grad_term == pytest.approx(0.0, abs=1e-24)
    assert energy.bdry_term == pytest.approx(4.0, rel=1e-12)
    assert volume_norm(square16, w, 3.0) == pytest.approx(1.0, rel=1e-12)
    assert rayleigh_quotient(square16, w, RobinParams(1.0, 2.0)) == pytest.approx(4.0, rel=1e-12)


def test_quotient_is_homogeneous(square16, rng):
    w = ScalarField(square16, rng.uniform(0.1, 1.0, size=square16.n_vertices))
    for p in (2.0, 3.5, 8.0):
        rp = RobinParams(1.0, p)
        base = log_rayleigh_quotient(square16, w, rp)
        assert log_rayleigh_quotient(square16, w.scaled(7.3), rp) == pytest.approx(base, abs=1e-10)
        assert log_rayleigh_quotient(square16, -w, rp) == pytest.approx(base, abs=1e-10)


def test_quotient_of_zero_field_raises(square16):
    with pytest.raises(ZeroField):
        log_rayleigh_quotient(square16, ScalarField.constant(square16, 0.0), RobinParams(1.0, 2.0))


def test_rayleigh_gradient_matches_finite_differences(rng):
    dom = square_domain(1.0, 0.125)
    x = rng.uniform(0.5, 1.5, size=dom.n_vertices)
    rp = RobinParams(1.0, 3.0)
    grad = rayleigh_gradient(dom, ScalarField(dom, x), rp)
    direction = grad / np.linalg.norm(grad)
    eps = 1e-5

    def q(values):
        return rayleigh_quotient(dom, ScalarField(dom, values), rp)

    numeric = (q(x + eps * direction) - q(x - eps * direction)) / (2.0 * eps)
    assert numeric == pytest.approx(float(grad @ direction), rel=1e-6)


def test_maximal_solution_is_feasible(disk16):
    vbar = limit_maximal_solution(disk16, 2.0)
    report = feasibility(disk16, vbar, 2.0)

    assert lipschitz_defect(disk16, vbar) <= 1e-12
    assert report.boundary_defect == pytest.approx(0.0, abs=1e-12)
    assert report.feasible()
    assert not feasibility(disk16, vbar.scaled(1.5), 2.0).feasible()


def test_infinity_quotient_of_maximal_solution(square16, disk16):
    for dom in (square16, disk16):
        vbar = limit_maximal_solution(dom, 1.0)
        assert infinity_quotient(dom, vbar, 1.0) == pytest.approx(lambda_infinity(dom, 1.0), abs=1e-9)


@pytest.mark.parametrize("fixture", ["disk32", "square32"])
@pytest.mark.parametrize("p", [50.0, 100.0])
def test_quotient_root_of_maximal_solution_bounds_limit(request, fixture, p):
    dom = request.getfixturevalue(fixture)
    vbar = limit_maximal_solution(dom, 1.0)
    root = math.exp(log_rayleigh_quotient(dom, vbar, RobinParams(1.0, p)) / p)

    assert root >= lambda_infinity(dom, 1.0) - dom.h


def test_infinity_quotient_of_zero_field_raises(square16):
    with pytest.raises(ZeroField):
        infinity_quotient(square16, ScalarField.constant(square16, 0.0), 1.0)


def test_sup_norms(square16):
    w = ScalarField.from_function(square16, lambda x, y: x)
    norms = sup_norms(square16, w)
    assert norms.grad_sup == pytest.approx(1.0)
    assert norms.vol_sup == pytest.approx(1.0)
    assert norms.bdry_sup == pytest.approx(1.0)


def test_field_csv_round_trip_is_exact(tmp_path, disk16, rng):
    w = ScalarField(disk16, rng.normal(size=disk16.n_vertices) / 3.0)
    path = save_field(tmp_path / "campo.csv", w)

    loaded = load_field(path, disk16)

    assert np.array_equal(loaded.values, w.values)


def test_field_csv_rejects_other_domain(tmp_path, disk16, square16):
    path = save_field(tmp_path / "campo.csv", ScalarField.constant(disk16, 1.0))
    with pytest.raises(DomainMismatch):
        load_field(path, square16)


def test_field_csv_rejects_bad_header(tmp_path, square16):
    path = tmp_path / "malo.csv"
    path.write_text("x,y,v\n0,0,1.0\n", encoding="utf-8")
    with pytest.raises(FieldError):
        load_field(path, square16)
