import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import gamma

from costwise import (
    CostModel,
    LegendreBasis,
    Measure,
    MeasureKind,
    NumericalError,
    Subdomain,
    christoffel_sampling_measure,
    cost_integral,
    cost_integral_refinements,
    cost_is_finite,
    expected_cost,
    plan_budget,
    sigma_for_r,
    strategy_one,
    strategy_two,
    subdomain_for_measure,
)


def _z(beta):
    return math.sqrt(math.pi) * gamma(beta + 1.0) / gamma(beta + 1.5)


def test_cost_model_validation():
    with pytest.raises(ValueError):
        CostModel(-0.5)
    with pytest.raises(ValueError):
        CostModel(1.0, scale=0.0)
    cost = CostModel(1.0, scale=2.0)
    assert cost(0.0) == pytest.approx(2.0)


@pytest.mark.parametrize(
    "measure,alpha,finite",
    [
        (Measure.uniform(), 0.5, True),
        (Measure.uniform(), 1.0, False),
        (Measure.chebyshev(), 0.25, True),
        (Measure.chebyshev(), 0.5, False),
        (Measure.jacobi(0.5), 1.5, False),
        (Measure.jacobi(0.75), 1.5, True),
        (Measure.scaled_chebyshev(0.01), 10.0, True),
        (Measure.christoffel(6), 0.5, True),
        (Measure.christoffel(6), 1.0, False),
    ],
)
def test_cost_finiteness_classification(measure, alpha, finite):
    assert cost_is_finite(measure, CostModel(alpha)) is finite


@pytest.mark.parametrize(
    "beta,alpha",
    [(0.0, 0.25), (0.5, 0.5), (-0.5, 0.25), (2.0, 1.5), (-0.75, 0.1)],
)
def test_cost_integral_matches_gamma_closed_form(beta, alpha):
    # integral of (1 - x^2)^(-alpha) d_mu for Jacobi(beta) is Z(beta - alpha) / Z(beta)
    measure = Measure.uniform() if beta == 0.0 else Measure.jacobi(beta)
    expected = _z(beta - alpha) / _z(beta)
    assert cost_integral(measure, CostModel(alpha)) == pytest.approx(expected, rel=1e-8)


def test_scaled_chebyshev_cost_integral_against_quadrature():
    sigma = 0.01
    cost = CostModel(1.5)
    h = 1.0 - sigma
    oracle, _ = integrate.quad(
        lambda u: cost(h * math.cos(math.pi * u)), 0.0, 1.0, limit=400
    )
    assert cost_integral(Measure.scaled_chebyshev(sigma), cost) == pytest.approx(oracle, rel=1e-6)


def test_christoffel_cost_integral_against_quadrature():
    n = 6
    basis = LegendreBasis(n)
    cost = CostModel(0.25)
    oracle, _ = integrate.quad(
        lambda t: basis.christoffel(t) / n * float(cost(t)) / 2.0,
        -1.0,
        1.0,
        limit=400,
    )
    assert cost_integral(Measure.christoffel(n), cost) == pytest.approx(oracle, rel=1e-6)


def test_refinements_settle_for_integrable_cost():
    values = cost_integral_refinements(Measure.chebyshev(), CostModel(0.25))
    assert abs(values[-1] - values[-2]) < 1e-10 * abs(values[-1])


def test_refinements_diverge_for_nonintegrable_cost():
    values = cost_integral_refinements(Measure.chebyshev(), CostModel(1.0))
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] / values[0] > 5.0


def test_expected_cost_scales_with_m():
    measure = Measure.chebyshev()
    cost = CostModel(0.25)
    one = expected_cost(measure, cost, 1)
    assert expected_cost(measure, cost, 10) == pytest.approx(10.0 * one, rel=1e-12)
    assert math.isinf(expected_cost(measure, CostModel(1.0), 10))
    assert expected_cost(measure, CostModel(0.0, scale=3.0), 4) == 12.0
    with pytest.raises(ValueError):
        expected_cost(measure, cost, 0)


def test_strategy_one_branches():
    assert strategy_one(0.3) == Measure.jacobi(-0.5)
    assert strategy_one(1.5, delta=0.25) == Measure.jacobi(0.75)
    assert strategy_one(0.3, delta=0.0).kind is MeasureKind.JACOBI
    with pytest.raises(ValueError):
        strategy_one(1.5, delta=0.0)
    with pytest.raises(ValueError):
        strategy_one(-0.1)


def test_strategy_one_keeps_cost_finite():
    for alpha in (0.25, 0.75, 1.5, 3.0):
        measure = strategy_one(alpha, delta=0.1)
        assert cost_is_finite(measure, CostModel(alpha))


def test_strategy_two_sigma():
    measure = strategy_two(12)
    assert measure.kind is MeasureKind.SCALED_CHEBYSHEV
    assert measure.sigma == pytest.approx(sigma_for_r(12, 2.0))


def test_christoffel_sampling_measure():
    measure = christoffel_sampling_measure(7)
    assert measure.kind is MeasureKind.CHRISTOFFEL
    assert measure.n == 7


def test_subdomain_for_measure_branches():
    n = 10
    assert subdomain_for_measure(strategy_two(n), n).sigma == pytest.approx(sigma_for_r(n, 2.0))
    assert subdomain_for_measure(Measure.jacobi(0.5), n).sigma == pytest.approx(sigma_for_r(n, 2.0))
    assert subdomain_for_measure(Measure.chebyshev(), n).sigma == 0.0
    assert subdomain_for_measure(Measure.christoffel(n), n).sigma == 0.0


def test_plan_budget_christoffel_kappa_is_n():
    n = 9
    basis = LegendreBasis(n)
    measure = christoffel_sampling_measure(n)
    plan = plan_budget(basis, measure, Subdomain(0.0), CostModel(0.25), epsilon=0.1)
    assert plan.kappa_w_value == pytest.approx(n, abs=1e-6)
    assert plan.m == math.ceil(8.0 * plan.kappa_w_value * math.log(3.0 * n / 0.1))
    assert plan.expected_cost == pytest.approx(plan.m * cost_integral(measure, CostModel(0.25)), rel=1e-7)
    assert plan.cost_bound == pytest.approx(plan.kappa_w_value * plan.expected_cost / plan.m, rel=1e-12)


def test_plan_budget_multiplier_and_validation():
    n = 5
    basis = LegendreBasis(n)
    measure = christoffel_sampling_measure(n)
    base = plan_budget(basis, measure, Subdomain(0.0), CostModel(0.0), epsilon=0.1)
    doubled = plan_budget(basis, measure, Subdomain(0.0), CostModel(0.0), epsilon=0.1, multiplier=16.0)
    assert doubled.m >= 2 * base.m - 1
    with pytest.raises(ValueError):
        plan_budget(basis, measure, Subdomain(0.0), CostModel(0.0), epsilon=1.5)
    with pytest.raises(ValueError):
        # Jacobi(0.5) density vanishes at the endpoints of the full domain
        plan_budget(basis, Measure.jacobi(0.5), Subdomain(0.0), CostModel(0.0), epsilon=0.1)


def test_plan_budget_reports_infinite_cost():
    n = 6
    basis = LegendreBasis(n)
    measure = christoffel_sampling_measure(n)
    plan = plan_budget(basis, measure, Subdomain(0.0), CostModel(1.5), epsilon=0.1)
    assert math.isinf(plan.expected_cost)
    assert math.isinf(plan.cost_bound)
