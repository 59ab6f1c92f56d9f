"""Cost-aware sampling for weighted least-squares polynomial recovery on (-1, 1)."""

from .config import ExperimentConfig, MRule, parse_measure_spec
from .errors import ConfigError, NumericalError
from .harness import (
    BudgetRecord,
    ExperimentRecord,
    ThetaRecord,
    draw_samples,
    run_budget,
    run_convergence,
    run_theta,
    substream,
    summarize,
    write_csv,
)
from .legendre import LegendreBasis, Subdomain, kappa_w, remez_bound, rho_sigma, sigma_for_r
from .measures import Measure, MeasureKind, jacobi_normalization
from .oracle import (
    QuadratureRule,
    best_approx,
    composite_gauss_legendre,
    l2_error,
    linf_error,
    remez_exact_l2,
    runge_shifted,
    subdomain_gram,
)
from .strategies import (
    BudgetPlan,
    CostModel,
    christoffel_sampling_measure,
    cost_integral,
    cost_integral_refinements,
    cost_is_finite,
    expected_cost,
    plan_budget,
    strategy_one,
    strategy_two,
    subdomain_for_measure,
)
from .wls import Estimator, SampleSet, design_matrix, fit, stability_constant

__all__ = [
    "BudgetPlan",
    "BudgetRecord",
    "ConfigError",
    "CostModel",
    "Estimator",
    "ExperimentConfig",
    "ExperimentRecord",
    "LegendreBasis",
    "MRule",
    "Measure",
    "MeasureKind",
    "NumericalError",
    "QuadratureRule",
    "SampleSet",
    "Subdomain",
    "ThetaRecord",
    "best_approx",
    "christoffel_sampling_measure",
    "composite_gauss_legendre",
    "cost_integral",
    "cost_integral_refinements",
    "cost_is_finite",
    "design_matrix",
    "draw_samples",
    "expected_cost",
    "fit",
    "jacobi_normalization",
    "kappa_w",
    "l2_error",
    "linf_error",
    "parse_measure_spec",
    "plan_budget",
    "remez_bound",
    "remez_exact_l2",
    "rho_sigma",
    "run_budget",
    "run_convergence",
    "run_theta",
    "runge_shifted",
    "sigma_for_r",
    "stability_constant",
    "strategy_one",
    "strategy_two",
    "subdomain_for_measure",
    "subdomain_gram",
    "substream",
    "summarize",
    "write_csv",
]

__version__ = "0.1.0"
