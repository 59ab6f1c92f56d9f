"""Cost models, expected-cost evaluation and sampling-measure strategies.

Two strategies target algebraically growing evaluation costs
c(x) = (1 - x^2)^(-alpha):

* strategy one picks an n-independent Jacobi measure whose exponent is
  tied to alpha (hierarchical, needs to know alpha);
* strategy two picks the Chebyshev measure scaled onto the subinterval
  (-(1 - sigma(n)), 1 - sigma(n)) with sigma(n) = (2^(1/n) - 1)^2 / 16
  (cost-agnostic, nonhierarchical).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .legendre import LegendreBasis, Subdomain, kappa_w, rho_sigma, sigma_for_r
from .measures import Measure, MeasureKind, _christoffel_basis

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class CostModel:
    """Evaluation cost c(x) = scale * (1 - x^2)^(-alpha)."""

    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        if self.alpha < 0.0:
            raise ValueError("cost exponent must be nonnegative")
        if self.scale <= 0.0:
            raise ValueError("cost scale must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            return self.scale * np.power(1.0 - x * x, -self.alpha)


@dataclass(frozen=True)
class BudgetPlan:
    """Sample budget and expected cost for a measure / subdomain pair."""

    measure: Measure
    m: int
    expected_cost: float
    kappa_w_value: float
    epsilon: float
    sigma: float
    remez_r: float
    cost_bound: float


def _effective_beta(measure: Measure) -> float | None:
    """Jacobi exponent for measures in the Jacobi family, else None."""
    if measure.kind is MeasureKind.UNIFORM:
        return 0.0
    if measure.kind is MeasureKind.CHEBYSHEV:
        return -0.5
    if measure.kind is MeasureKind.JACOBI:
        return measure.beta
    return None


def cost_is_finite(measure: Measure, cost: CostModel) -> bool:
    """Analytic finiteness check for the integral of c with respect to mu."""
    if cost.alpha == 0.0:
        return True
    if measure.kind is MeasureKind.SCALED_CHEBYSHEV:
        return True
    if measure.kind is MeasureKind.CHRISTOFFEL:
        # the Christoffel density is bounded above and below near +-1
        return cost.alpha < 1.0
    beta = _effective_beta(measure)
    return beta - cost.alpha > -1.0


def _panel_sum(fun, edges: np.ndarray) -> float:
    mid = (edges[:-1] + edges[1:]) / 2.0
    hw = (edges[1:] - edges[:-1]) / 2.0
    s = mid[:, None] + hw[:, None] * _GL_NODES[None, :]
    return float(np.sum(fun(s) * _GL_WEIGHTS[None, :] * hw[:, None]))


def _sin_power_half_integral(q: float, factor=None, panels: int = 512) -> float:
    """Integral over (0, 1/2) of sin(pi*u)^q * factor(cos(pi*u)).

    The substitution u = s^gamma / 2 with gamma = 2 / (1 + q) absorbs the
    edge singularity when q < 0; evaluation is done in log-space to keep
    the singular and vanishing factors balanced.
    """
    # the substitution only applies on the integrable range -1 < q < 0;
    # for q <= -1 (divergent integrals) plain panels are kept so that
    # refinement sequences grow instead of erroring out
    gamma = 2.0 / (1.0 + q) if -1.0 < q < 0.0 else 1.0
    log_g = math.log(gamma / 2.0)

    def integrand(s):
        s = np.maximum(s, 1e-300)
        u = 0.5 * np.power(s, gamma)
        with np.errstate(divide="ignore", over="ignore"):
            log_val = q * np.log(np.sin(np.pi * np.maximum(u, 1e-308))) + log_g
            log_val = log_val + (gamma - 1.0) * np.log(s)
            val = np.exp(log_val)
        if factor is not None:
            val = val * factor(np.cos(np.pi * u))
        return val

    edges = np.linspace(0.0, 1.0, panels + 1)
    return _panel_sum(integrand, edges)


def _scaled_chebyshev_cost_integral(sigma: float, cost: CostModel, panels: int = 512) -> float:
    """Integral of c with respect to the scaled Chebyshev measure.

    Under x = (1 - sigma) * cos(pi * u) the measure pushes forward to the
    uniform measure in u; panels are graded geometrically toward the
    endpoints where the integrand peaks at scale sigma^(-alpha).
    """
    h = 1.0 - sigma

    def integrand(u):
        return cost(h * np.cos(np.pi * u))

    inner = min(sigma, 0.25) * 1e-3
    half = np.concatenate([[0.0], np.geomspace(inner, 0.5, panels)])
    return 2.0 * _panel_sum(integrand, half)


def cost_integral(measure: Measure, cost: CostModel, panels: int = 512) -> float:
    """One quadrature evaluation of the integral of c d_mu (assumed finite)."""
    if cost.alpha == 0.0:
        return cost.scale
    if measure.kind is MeasureKind.SCALED_CHEBYSHEV:
        return _scaled_chebyshev_cost_integral(measure.sigma, cost, panels)
    if measure.kind is MeasureKind.CHRISTOFFEL:
        basis = _christoffel_basis(measure.n)
        factor = lambda x: np.asarray(basis.christoffel(np.ravel(x))).reshape(np.shape(x))
        raw = _sin_power_half_integral(1.0 - 2.0 * cost.alpha, factor, panels)
        return cost.scale * math.pi * raw / measure.n
    beta = _effective_beta(measure)
    q = 2.0 * (beta - cost.alpha) + 1.0
    raw = 2.0 * _sin_power_half_integral(q, None, panels)
    return cost.scale * math.pi * raw / measure.normalization


def cost_integral_refinements(measure: Measure, cost: CostModel, levels: int = 5, start: int = 128):
    """Successive panel-doubling evaluations of the cost integral.

    For integrable cases the sequence settles; for divergent exponent
    pairs it grows without bound as the panels resolve the endpoint.
    """
    return [cost_integral(measure, cost, panels=start * 2**k) for k in range(levels)]


def expected_cost(measure: Measure, cost: CostModel, m: int, rtol: float = 1e-8) -> float:
    """Expected total cost m * integral(c d_mu); +inf when c is not integrable."""
    if m < 1:
        raise ValueError("sample count must be positive")
    if not cost_is_finite(measure, cost):
        return math.inf
    if cost.alpha == 0.0:
        return m * cost.scale
    panels = 256
    prev = cost_integral(measure, cost, panels)
    for _ in range(6):
        panels *= 2
        cur = cost_integral(measure, cost, panels)
        if abs(cur - prev) <= rtol * abs(cur):
            return m * cur
        prev = cur
    raise NumericalError("cost integral did not converge under refinement")


def christoffel_sampling_measure(n: int) -> Measure:
    """Measure with density K(x) / n relative to rho (Christoffel sampling)."""
    return Measure.christoffel(n)


def strategy_one(alpha: float, delta: float = 0.1) -> Measure:
    """n-independent Jacobi sampling measure tied to the cost exponent.

    beta = -1/2 for alpha < 1/2 (plain Chebyshev exponent), otherwise
    beta = alpha - 1 + delta with delta > 0 guarding cost integrability.
    """
    if alpha < 0.0:
        raise ValueError("alpha must be nonnegative")
    if alpha < 0.5:
        return Measure.jacobi(-0.5)
    if delta <= 0.0:
        raise ValueError("delta must be positive for alpha >= 1/2 (cost would diverge)")
    return Measure.jacobi(alpha - 1.0 + delta)


def strategy_two(n: int) -> Measure:
    """Chebyshev measure scaled onto the subinterval with sigma(n) from r = 2."""
    return Measure.scaled_chebyshev(sigma_for_r(n, 2.0))


def subdomain_for_measure(measure: Measure, n: int) -> Subdomain:
    """Recovery subdomain matched to a sampling measure.

    Strategy-two measures shrink the domain to their own support; Jacobi
    measures with positive exponent vanish too fast at the endpoints and
    use the r = 2 subdomain, all others recover on the full domain.
    """
    if measure.kind is MeasureKind.SCALED_CHEBYSHEV:
        return Subdomain(measure.sigma)
    beta = _effective_beta(measure)
    if beta is not None and beta > 0.0:
        return Subdomain(sigma_for_r(n, 2.0))
    return Subdomain(0.0)


def plan_budget(
    basis: LegendreBasis,
    measure: Measure,
    omega: Subdomain,
    cost: CostModel,
    epsilon: float,
    multiplier: float = 8.0,
) -> BudgetPlan:
    """Sample count m = ceil(multiplier * kappa_w * log(3n / epsilon)) and its cost.

    Also reports the cost-bound product integral(c d_mu) * kappa_w, the
    quantity minimized when choosing the sampling measure.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    kw = kappa_w(basis, measure, omega)
    if not math.isfinite(kw):
        raise ValueError("kappa_w is infinite; the measure undersamples part of the subdomain")
    n = basis.n
    m = math.ceil(multiplier * kw * math.log(3.0 * n / epsilon))
    c_exp = expected_cost(measure, cost, m)
    integral = c_exp / m if math.isfinite(c_exp) else math.inf
    return BudgetPlan(
        measure=measure,
        m=m,
        expected_cost=c_exp,
        kappa_w_value=kw,
        epsilon=epsilon,
        sigma=omega.sigma,
        remez_r=rho_sigma(omega.sigma) ** n,
        cost_bound=integral * kw if math.isfinite(integral) else math.inf,
    )
