"""Reference quantities: quadrature, best approximations and exact error norms.

All integrals are taken with respect to the uniform probability measure
rho (dx / 2) so that coefficient vectors in the orthonormal Legendre
basis obey Parseval's identity.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .legendre import LegendreBasis, Subdomain

_EIG_FLOOR = 1e-15


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule with weights relative to rho."""

    nodes: np.ndarray
    weights: np.ndarray
    panels: int
    nodes_per_panel: int
    interval: tuple[float, float]

    def integrate(self, fun) -> float:
        return float(np.sum(self.weights * fun(self.nodes)))

    def refine(self) -> "QuadratureRule":
        """Same rule with twice the number of panels."""
        return composite_gauss_legendre(
            panels=2 * self.panels,
            nodes_per_panel=self.nodes_per_panel,
            interval=self.interval,
        )


def composite_gauss_legendre(
    panels: int = 8,
    nodes_per_panel: int = 64,
    interval: tuple[float, float] = (-1.0, 1.0),
) -> QuadratureRule:
    """Composite Gauss-Legendre rule on ``interval`` with weights for rho.

    The weights sum to (b - a) / 2, the rho-measure of the interval.
    """
    a, b = interval
    if not (-1.0 <= a < b <= 1.0):
        raise ValueError("interval must be a nondegenerate subinterval of [-1, 1]")
    base_x, base_w = np.polynomial.legendre.leggauss(nodes_per_panel)
    edges = np.linspace(a, b, panels + 1)
    mid = (edges[:-1] + edges[1:]) / 2.0
    hw = (edges[1:] - edges[:-1]) / 2.0
    nodes = (mid[:, None] + hw[:, None] * base_x[None, :]).ravel()
    weights = (hw[:, None] * base_w[None, :]).ravel() / 2.0
    return QuadratureRule(nodes, weights, panels, nodes_per_panel, (a, b))


def runge_shifted(pole: float = 1.1):
    """The analytic target f(x) = 1 / (pole - x) with a pole just outside [-1, 1]."""
    if pole <= 1.0:
        raise ValueError("pole must lie outside [-1, 1]")
    return lambda x: 1.0 / (pole - np.asarray(x, dtype=float))


def best_approx(fun, basis: LegendreBasis, rule: QuadratureRule | None = None) -> np.ndarray:
    """Coefficients of the L2_rho-orthogonal projection onto the basis span.

    The quadrature is self-checked against one panel doubling; a
    disagreement beyond 1e-9 (relative to the coefficient norm) means
    the rule does not resolve the integrand.
    """
    if rule is None:
        rule = composite_gauss_legendre()
    coeffs = _projection_coeffs(fun, basis, rule)
    check = _projection_coeffs(fun, basis, rule.refine())
    scale = max(float(np.linalg.norm(check)), 1.0)
    if float(np.max(np.abs(coeffs - check))) > 1e-9 * scale:
        raise NumericalError("projection quadrature failed its refinement self-check")
    return check


def _projection_coeffs(fun, basis: LegendreBasis, rule: QuadratureRule) -> np.ndarray:
    phi = basis.eval(rule.nodes)
    fx = np.asarray(fun(rule.nodes), dtype=float)
    return phi.T @ (rule.weights * fx)


def l2_error(fun, estimator, rule: QuadratureRule | None = None) -> float:
    """L2_rho norm of f minus the estimator (anything with ``evaluate``)."""
    if rule is None:
        rule = composite_gauss_legendre()
    fx = np.asarray(fun(rule.nodes), dtype=float)
    px = estimator.evaluate(rule.nodes)
    return math.sqrt(max(float(np.sum(rule.weights * (fx - px) ** 2)), 0.0))


def linf_error(fun, estimator, n_grid: int = 4001) -> float:
    """Max error of the estimator over a Chebyshev-clustered grid on [-1, 1]."""
    grid = np.cos(np.linspace(0.0, math.pi, n_grid))
    fx = np.asarray(fun(grid), dtype=float)
    return float(np.max(np.abs(fx - estimator.evaluate(grid))))


def subdomain_gram(basis: LegendreBasis, omega: Subdomain, rule: QuadratureRule | None = None) -> np.ndarray:
    """Gram matrix of the full-domain basis restricted to Omega, wrt rho."""
    h = omega.half_width
    if rule is None or rule.interval != (-h, h):
        rule = composite_gauss_legendre(interval=(-h, h))
    phi = basis.eval(rule.nodes)
    return (phi * rule.weights[:, None]).T @ phi


def remez_exact_l2(basis: LegendreBasis, omega: Subdomain) -> float:
    """Exact L2(Omega) -> L2(-1,1) Remez constant 1 / sqrt(lambda_min(G_Omega)).

    Returns +inf (with a warning) once the smallest eigenvalue of the
    restricted Gram matrix underflows, which happens for large n on
    small subdomains.
    """
    g = subdomain_gram(basis, omega)
    lam_min = float(np.linalg.eigvalsh(g)[0])
    if lam_min <= _EIG_FLOOR:
        warnings.warn("restricted Gram matrix numerically singular; Remez constant reported as inf")
        return math.inf
    return 1.0 / math.sqrt(lam_min)
