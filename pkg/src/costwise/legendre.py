"""Orthonormal Legendre basis, Christoffel functions and Remez-type bounds.

The reference measure throughout is the uniform probability measure on
(-1, 1), i.e. integrals are taken with respect to dx/2.  The basis
``phi_1, ..., phi_n`` spans the polynomials of degree < n and satisfies
``phi_i = sqrt(2i - 1) * P_{i-1}`` with ``P_k`` the classical Legendre
polynomial normalized by ``P_k(1) = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar


@dataclass(frozen=True)
class Subdomain:
    """Symmetric subinterval Omega = (-(1 - sigma), 1 - sigma) of (-1, 1)."""

    sigma: float

    def __post_init__(self):
        if not (0.0 <= self.sigma < 1.0):
            raise ValueError(f"sigma must lie in [0, 1), got {self.sigma}")

    @property
    def half_width(self) -> float:
        return 1.0 - self.sigma


@dataclass(frozen=True)
class LegendreBasis:
    """Orthonormal Legendre system of dimension ``n`` (degrees 0 .. n-1)."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("basis dimension must be positive")

    def eval(self, x) -> np.ndarray:
        """Evaluate all basis functions at ``x``.

        Returns an array of shape ``(len(x), n)``.  Uses the three-term
        recurrence directly in orthonormal form, which stays well scaled
        for large degrees.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if not np.all(np.isfinite(x)):
            raise ValueError("basis evaluation requires finite points")
        n = self.n
        out = np.empty((x.size, n))
        out[:, 0] = 1.0
        if n > 1:
            out[:, 1] = math.sqrt(3.0) * x
        for k in range(1, n - 1):
            c_k = k / math.sqrt((2 * k - 1) * (2 * k + 1))
            c_k1 = (k + 1) / math.sqrt((2 * k + 1) * (2 * k + 3))
            out[:, k + 1] = (x * out[:, k] - c_k * out[:, k - 1]) / c_k1
        return out

    def christoffel(self, x):
        """Reciprocal Christoffel function K(x) = sum_i phi_i(x)^2."""
        values = self.eval(x)
        k = np.sum(values * values, axis=1)
        return k if k.size > 1 else float(k[0])

    def christoffel_scaled(self, omega: Subdomain, x):
        """Christoffel function of the basis viewed inside L2_rho(Omega).

        Rescaling the basis onto Omega = (-(1-sigma), 1-sigma) gives
        K_Omega(x) = K(x / (1-sigma)) / (1-sigma).
        """
        h = omega.half_width
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(np.abs(x) >= h):
            raise ValueError("point outside the open subdomain")
        k = self.christoffel(x / h)
        return np.asarray(k) / h if np.size(k) > 1 else float(k) / h


def rho_sigma(sigma: float) -> float:
    """Bernstein-ellipse growth parameter (1 + sqrt(2s - s^2)) / (1 - s)."""
    if not (0.0 <= sigma < 1.0):
        raise ValueError(f"sigma must lie in [0, 1), got {sigma}")
    return (1.0 + math.sqrt(2.0 * sigma - sigma * sigma)) / (1.0 - sigma)


def remez_bound(basis: LegendreBasis, omega: Subdomain) -> float:
    """Upper bound n * rho_sigma^(n-1) on the L2->L2 and Linf->L2 Remez constants."""
    return basis.n * rho_sigma(omega.sigma) ** (basis.n - 1)


def sigma_for_r(n: int, r: float) -> float:
    """Largest sigma with (rho_sigma)^n <= r, namely (r^(1/n) - 1)^2 / 16.

    Requires n >= log(r) / log(1 + sqrt(8)), which guarantees the
    returned sigma is at most 1/2 so the bound rho_sigma <= 1 + 4*sqrt(sigma)
    applies.
    """
    if r <= 1.0:
        raise ValueError("r must exceed 1")
    n_min = math.log(r) / math.log(1.0 + math.sqrt(8.0))
    if n < n_min:
        raise ValueError(f"n = {n} below admissible threshold {n_min:.3f} for r = {r}")
    return (r ** (1.0 / n) - 1.0) ** 2 / 16.0


def _weighted_christoffel(basis: LegendreBasis, measure, h: float, x: np.ndarray):
    """w(x) * K_Omega(x) evaluated on the closed interval [-h, h].

    Computed as K_Omega / v so that boundary points where the sampling
    density vanishes (w infinite) or blows up (w zero) take the correct
    limiting values.
    """
    k = basis.christoffel(np.asarray(x, dtype=float) / h) / h
    v = np.atleast_1d(np.asarray(measure.density_wrt_rho(x), dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        prod = np.where(np.isinf(v), 0.0, np.atleast_1d(k) / v)
    return prod


def kappa_w(basis: LegendreBasis, measure, omega: Subdomain, grid_factor: int = 20) -> float:
    """Supremum of w(x) * K_Omega(x) over the subdomain Omega.

    Approximated by maximizing on a Chebyshev-clustered grid of
    ``grid_factor * n^2`` points, then refining around the grid argmax
    with a bounded scalar search.  Raises if the sampling measure does
    not cover Omega (the supremum is infinite in that case).
    """
    h = omega.half_width
    lo, hi = measure.support
    if lo > -h or hi < h:
        raise ValueError("sampling measure does not cover the subdomain; kappa_w is infinite")
    n_grid = max(grid_factor * basis.n * basis.n, 64)
    grid = h * np.cos(np.linspace(0.0, math.pi, n_grid))
    vals = _weighted_christoffel(basis, measure, h, grid)
    if np.any(np.isinf(vals)):
        return math.inf
    k = int(np.argmax(vals))
    best = float(vals[k])
    a = grid[min(k + 1, n_grid - 1)]
    b = grid[max(k - 1, 0)]
    if a < b:
        res = minimize_scalar(
            lambda t: -float(_weighted_christoffel(basis, measure, h, np.array([t]))[0]),
            bounds=(a, b),
            method="bounded",
            options={"xatol": 1e-12},
        )
        if np.isfinite(res.fun):
            best = max(best, float(-res.fun))
    return best
