"""Weighted least-squares estimator and stability diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .legendre import LegendreBasis, Subdomain

SV_CUTOFF_FACTOR = 1e-14


@dataclass
class SampleSet:
    """Sample points with weights, observations, noise and evaluation costs."""

    x: np.ndarray
    weights: np.ndarray
    y: np.ndarray
    noise: np.ndarray
    costs: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.noise = np.asarray(self.noise, dtype=float)
        self.costs = np.asarray(self.costs, dtype=float)
        m = self.x.size
        for name in ("weights", "y", "noise", "costs"):
            if getattr(self, name).size != m:
                raise ValueError(f"{name} must have the same length as x")

    @property
    def m(self) -> int:
        return self.x.size

    @property
    def total_cost(self) -> float:
        return float(np.sum(self.costs))

    @property
    def noise_norm(self) -> float:
        return float(np.linalg.norm(self.noise))


@dataclass
class Estimator:
    """Coefficients of the fitted polynomial in the orthonormal Legendre basis.

    The condition number reported is that of the empirical Gram matrix
    A^T A of the scaled design matrix, i.e. the square of the singular
    value ratio of A.
    """

    coefficients: np.ndarray
    n: int
    sigma_min: float | None = None
    sigma_max: float | None = None
    cond: float | None = None
    _basis: LegendreBasis = field(init=False, repr=False)

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if self.coefficients.size != self.n:
            raise ValueError("coefficient vector length must equal n")
        self._basis = LegendreBasis(self.n)

    def evaluate(self, x) -> np.ndarray:
        return self._basis.eval(x) @ self.coefficients

    @property
    def l2_norm(self) -> float:
        """L2_rho norm of the fitted polynomial (Parseval)."""
        return float(np.linalg.norm(self.coefficients))


def design_matrix(samples: SampleSet, basis: LegendreBasis):
    """Scaled design matrix A and right-hand side b of the WLS problem.

    A[i, j] = sqrt(w_i / m) * phi_j(x_i) and b[i] = sqrt(w_i / m) * y_i,
    so the fit solves min ||A c - b||_2.
    """
    if not np.all(np.isfinite(samples.weights)):
        raise ValueError("non-finite weights in sample set")
    scale = np.sqrt(samples.weights / samples.m)
    a = basis.eval(samples.x) * scale[:, None]
    b = scale * samples.y
    return a, b


def fit(samples: SampleSet, basis: LegendreBasis) -> Estimator:
    """Minimal-norm weighted least-squares fit via the SVD pseudoinverse.

    Singular values below sigma_max * m * 1e-14 are treated as zero,
    which makes the minimal-norm solution well defined for
    rank-deficient designs.
    """
    a, b = design_matrix(samples, basis)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if s[0] == 0.0 or not np.isfinite(s[0]):
        raise ValueError("degenerate design matrix")
    cutoff = s[0] * samples.m * SV_CUTOFF_FACTOR
    inv = np.where(s > cutoff, 1.0 / np.where(s > 0.0, s, 1.0), 0.0)
    coeffs = vt.T @ (inv * (u.T @ b))
    sigma_min = float(s[-1])
    sigma_max = float(s[0])
    cond = (sigma_max / sigma_min) ** 2 if sigma_min > 0.0 else np.inf
    return Estimator(coeffs, basis.n, sigma_min=sigma_min, sigma_max=sigma_max, cond=cond)


def stability_constant(samples: SampleSet, basis: LegendreBasis, omega: Subdomain) -> float:
    """Discrete stability constant over the subdomain Omega.

    Square root of the smallest eigenvalue of the empirical Gram matrix
    built from samples falling inside Omega, using the basis
    orthonormalized over Omega.  Returns 0 when the Gram matrix is
    singular.
    """
    h = omega.half_width
    inside = np.abs(samples.x) < h
    if not np.any(inside):
        return 0.0
    x = samples.x[inside]
    w = samples.weights[inside]
    # basis orthonormal in L2_rho(Omega): phi_j(x / h) / sqrt(h)
    phi = basis.eval(x / h) / np.sqrt(h)
    g = (phi * (w / samples.m)[:, None]).T @ phi
    lam_min = float(np.linalg.eigvalsh(g)[0])
    return float(np.sqrt(max(lam_min, 0.0)))
