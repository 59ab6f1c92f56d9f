"""Sampling measures on (-1, 1) with densities relative to the uniform measure.

Every measure here is absolutely continuous with respect to the uniform
probability measure rho (d_rho = dx/2).  ``density_wrt_rho`` returns the
Radon-Nikodym derivative v = d_mu/d_rho and ``weight`` its reciprocal
w = 1/v, the importance weight of the weighted least-squares fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .legendre import LegendreBasis

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class MeasureKind(Enum):
    UNIFORM = "uniform"
    CHEBYSHEV = "chebyshev"
    JACOBI = "jacobi"
    SCALED_CHEBYSHEV = "scaled-chebyshev"
    CHRISTOFFEL = "christoffel"


def jacobi_normalization(beta: float) -> float:
    """Normalization Z = integral of (1 - x^2)^beta over (-1, 1).

    Uses the closed form sqrt(pi) * Gamma(beta + 1) / Gamma(beta + 3/2)
    through log-gamma, which stays accurate for beta close to -1.
    """
    if beta <= -1.0:
        raise ValueError(f"(1 - x^2)^beta is not integrable for beta = {beta}")
    return math.exp(0.5 * math.log(math.pi) + gammaln(beta + 1.0) - gammaln(beta + 1.5))


def _open_uniform(rng: np.random.Generator, size: int) -> np.ndarray:
    """Uniform draws on the open interval (0, 1)."""
    u = rng.random(size)
    return np.where(u == 0.0, np.nextafter(0.0, 1.0), u)


def _clip_open(x: np.ndarray, half_width: float) -> np.ndarray:
    """Nudge any sample that rounded onto the boundary back inside."""
    edge = np.nextafter(half_width, 0.0)
    return np.clip(x, -edge, edge)


class _JacobiCdfTable:
    """Tabulated CDF of the Jacobi(beta) measure under x = cos(pi * u).

    The substitution turns the density into (pi/Z) * sin(pi*u)^(2*beta+1)
    on (0, 1).  By symmetry only the lower half u in (0, 1/2] is stored;
    for 2*beta + 1 < 0 the remaining edge singularity is absorbed by the
    further substitution u = s^gamma / 2 with gamma = 2 / (2*beta + 2).
    The cumulative is accumulated over composite 16-node Gauss-Legendre
    panels and inverted by safeguarded Newton with bisection fallback.
    """

    PANELS = 4096

    def __init__(self, beta: float):
        p = 2.0 * beta + 1.0
        self.p = p
        self.gamma = 1.0 if p >= 0.0 else 2.0 / (1.0 + p)
        self._log_c = math.log(math.pi / jacobi_normalization(beta))
        self._log_g = math.log(self.gamma / 2.0)
        edges = np.linspace(0.0, 1.0, self.PANELS + 1)
        mid = (edges[:-1] + edges[1:]) / 2.0
        hw = (edges[1:] - edges[:-1]) / 2.0
        s = mid[:, None] + hw[:, None] * _GL_NODES[None, :]
        masses = (self._density_s(s) * _GL_WEIGHTS[None, :]).sum(axis=1) * hw
        cum = np.concatenate([[0.0], np.cumsum(masses)])
        cum *= 0.5 / cum[-1]
        self.edges = edges
        self.cum = cum

    def _density_s(self, s: np.ndarray) -> np.ndarray:
        # log-space evaluation avoids inf * 0 at the regularized edge
        s = np.maximum(s, 1e-300)
        u = 0.5 * np.power(s, self.gamma)
        with np.errstate(divide="ignore", over="ignore"):
            log_sin = np.log(np.sin(np.pi * np.maximum(u, 1e-308)))
            out = np.exp(
                self._log_c + self.p * log_sin + self._log_g + (self.gamma - 1.0) * np.log(s)
            )
        return out

    def _invert_half(self, v: np.ndarray) -> np.ndarray:
        edges, cum = self.edges, self.cum
        k = np.clip(np.searchsorted(cum, v, side="right") - 1, 0, edges.size - 2)
        lo = edges[k]
        glo = cum[k]
        denom = np.maximum(cum[k + 1] - glo, 1e-300)
        s = lo + (edges[k + 1] - lo) * np.clip((v - glo) / denom, 0.0, 1.0)
        bracket_lo = lo.copy()
        bracket_hi = edges[k + 1].copy()
        active = np.arange(v.size)
        for _ in range(60):
            sa = s[active]
            la = lo[active]
            mid = (la + sa) / 2.0
            hw = (sa - la) / 2.0
            g = (
                glo[active]
                + (self._density_s(mid[:, None] + hw[:, None] * _GL_NODES[None, :]) * _GL_WEIGHTS[None, :]).sum(axis=1)
                * hw
            )
            res = g - v[active]
            converged = np.abs(res) <= 1e-12
            b_hi = np.where(res > 0.0, sa, bracket_hi[active])
            b_lo = np.where(res <= 0.0, sa, bracket_lo[active])
            bracket_hi[active] = b_hi
            bracket_lo[active] = b_lo
            dens = self._density_s(sa)
            newton = sa - np.where(dens > 0.0, res / np.maximum(dens, 1e-300), 0.0)
            bad = (newton <= b_lo) | (newton >= b_hi) | ~np.isfinite(newton)
            s[active] = np.where(converged, sa, np.where(bad, (b_lo + b_hi) / 2.0, newton))
            active = active[~converged]
            if active.size == 0:
                break
        return s

    def sample(self, u: np.ndarray) -> np.ndarray:
        v = np.minimum(u, 1.0 - u)
        s = self._invert_half(np.maximum(v, 1e-300))
        half_u = 0.5 * np.power(s, self.gamma)
        full_u = np.where(u > 0.5, 1.0 - half_u, half_u)
        return np.cos(np.pi * full_u)


@lru_cache(maxsize=32)
def _jacobi_table(beta: float) -> _JacobiCdfTable:
    return _JacobiCdfTable(beta)


@lru_cache(maxsize=64)
def _christoffel_basis(n: int) -> LegendreBasis:
    return LegendreBasis(n)


def _phi_squared_rejection(i: int, size: int, rng: np.random.Generator):
    """Draw from the density phi_i(x)^2 d_rho(x) by rejection.

    Proposals come from the Chebyshev measure; the envelope
    phi_i(x)^2 <= 4 / (pi * sqrt(1 - x^2)) = 2 * v_chebyshev(x) gives
    acceptance probability phi_i^2 / (2 * v_chebyshev) <= 1 with overall
    acceptance rate 1/2.  Returns the samples and the number of proposals
    consumed.
    """
    basis = _christoffel_basis(i)
    out = np.empty(size)
    filled = 0
    proposals = 0
    while filled < size:
        batch = max(2 * (size - filled) + 16, 64)
        u = _open_uniform(rng, batch)
        x = np.cos(np.pi * u)
        phi = basis.eval(x)[:, i - 1]
        accept_prob = phi * phi * np.pi * np.sqrt(np.maximum(1.0 - x * x, 0.0)) / 4.0
        keep = rng.random(batch) < accept_prob
        accepted = x[keep]
        take = min(accepted.size, size - filled)
        out[filled : filled + take] = accepted[:take]
        # count only proposals examined before the quota was met
        if take == accepted.size:
            proposals += batch
        else:
            proposals += int(np.nonzero(keep)[0][take - 1]) + 1
        filled += take
    return out, proposals


@dataclass(frozen=True)
class Measure:
    """A probability measure mu << rho on an interval of (-1, 1)."""

    kind: MeasureKind
    beta: float | None = None
    sigma: float | None = None
    n: int | None = None

    def __post_init__(self):
        if self.kind is MeasureKind.JACOBI:
            if self.beta is None or self.beta <= -1.0:
                raise ValueError("Jacobi exponent must satisfy beta > -1")
        elif self.kind is MeasureKind.SCALED_CHEBYSHEV:
            if self.sigma is None or not (0.0 < self.sigma < 1.0):
                raise ValueError("scaled Chebyshev requires sigma in (0, 1)")
        elif self.kind is MeasureKind.CHRISTOFFEL:
            if self.n is None or self.n < 1:
                raise ValueError("Christoffel measure requires n >= 1")

    # constructors

    @staticmethod
    def uniform() -> "Measure":
        return Measure(MeasureKind.UNIFORM)

    @staticmethod
    def chebyshev() -> "Measure":
        return Measure(MeasureKind.CHEBYSHEV)

    @staticmethod
    def jacobi(beta: float) -> "Measure":
        return Measure(MeasureKind.JACOBI, beta=beta)

    @staticmethod
    def scaled_chebyshev(sigma: float) -> "Measure":
        return Measure(MeasureKind.SCALED_CHEBYSHEV, sigma=sigma)

    @staticmethod
    def christoffel(n: int) -> "Measure":
        return Measure(MeasureKind.CHRISTOFFEL, n=n)

    @property
    def support(self) -> tuple[float, float]:
        if self.kind is MeasureKind.SCALED_CHEBYSHEV:
            h = 1.0 - self.sigma
            return (-h, h)
        return (-1.0, 1.0)

    @property
    def normalization(self) -> float:
        """Constant Z with total mass 1; for Jacobi the integral of (1-x^2)^beta."""
        if self.kind is MeasureKind.UNIFORM:
            return 2.0
        if self.kind is MeasureKind.CHEBYSHEV:
            return math.pi
        if self.kind is MeasureKind.JACOBI:
            return jacobi_normalization(self.beta)
        if self.kind is MeasureKind.SCALED_CHEBYSHEV:
            return (1.0 - self.sigma) * math.pi
        return float(self.n)

    def density_wrt_rho(self, x):
        """Radon-Nikodym derivative v = d_mu/d_rho at ``x``.

        Returns 0 outside the support and +inf at boundary points where
        the density blows up (the samplers never emit such points).
        """
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        if not np.all(np.isfinite(x_arr)):
            raise ValueError("density requires finite points")
        if np.any(np.abs(x_arr) > 1.0):
            raise ValueError("points must lie in [-1, 1]")
        with np.errstate(divide="ignore"):
            if self.kind is MeasureKind.UNIFORM:
                v = np.ones_like(x_arr)
            elif self.kind is MeasureKind.CHEBYSHEV:
                v = 2.0 / (math.pi * np.sqrt(1.0 - x_arr * x_arr))
            elif self.kind is MeasureKind.JACOBI:
                with np.errstate(over="ignore"):
                    v = 2.0 * np.power(1.0 - x_arr * x_arr, self.beta) / self.normalization
            elif self.kind is MeasureKind.SCALED_CHEBYSHEV:
                h = 1.0 - self.sigma
                y = x_arr / h
                inside = np.abs(y) <= 1.0
                v = np.zeros_like(x_arr)
                yy = y[inside]
                v[inside] = 2.0 / (h * math.pi * np.sqrt(np.maximum(1.0 - yy * yy, 0.0)))
            else:  # Christoffel
                basis = _christoffel_basis(self.n)
                v = np.atleast_1d(basis.christoffel(x_arr)) / self.n
        return v if np.size(x) > 1 or np.ndim(x) else float(v[0])

    def weight(self, x):
        """Importance weight w = 1/v; defined on the interior of the support."""
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        lo, hi = self.support
        if np.any((x_arr <= lo) | (x_arr >= hi)):
            raise ValueError("weight is undefined outside the open support")
        v = np.atleast_1d(np.asarray(self.density_wrt_rho(x_arr), dtype=float))
        w = 1.0 / v
        return w if np.size(x) > 1 or np.ndim(x) else float(w[0])

    def sample(self, m: int, rng: np.random.Generator) -> np.ndarray:
        """Draw ``m`` i.i.d. points from the measure."""
        if m < 1:
            raise ValueError("sample count must be positive")
        if self.kind is MeasureKind.UNIFORM:
            x = 2.0 * _open_uniform(rng, m) - 1.0
            h = 1.0
        elif self.kind is MeasureKind.CHEBYSHEV:
            x = np.cos(np.pi * _open_uniform(rng, m))
            h = 1.0
        elif self.kind is MeasureKind.SCALED_CHEBYSHEV:
            h = 1.0 - self.sigma
            x = h * np.cos(np.pi * _open_uniform(rng, m))
        elif self.kind is MeasureKind.JACOBI:
            x = _jacobi_table(self.beta).sample(_open_uniform(rng, m))
            h = 1.0
        else:  # Christoffel mixture over phi_i^2 components
            idx = rng.integers(1, self.n + 1, size=m)
            x = np.empty(m)
            for i in np.unique(idx):
                mask = idx == i
                x[mask], _ = _phi_squared_rejection(int(i), int(mask.sum()), rng)
            h = 1.0
        return _clip_open(x, h)
