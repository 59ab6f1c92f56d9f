import math

import numpy as np
import pytest
from numpy.polynomial import legendre as npleg
from scipy.special import eval_legendre

from costwise import (
    LegendreBasis,
    Measure,
    Subdomain,
    kappa_w,
    remez_bound,
    rho_sigma,
    sigma_for_r,
)

GL_X, GL_W = npleg.leggauss(200)


def test_eval_matches_classical_legendre():
    basis = LegendreBasis(20)
    x = np.linspace(-1.0, 1.0, 37)
    values = basis.eval(x)
    for i in range(1, 21):
        expected = math.sqrt(2 * i - 1) * eval_legendre(i - 1, x)
        np.testing.assert_allclose(values[:, i - 1], expected, atol=1e-11)


def test_value_at_one():
    basis = LegendreBasis(100)
    values = basis.eval(np.array([1.0]))[0]
    for i in range(1, 101):
        assert values[i - 1] == pytest.approx(math.sqrt(2 * i - 1), rel=1e-12)


def test_gram_orthonormality():
    basis = LegendreBasis(12)
    phi = basis.eval(GL_X)
    gram = (phi * (GL_W / 2.0)[:, None]).T @ phi
    np.testing.assert_allclose(gram, np.eye(12), atol=1e-12)


def test_christoffel_identities():
    for n in (1, 5, 17):
        basis = LegendreBasis(n)
        assert basis.christoffel(np.array([1.0])) == pytest.approx(n * n, rel=1e-10)
        mass = float(np.sum(GL_W / 2.0 * basis.christoffel(GL_X)))
        assert mass == pytest.approx(n, rel=1e-12)


def test_christoffel_upper_bound():
    basis = LegendreBasis(25)
    x = np.cos(np.linspace(1e-3, math.pi - 1e-3, 2000))
    k = basis.christoffel(x)
    bound = np.minimum(25.0**2, 4.0 * 25 / (math.pi * np.sqrt(1.0 - x * x)))
    assert np.all(k <= bound * (1.0 + 1e-12))


def test_christoffel_scaled_matches_rescaled_basis():
    basis = LegendreBasis(8)
    omega = Subdomain(0.2)
    h = omega.half_width
    x = np.linspace(-0.7, 0.7, 11)
    phi = basis.eval(x / h) / math.sqrt(h)
    expected = np.sum(phi * phi, axis=1)
    np.testing.assert_allclose(basis.christoffel_scaled(omega, x), expected, rtol=1e-13)


def test_christoffel_scaled_rejects_outside_points():
    basis = LegendreBasis(4)
    with pytest.raises(ValueError):
        basis.christoffel_scaled(Subdomain(0.3), np.array([0.9]))


def test_rho_sigma_values():
    assert rho_sigma(0.0) == 1.0
    assert rho_sigma(0.5) == pytest.approx((1.0 + math.sqrt(0.75)) / 0.5, rel=1e-14)
    with pytest.raises(ValueError):
        rho_sigma(1.0)


def test_remez_bound_formula():
    basis = LegendreBasis(7)
    omega = Subdomain(0.1)
    assert remez_bound(basis, omega) == pytest.approx(7 * rho_sigma(0.1) ** 6)


def test_sigma_for_r_keeps_growth_below_r():
    for n in (3, 10, 40):
        sigma = sigma_for_r(n, 2.0)
        assert 0.0 < sigma < 0.5
        assert rho_sigma(sigma) ** n <= 2.0 + 1e-12


def test_sigma_for_r_validation():
    with pytest.raises(ValueError):
        sigma_for_r(5, 1.0)
    # threshold log(10) / log(1 + sqrt(8)) ~ 1.71
    with pytest.raises(ValueError):
        sigma_for_r(1, 10.0)
    assert sigma_for_r(2, 10.0) > 0.0


def test_kappa_w_christoffel_is_n():
    for n in (3, 10):
        basis = LegendreBasis(n)
        value = kappa_w(basis, Measure.christoffel(n), Subdomain(0.0))
        assert value == pytest.approx(n, rel=1e-6)


def test_kappa_w_uniform_is_n_squared():
    basis = LegendreBasis(6)
    value = kappa_w(basis, Measure.uniform(), Subdomain(0.0))
    assert value == pytest.approx(36.0, rel=1e-9)


def test_kappa_w_chebyshev_matches_brute_force():
    n = 9
    basis = LegendreBasis(n)
    value = kappa_w(basis, Measure.chebyshev(), Subdomain(0.0))
    grid = np.cos(np.linspace(0.0, math.pi, 200001))
    brute = np.max(basis.christoffel(grid) * math.pi * np.sqrt(1.0 - grid * grid) / 2.0)
    assert value >= brute - 1e-9
    assert value == pytest.approx(brute, rel=1e-6)


def test_kappa_w_infinite_when_density_vanishes_at_edge():
    basis = LegendreBasis(5)
    # (1 - x^2)^0.5 vanishes at the endpoints, so w K blows up there
    assert math.isinf(kappa_w(basis, Measure.jacobi(0.5), Subdomain(0.0)))


def test_kappa_w_requires_covering_support():
    basis = LegendreBasis(5)
    with pytest.raises(ValueError):
        kappa_w(basis, Measure.scaled_chebyshev(0.1), Subdomain(0.05))


def test_subdomain_validation():
    with pytest.raises(ValueError):
        Subdomain(-0.1)
    with pytest.raises(ValueError):
        Subdomain(1.0)
    assert Subdomain(0.25).half_width == 0.75
