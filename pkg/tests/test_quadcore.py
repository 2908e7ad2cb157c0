import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussradau.errors import AccuracyError, DomainError
from gaussradau.quadcore import (
    GAUSS_WEIGHTS,
    KRONROD_NODES,
    KRONROD_WEIGHTS,
    PolynomialCoeffs,
    discretize,
    integrate,
    integrate_interval,
    moments,
    weighted_inner_product,
)
from gaussradau.weights import Constant, ExpDecay, Jacobi, ModifiedWeight, PiecewiseLinearTable


def test_kronrod_and_gauss_exactness_degrees():
    for k in range(24):
        exact = 2.0 / (k + 1) if k % 2 == 0 else 0.0
        assert np.dot(KRONROD_WEIGHTS, KRONROD_NODES**k) == pytest.approx(exact, abs=1e-15)
        if k <= 13:
            assert np.dot(GAUSS_WEIGHTS, KRONROD_NODES**k) == pytest.approx(exact, abs=1e-15)
    assert abs(np.dot(GAUSS_WEIGHTS, KRONROD_NODES**14) - 2 / 15) > 1e-6


def test_integrate_examples():
    assert integrate(lambda x: np.ones_like(x), Constant(), 1e-12).value == pytest.approx(2.0, abs=1e-12)
    assert integrate(lambda x: x, Constant(), 1e-12).value == pytest.approx(0.0, abs=1e-12)
    res = integrate(lambda x: x, ModifiedWeight(Constant()), 1e-12)
    assert res.value == pytest.approx(-2.0 / 3.0, abs=1e-12)
    assert res.error_estimate <= 1e-12


def test_integrate_never_samples_endpoints():
    seen = []

    def f(x):
        seen.append(x.copy())
        return np.exp(x)

    for spec in (Constant(), Jacobi(-0.5, 0.5), ExpDecay(1, 3)):
        integrate(f, spec, 1e-12)
    xs = np.concatenate(seen)
    assert np.all(np.abs(xs) < 1.0)


def test_jacobi_singular_endpoints_converge():
    from scipy.special import beta

    for a, b in [(-0.5, -0.5), (-0.9, 0.0), (-0.99, -0.99)]:
        res = integrate(None, Jacobi(a, b), 1e-12)
        assert res.value == pytest.approx(2 ** (a + b + 1) * beta(a + 1, b + 1), abs=1e-12)


def test_vector_valued_integrand():
    res = integrate(lambda x: np.vstack([x**0, x, x**2]), Constant(), 1e-12)
    np.testing.assert_allclose(res.value, [2.0, 0.0, 2.0 / 3.0], atol=1e-12)


def test_inner_product_examples():
    one = PolynomialCoeffs((1.0,))
    x = PolynomialCoeffs((0.0, 1.0))
    assert weighted_inner_product(one, one, Constant()) == pytest.approx(2.0, abs=1e-12)
    assert weighted_inner_product(x, one, Constant()) == pytest.approx(0.0, abs=1e-12)


def test_inner_product_exp_weight_symbolic_oracle():
    t = sp.symbols("t")
    exact = sp.integrate(t**2 * sp.exp(-(t + 1)), (t, -1, 1))
    assert sp.simplify(exact - (1 - 5 * sp.exp(-2))) == 0
    x = PolynomialCoeffs((0.0, 1.0))
    value = weighted_inner_product(x, x, ExpDecay(1.0, 1.0), 1e-13)
    assert value == pytest.approx(float(exact), abs=1e-12)
    assert value == pytest.approx(0.3233235838169366, abs=1e-12)


def test_polynomial_coeffs_trim_and_bases():
    p = PolynomialCoeffs((1.0, 2.0, 0.0, 0.0))
    assert p.degree == 1 and p.coefficients == (1.0, 2.0)
    assert PolynomialCoeffs(()).degree == 0
    leg = PolynomialCoeffs((0.0, 0.0, 1.0), basis="legendre")
    assert leg(1.0) == pytest.approx(1.0)
    assert leg(0.0) == pytest.approx(-0.5)
    with pytest.raises(DomainError):
        PolynomialCoeffs((1.0,), basis="chebyshev")


def test_moments_examples():
    np.testing.assert_allclose(moments(Constant(), 3), [2.0, 0.0, 2.0 / 3.0], atol=1e-12)
    np.testing.assert_allclose(moments(ModifiedWeight(Constant()), 2), [2.0, -2.0 / 3.0], atol=1e-12)
    np.testing.assert_allclose(moments(ExpDecay(1, 0), 1), [2.0], atol=1e-12)
    exact = [2.0 / (k + 1) if k % 2 == 0 else 0.0 for k in range(12)]
    np.testing.assert_allclose(moments(Constant(), 12), exact, atol=1e-12)


def test_integrate_interval():
    res = integrate_interval(np.exp, 3.0, 3.5, 1e-12)
    assert res.value == pytest.approx(math.exp(3.5) - math.exp(3.0), abs=1e-12)
    with pytest.raises(DomainError):
        integrate_interval(np.exp, 1.0, 1.0)


def test_budget_exhaustion_raises_with_estimate(monkeypatch):
    with pytest.raises(AccuracyError) as info:
        integrate(lambda x: np.abs(x - 0.3) ** 0.5, Constant(), 1e-14, max_panels=20)
    assert math.isfinite(info.value.estimate) and info.value.error > 1e-14
    monkeypatch.setenv("RADAU_MAX_PANELS", "4")
    with pytest.raises(AccuracyError):
        integrate(None, Constant())
    monkeypatch.setenv("RADAU_MAX_PANELS", "many")
    with pytest.raises(DomainError):
        integrate(None, Constant())


def test_nonpositive_tolerance_rejected():
    with pytest.raises(DomainError):
        integrate(None, Constant(), 0.0)


def test_discretization_reproduces_polynomial_moments():
    spec = PiecewiseLinearTable((-1, 0.2, 1), (1, 2.5, 0.7))
    x, m = discretize(spec, 12, 1e-13)
    ref = moments(spec, 13, 1e-13)
    np.testing.assert_allclose(np.vander(x, 13, increasing=True).T @ m, ref, atol=1e-12)
    x2, m2 = discretize(spec, 12, 1e-13, seed=7)
    assert x2.size != x.size or not np.allclose(x2, x)
    np.testing.assert_allclose(np.vander(x2, 13, increasing=True).T @ m2, ref, atol=1e-12)


poly = st.lists(st.floats(-3, 3), min_size=1, max_size=8)
specs = st.sampled_from([Constant(), ExpDecay(1, 2), ExpDecay(2, -1), Jacobi(0.5, 0), Jacobi(-0.5, 0.5)])


@settings(max_examples=30, deadline=None)
@given(poly, poly, st.floats(-2, 2), st.floats(-2, 2), specs)
def test_linearity(pc, rc, a, b, spec):
    tol = 1e-12
    p, r = PolynomialCoeffs(pc), PolynomialCoeffs(rc)
    lhs = integrate(lambda x: a * p(x) + b * r(x), spec, tol).value
    rhs = a * integrate(p, spec, tol).value + b * integrate(r, spec, tol).value
    # each side carries at most tol per unit coefficient
    assert abs(lhs - rhs) <= tol * (1.0 + abs(a) + abs(b))


@settings(max_examples=30, deadline=None)
@given(poly, specs)
def test_positivity_of_squares(pc, spec):
    p = PolynomialCoeffs(pc)
    assert integrate(lambda x: p(x) ** 2, spec, 1e-12).value >= 0.0


@pytest.mark.parametrize("spec", [ExpDecay(1, 3), Jacobi(0.5, 0), PiecewiseLinearTable((-1, 0, 1), (1, 2, 1))])
def test_monotone_refinement(spec):
    f = lambda x: np.cos(3 * x) * np.exp(x)
    reference = integrate(f, spec, 1e-14).value
    errors = [abs(integrate(f, spec, tol).value - reference) for tol in (1e-4, 5e-5, 2.5e-5, 1.25e-5)]
    for coarse, fine in zip(errors, errors[1:]):
        assert fine <= coarse + 1e-15
