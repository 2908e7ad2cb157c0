import numpy as np
import pytest
import sympy as sp

from gaussradau.eigen import GaussRule, JacobiMatrix, _implicit_ql, eigendecompose, golub_welsch
from gaussradau.errors import DomainError
from gaussradau.orthopoly import stieltjes
from gaussradau.quadcore import integrate
from gaussradau.weights import Constant, ExpDecay, Jacobi, ModifiedWeight, PiecewiseLinearTable
from numpy.polynomial import legendre as npleg


def test_one_by_one():
    values, first = eigendecompose(JacobiMatrix([-1 / 3], [], 2.0))
    assert values[0] == pytest.approx(-1 / 3)
    assert abs(first[0]) == pytest.approx(1.0)


def test_two_point_legendre():
    values, _ = eigendecompose(JacobiMatrix([0.0, 0.0], [1 / np.sqrt(3)], 2.0))
    np.testing.assert_allclose(values, [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-15)


def test_three_point_legendre_against_characteristic_polynomial():
    lam = sp.symbols("lam")
    off = [sp.sqrt(sp.Rational(1, 3)), sp.sqrt(sp.Rational(4, 15))]
    t = sp.Matrix([[0, off[0], 0], [off[0], 0, off[1]], [0, off[1], 0]])
    roots = sorted(float(r) for r in sp.solve((t - lam * sp.eye(3)).det(), lam))
    np.testing.assert_allclose(roots, [-np.sqrt(0.6), 0.0, np.sqrt(0.6)], atol=1e-15)
    values, _ = eigendecompose(JacobiMatrix([0, 0, 0], [float(o) for o in off], 2.0))
    np.testing.assert_allclose(values, roots, atol=1e-15)


def test_golub_welsch_examples():
    g = golub_welsch(stieltjes(Constant(), 2, modified=False))
    np.testing.assert_allclose(g.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-14)
    np.testing.assert_allclose(g.weights, [1.0, 1.0], atol=1e-13)
    g = golub_welsch(stieltjes(Constant(), 1))
    assert g.nodes[0] == pytest.approx(-1 / 3) and g.weights[0] == pytest.approx(2.0)


def test_two_point_exact_on_cubics():
    g = golub_welsch(stieltjes(Constant(), 2, modified=False))
    for k in range(4):
        exact = 2 / (k + 1) if k % 2 == 0 else 0.0
        assert g.apply(lambda x: x**k) == pytest.approx(exact, abs=1e-14)


def random_jacobi(rng, n):
    return JacobiMatrix(rng.uniform(-1, 1, n), rng.uniform(0.05, 1, n - 1), 1.0)


@pytest.mark.parametrize("n", [2, 3, 5, 8, 16, 32])
def test_residuals_and_agreement_with_lapack(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        m = random_jacobi(rng, n)
        d, e = m.diagonal.copy(), np.append(m.offdiagonal, 0.0)
        z = np.eye(n)
        _implicit_ql(d, e, z)
        t = m.dense()
        norm = np.linalg.norm(t, 2)
        for j in range(n):
            assert np.linalg.norm(t @ z[:, j] - d[j] * z[:, j]) <= 1e-12 * norm
        values, first = eigendecompose(m)
        ref_values, ref_vectors = np.linalg.eigh(t)
        np.testing.assert_allclose(values, ref_values, atol=1e-13 * norm)
        np.testing.assert_allclose(first**2, ref_vectors[0] ** 2, atol=1e-13)
        assert np.all(np.diff(values) > 0)


@pytest.mark.parametrize(
    "spec", [Constant(), ExpDecay(1, 2), Jacobi(0.5, 0), Jacobi(-0.5, -0.5), PiecewiseLinearTable((-1, 0, 1), (1, 3, 1))],
    ids=repr,
)
@pytest.mark.parametrize("q", [1, 4, 12])
def test_weights_sum_and_gauss_exactness(spec, q):
    c = stieltjes(spec, q)
    g = golub_welsch(c)
    assert g.weights.sum() == pytest.approx(c.beta[0], rel=1e-12)
    measure = ModifiedWeight(spec)
    exact = integrate(lambda x: npleg.legvander(x, 2 * q - 1).T, measure, 1e-14).value
    quad = npleg.legvander(g.nodes, 2 * q - 1).T @ g.weights
    assert np.max(np.abs(quad - np.atleast_1d(exact))) <= 1e-10 * c.beta[0]


@pytest.mark.parametrize("spec", [Constant(), ExpDecay(1, 3), Jacobi(0.5, 0)], ids=repr)
def test_nodes_interlace(spec):
    for q in range(1, 10):
        lo = golub_welsch(stieltjes(spec, q)).nodes
        hi = golub_welsch(stieltjes(spec, q + 1)).nodes
        assert np.all(hi[:-1] < lo) and np.all(lo < hi[1:])


def test_jacobi_matrix_validation():
    with pytest.raises(DomainError):
        JacobiMatrix([0.0, 0.0], [0.0], 1.0)
    with pytest.raises(DomainError):
        JacobiMatrix([0.0, 0.0], [1.0, 1.0], 1.0)


def test_gauss_rule_apply_broadcasts_constants():
    g = GaussRule(np.array([-0.5, 0.5]), np.array([1.0, 1.0]))
    assert g.apply(lambda x: 1.0) == 2.0
