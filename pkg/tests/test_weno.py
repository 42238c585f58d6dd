import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swvortex.weno import (
    candidate_coefficients,
    linear_weights,
    weno5_points,
    weno5_points_numpy,
    weno5_reconstruct,
)

GAUSS4 = tuple(0.5 * np.polynomial.legendre.leggauss(4)[0])


def cell_avgs(antiderivative, edges):
    return (antiderivative(edges[1:]) - antiderivative(edges[:-1])) / np.diff(edges)


def reference_faces(v):
    # textbook Jiang-Shu WENO5, right face; left face by mirroring
    def right(a, b, c, d, e):
        q0 = (2 * a - 7 * b + 11 * c) / 6
        q1 = (-b + 5 * c + 2 * d) / 6
        q2 = (2 * c + 5 * d - e) / 6
        b0 = 13 / 12 * (a - 2 * b + c) ** 2 + 1 / 4 * (a - 4 * b + 3 * c) ** 2
        b1 = 13 / 12 * (b - 2 * c + d) ** 2 + 1 / 4 * (b - d) ** 2
        b2 = 13 / 12 * (c - 2 * d + e) ** 2 + 1 / 4 * (3 * c - 4 * d + e) ** 2
        w = np.array([0.1, 0.6, 0.3]) / (1e-6 + np.array([b0, b1, b2])) ** 2
        return (w @ [q0, q1, q2]) / w.sum()

    return right(*v[::-1]), right(*v)


def test_linear_weights_at_faces():
    np.testing.assert_allclose(linear_weights(0.5), [0.1, 0.6, 0.3], rtol=1e-14)
    np.testing.assert_allclose(linear_weights(-0.5), [0.3, 0.6, 0.1], rtol=1e-14)
    np.testing.assert_allclose(candidate_coefficients(0.5)[0], [1 / 3, -7 / 6, 11 / 6], rtol=1e-14)


@pytest.mark.parametrize("xi", GAUSS4 + (-0.5, 0.5))
def test_weights_positive_and_normalised(xi):
    d = linear_weights(xi)
    assert np.all(d > 0)
    assert d.sum() == pytest.approx(1.0, abs=1e-15)


def test_rejects_points_with_negative_linear_weights():
    with pytest.raises(ValueError):
        linear_weights(0.1)
    with pytest.raises(ValueError):
        linear_weights(0.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(-1e6, 1e6))
def test_constant_is_exact(c):
    left, right = weno5_reconstruct([c] * 5)
    assert left == c and right == c


@settings(max_examples=50, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10))
def test_linear_is_exact(a, b):
    edges = np.arange(-2.5, 3.0)
    v = cell_avgs(lambda x: a * x + 0.5 * b * x * x, edges)
    left, right = weno5_reconstruct(v)
    assert left == pytest.approx(a - 0.5 * b, abs=1e-12)
    assert right == pytest.approx(a + 0.5 * b, abs=1e-12)


@pytest.mark.parametrize("degree", range(5))
@pytest.mark.parametrize("xi", GAUSS4 + (-0.5, 0.5))
def test_polynomial_reproduction_with_linear_weights(degree, xi):
    edges = np.arange(-2.5, 3.0)
    coef = np.random.default_rng(degree).normal(size=degree + 1)
    P = np.polynomial.Polynomial(coef)
    v = cell_avgs(P.integ(), edges)
    c, d = candidate_coefficients(xi), linear_weights(xi)
    q = np.array([c[k] @ v[k:k + 3] for k in range(3)])
    assert d @ q == pytest.approx(P(xi), abs=1e-12)
    # each quadratic candidate alone is exact up to degree 2
    if degree <= 2:
        np.testing.assert_allclose(q, P(xi), atol=1e-12)


def test_matches_textbook_implementation():
    rng = np.random.default_rng(3)
    for _ in range(200):
        v = rng.normal(size=5) * 10 ** rng.uniform(-4, 1)
        np.testing.assert_allclose(weno5_reconstruct(v), reference_faces(v), rtol=1e-12, atol=1e-15)


def test_self_convergence_sin():
    errs = []
    ns = (20, 40, 80, 160)
    for n in ns:
        edges = np.linspace(0, 1, n + 1)
        u = cell_avgs(lambda x: -np.cos(2 * np.pi * x) / (2 * np.pi), edges)
        _, right = weno5_points(u, 0, (-0.5, 0.5))
        errs.append(np.max(np.abs(right - np.sin(2 * np.pi * edges[1:]))))
    slopes = -np.diff(np.log(errs)) / np.log(2)
    assert slopes[-1] == pytest.approx(5.0, abs=0.2)


@pytest.mark.parametrize("axis", [0, 1, 2])
def test_numba_matches_numpy(axis):
    u = np.random.default_rng(axis).normal(size=(7, 9, 6))
    pts = (-0.5, 0.5) + GAUSS4
    fast = weno5_points(u, axis, pts)
    slow = weno5_points_numpy(u, axis, pts)
    np.testing.assert_allclose(fast, np.array(slow), rtol=1e-13, atol=1e-15)


def test_mirror_symmetry():
    u = np.random.default_rng(5).normal(size=12)
    left, right = weno5_points(u, 0, (-0.5, 0.5))
    left_m, right_m = weno5_points(u[::-1].copy(), 0, (-0.5, 0.5))
    np.testing.assert_array_equal(left, right_m[::-1])
    np.testing.assert_array_equal(right, left_m[::-1])


def test_too_few_cells():
    with pytest.raises(ValueError):
        weno5_points(np.ones(4), 0, (0.5,))
    with pytest.raises(ValueError):
        weno5_reconstruct([1.0, 2.0])
