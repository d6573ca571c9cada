import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kminit.errors import DegenerateCovariance
from kminit.linalg import covariance, principal_eigenvector, variance_per_axis


def test_covariance_examples():
    np.testing.assert_array_equal(covariance([[3.0, 4.0]]).m, np.zeros((2, 2)))
    np.testing.assert_array_equal(covariance([[0.0], [2.0]]).m, [[1.0]])
    np.testing.assert_allclose(covariance([[0, 0], [1, 1]]).m, [[0.25, 0.25], [0.25, 0.25]])


def test_covariance_symmetric():
    x = np.random.default_rng(3).normal(size=(50, 6))
    m = covariance(x).m
    np.testing.assert_array_equal(m, m.T)
    np.testing.assert_allclose(m, np.cov(x.T, bias=True), rtol=1e-12, atol=1e-14)


def test_variance_examples(ruspini):
    np.testing.assert_array_equal(variance_per_axis([[0, 0], [0, 10]]), [0, 25])
    np.testing.assert_array_equal(variance_per_axis([[2, 3]] * 4), [0, 0])
    vx, vy = variance_per_axis(ruspini.points)
    assert vy > vx


def test_eigen_examples():
    v, lam = principal_eigenvector(np.diag([4.0, 1.0]))
    np.testing.assert_array_equal(v, [1, 0])
    assert lam == 4.0
    v, lam = principal_eigenvector(np.array([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(v, [2 ** -0.5, 2 ** -0.5], atol=1e-9)
    assert lam == pytest.approx(3.0, abs=1e-9)
    v, lam = principal_eigenvector(np.diag([3.0, 3.0]))
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
    assert lam == pytest.approx(3.0)


def test_eigen_zero_matrix():
    with pytest.raises(DegenerateCovariance):
        principal_eigenvector(np.zeros((3, 3)))


def test_start_axis_orthogonal_to_principal():
    # the largest-diagonal axis is an eigenvector, but not the principal one
    m = np.array([[2.0, 0, 0], [0, 1.5, 1.4], [0, 1.4, 1.5]])
    v, lam = principal_eigenvector(m)
    assert lam == pytest.approx(2.9, abs=1e-9)
    assert abs(v[0]) < 1e-6


def _analytic_max(m):
    """Largest eigenvalue of a symmetric 2x2 or 3x3 matrix in closed form."""
    if m.shape == (2, 2):
        a, b, c = m[0, 0], m[0, 1], m[1, 1]
        return (a + c) / 2 + math.hypot((a - c) / 2, b)
    # trigonometric solution of the characteristic cubic
    p1 = m[0, 1] ** 2 + m[0, 2] ** 2 + m[1, 2] ** 2
    q = np.trace(m) / 3
    if p1 == 0:
        return float(np.max(np.diag(m)))
    p2 = (m[0, 0] - q) ** 2 + (m[1, 1] - q) ** 2 + (m[2, 2] - q) ** 2 + 2 * p1
    p = math.sqrt(p2 / 6)
    r = np.linalg.det((m - q * np.eye(3)) / p) / 2
    phi = math.acos(min(1.0, max(-1.0, r))) / 3
    return q + 2 * p * math.cos(phi)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(1, 6), st.integers(0, 2**31))
def test_rayleigh_matches_analytic(dim, rank, seed):
    a = np.random.default_rng(seed).normal(size=(rank, dim))
    m = a.T @ a
    v, lam = principal_eigenvector(m)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
    rq = float(v @ m @ v)
    want = _analytic_max(m)
    assert abs(rq - want) <= 1e-8 * max(1.0, want)
    assert rq >= np.max(np.diag(m)) - 1e-10 * abs(lam)
    assert want == pytest.approx(np.linalg.eigvalsh(m)[-1], rel=1e-9, abs=1e-12)


def test_sign_convention():
    v, _ = principal_eigenvector(np.array([[2.0, -1.0], [-1.0, 2.0]]))
    assert v[np.flatnonzero(v)[0]] > 0
