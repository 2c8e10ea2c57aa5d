import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ymlattice import lie


@pytest.mark.parametrize("n", [2, 3, 4])
def test_su_basis_orthonormal(n):
    B = lie.su_basis(n)
    assert len(B) == n * n - 1
    G = np.array([[lie.inner_su(a, b) for b in B] for a in B])
    np.testing.assert_allclose(G, np.eye(len(B)), atol=1e-14)
    assert all(lie.is_su(b) for b in B)


def test_su2_basis_commutators():
    t = lie.su2_basis()
    # [t_a, t_b] = eps_abc t_c for t = i sigma / 2 up to orientation
    np.testing.assert_allclose(lie.commutator(t[0], t[1]), -t[2], atol=1e-15)


@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_project_su_idempotent(seed, n):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    P = lie.project_su(M)
    assert lie.is_su(P)
    np.testing.assert_allclose(lie.project_su(P), P, atol=1e-15)
    # orthogonal projection: residual is orthogonal to su(n)
    X = lie.random_su(n, rng)
    assert lie.inner_su(M - P, X) == pytest.approx(0.0, abs=1e-12)


def test_random_su_and_expm():
    X = lie.random_su(3, seed=4)
    assert lie.is_su(X)
    U = lie.expm(X)
    assert lie.is_group_element(U)
    np.testing.assert_allclose(np.linalg.det(U), 1.0, atol=1e-12)


def test_inner_is_minus_trace():
    X, Y = lie.random_su(2, seed=1), lie.random_su(2, seed=2)
    assert lie.inner_su(X, Y) == pytest.approx(-np.trace(X @ Y).real)


def test_diagonal_su_commute():
    D = lie.diagonal_su(3, seed=0, size=4)
    for a in D:
        assert lie.is_su(a)
        for b in D:
            np.testing.assert_allclose(lie.commutator(a, b), 0, atol=1e-15)
