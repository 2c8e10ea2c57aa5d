import numpy as np
import pytest

from ymlattice import ConstraintViolation, lie
from ymlattice.clebsch import (
    ReducedPointR0,
    check_bracket_correspondence,
    check_gamma_symplecto,
    conserved_charge,
    charge_density_defect,
    gamma,
    gamma_inverse,
    horizontal,
    phi,
    project_R0,
    random_R0_tangent,
)
from ymlattice.elliptic import cov_d_su
from ymlattice.gauge import PhasePointT, TangentR, cov_d_star, curvature
from ymlattice.lattice import AlgCochain, bracket_cup, hodge, inner, integrate
from ymlattice.symplectic import QUADRATIC, builtin_observables, moment_T


@pytest.fixture
def R0(cx2):
    rng = np.random.default_rng(1)
    A = cx2.random(1, seed=rng, scale=0.5)
    return A, project_R0(A, cx2.random(1, seed=rng)).p


def test_phi_components(R0):
    A, p = R0
    pt = phi(A, p)
    assert pt.A is A
    assert (pt.E + p).max_abs() == 0
    assert (pt.B - curvature(A)).max_abs() == 0


def test_project_R0_satisfies_gauss_law(R0):
    A, p = R0
    red = ReducedPointR0(A, p)
    assert red.check() <= 1e-10 * p.norm()
    assert red.point.p is p


def test_project_R0_idempotent(R0):
    A, p = R0
    q = project_R0(A, p).p
    assert (q - p).norm() <= 1e-8 * p.norm()


def test_reduced_point_check_rejects(cx2):
    A = cx2.random(1, seed=2, scale=0.5)
    with pytest.raises(ConstraintViolation):
        ReducedPointR0(A, cov_d_su(A, cx2.random(0, seed=3))).check()


def test_horizontal_is_orthogonal_to_orbit(R0):
    A, _ = R0
    cx = A.cx
    a = horizontal(A, cx.random(1, seed=4))
    xi = cx.random(0, seed=5)
    assert abs(inner(a, cov_d_su(A, xi))) <= 1e-9 * a.norm() * xi.norm()


def test_gamma_symplectomorphism(R0):
    A, p = R0
    assert check_gamma_symplecto(A, p, trials=8) <= 1e-7


def test_gamma_symplectomorphism_abelian_flat(cx2):
    rng = np.random.default_rng(6)
    A = cx2.constant(1, 0.4 * lie.diagonal_su(2, rng))
    p = cx2.zeros(1)
    assert check_gamma_symplecto(A, p, trials=8, coexact=True) <= 1e-9


def test_gamma_inverse_round_trips(R0):
    A, p = R0
    v = random_R0_tangent(A, seed=7)
    back = gamma_inverse(A, gamma(A, p, v), check=False)
    assert (back.a - v.a).norm() <= 1e-7 * v.a.norm()
    assert (back.x - v.x).norm() <= 1e-7 * v.x.norm()
    g = gamma(A, p, v)
    again = gamma(A, p, back)
    assert (again.e - g.e).norm() <= 1e-7 * g.e.norm()
    assert (again.beta - g.beta).norm() <= 1e-7 * g.beta.norm()


def test_gamma_inverse_constraint_check(R0):
    A, p = R0
    v = gamma(A, p, random_R0_tangent(A, seed=8))
    bad = type(v)(v.a, v.e, v.beta + A.cx.random(2, seed=9))
    with pytest.raises(ConstraintViolation):
        gamma_inverse(A, bad)


def test_gamma_beta_is_covariant_derivative(R0):
    A, p = R0
    v = random_R0_tangent(A, seed=10)
    assert (gamma(A, p, v).beta - cov_d_su(A, v.a)).max_abs() == 0


@pytest.mark.parametrize("pair", [("probe_e", "probe_b"), ("probe_b", "mixed"), ("probe_e", "mixed")])
def test_bracket_correspondence_linear_pairs(R0, pair):
    A, p = R0
    obs = {o.name: o for o in builtin_observables(A, seed=11)}
    f, g = obs[pair[0]], obs[pair[1]]
    assert check_bracket_correspondence(f, g, A, p) <= 1e-7


def test_charge_is_traceless_and_gauge_covariant(cx2):
    rng = np.random.default_rng(12)
    pt = PhasePointT(cx2.random(1, seed=rng, scale=0.5), cx2.random(1, seed=rng), cx2.random(2, seed=rng))
    Q = conserved_charge(pt)
    assert abs(np.trace(Q)) <= 1e-12
    assert np.allclose(Q, -Q.conj().T, atol=1e-12)
    U = lie.expm(lie.random_su(2, seed=13))
    g = lambda c: AlgCochain(cx2, c.degree, U.conj().T @ c.values @ U)
    Qg = conserved_charge(PhasePointT(g(pt.A), g(pt.E), g(pt.B)))
    np.testing.assert_allclose(Qg, U.conj().T @ Q @ U, atol=1e-12)


def test_charge_densities_differ_by_connection_term(cx2):
    rng = np.random.default_rng(14)
    pt = PhasePointT(cx2.random(1, seed=rng, scale=0.5), cx2.random(1, seed=rng), cx2.random(2, seed=rng))
    q1, q2, diff = charge_density_defect(pt)
    extra = integrate(bracket_cup(pt.A, bracket_cup(hodge(pt.B), pt.E)))
    np.testing.assert_allclose(q1 - q2, extra, atol=1e-12)
    assert diff == pytest.approx(float(np.abs(extra).max()))


def test_charge_densities_equal_at_zero_connection(cx2):
    rng = np.random.default_rng(15)
    pt = PhasePointT(cx2.zeros(1), cx2.random(1, seed=rng), cx2.random(2, seed=rng))
    assert charge_density_defect(pt)[2] <= 1e-12
