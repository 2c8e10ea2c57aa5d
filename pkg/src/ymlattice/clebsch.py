"""Clebsch parametrization: the maps phi and gamma between reduced tangent
data (R^0, sigma) and the Yang-Mills field (F, Omega), with their checks.

All Green solves act on su(n)-valued cochains with the compressed operators
``cov_d_su`` / ``cov_d_star_su`` of ``elliptic``.
"""

from dataclasses import dataclass

import numpy as np

from .elliptic import DEFAULT_TOL, cov_d_star_su, cov_d_su, decompose_tangent, green, laplacian
from .errors import ConstraintViolation
from .gauge import PhasePointR, PhasePointT, TangentR, TangentT, cov_d_star, curvature
from .lattice import inner, integrate
from .symplectic import (
    Omega_T,
    hamiltonian_vf_T,
    moment_T,
    moment_T_density,
    moment_T_density_dual,
    poisson_T,
    sigma_R,
)


@dataclass(frozen=True)
class ReducedPointR0:
    A: object
    p: object
    residual: float = 0.0

    def check(self, tol=DEFAULT_TOL):
        r = cov_d_star(self.A, self.p).norm()
        if r > tol * max(1.0, self.p.norm()):
            raise ConstraintViolation(f"d_A^* p = {r:.3e} exceeds tolerance")
        return r

    @property
    def point(self):
        return PhasePointR(self.A, self.p)


def phi(A, p) -> PhasePointT:
    """``(A, p) -> (A, E = -p, B = F_A)``."""
    return PhasePointT(A, -p, curvature(A))


def project_R0(A, p, tol=DEFAULT_TOL) -> ReducedPointR0:
    """Orthogonal projection of ``p`` onto ``ker d_A^*``."""
    _, y = decompose_tangent(A, p, tol=tol)
    return ReducedPointR0(A, y, cov_d_star(A, y).norm())


def horizontal(A, a, tol=DEFAULT_TOL):
    """Component of ``a`` orthogonal to the gauge orbit (``d_A^* a = 0``)."""
    return decompose_tangent(A, a, tol=tol)[1]


def gamma(A, p, v: TangentR, tol=DEFAULT_TOL) -> TangentT:
    """``(a, x) -> (e, beta) = (-G_A x, d_A a)`` over the unchanged base ``a``."""
    e, _ = green(A, v.x, tol=tol)
    return TangentT(v.a, -e, cov_d_su(A, v.a))


def gamma_inverse(A, v: TangentT, tol=DEFAULT_TOL, check=True) -> TangentR:
    """``(e, beta) -> (G_A d_A^* beta, -d_A^* d_A e)``.

    The base ``a`` is recovered by a degree-1 solve; composing with ``d_A``
    then reproduces ``beta`` exactly whenever ``beta = d_A a`` for horizontal
    ``a``, without any commutation of ``G_A`` with ``d_A``.  ``x`` is taken
    as ``-laplacian(A, e)``, equal to ``-d_A^* d_A e`` once ``d_A^* e = 0``
    and an exact inverse of ``e = -G_A x`` in general.  With ``check``,
    ``d_A^* e = 0`` and ``beta in d_A(ker d_A^*)`` are enforced to 10x ``tol``.
    """
    a, _ = green(A, cov_d_star_su(A, v.beta), tol=tol)
    x = -laplacian(A, v.e)
    if check:
        lim = 10 * tol
        re = cov_d_star(A, v.e).norm()
        if re > lim * max(1.0, v.e.norm()):
            raise ConstraintViolation(f"d_A^* e = {re:.3e} exceeds {lim:.1e}")
        rb = (cov_d_su(A, a) - v.beta).norm()
        if rb > lim * max(1.0, v.beta.norm()):
            raise ConstraintViolation(f"beta is not d_A of a horizontal 1-cochain ({rb:.3e})")
    return TangentR(a, x)


def random_R0_tangent(A, seed=None, tol=DEFAULT_TOL, coexact=False):
    """Tangent ``(a, x)`` with ``x`` in ``ker d_A^*`` and ``a`` horizontal.

    ``coexact=True`` draws both from ``d_A^*`` of random 2-cochains instead
    of projecting.  For flat connections that is already horizontal and
    avoids the harmonic kernel, which makes it the sampler for reducible
    (for example abelian) ``A``.
    """
    rng = np.random.default_rng(seed)
    cx, n = A.cx, A.n
    if coexact:
        return TangentR(
            cov_d_star_su(A, cx.random(2, n, seed=rng)), cov_d_star_su(A, cx.random(2, n, seed=rng))
        )
    a = horizontal(A, cx.random(1, n, seed=rng), tol)
    x = horizontal(A, cx.random(1, n, seed=rng), tol)
    return TangentR(a, x)


def _fibre(v: TangentT) -> TangentT:
    return TangentT(v.a * 0.0, v.e, v.beta)


def check_gamma_symplecto(A, p, trials=32, seed=0, tol=DEFAULT_TOL, base=False, coexact=False):
    """``max |Omega(gamma v1, gamma v2) - sigma(v1, v2)|`` over R^0 tangents.

    ``Omega`` is evaluated on the fibre components ``(e, beta)``; pass
    ``base=True`` to keep the base direction in ``Omega``'s bracket terms.
    """
    pt_t = phi(A, p)
    pt_r = PhasePointR(A, p)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        v1 = random_R0_tangent(A, rng, tol, coexact)
        v2 = random_R0_tangent(A, rng, tol, coexact)
        g1, g2 = gamma(A, p, v1, tol), gamma(A, p, v2, tol)
        if not base:
            g1, g2 = _fibre(g1), _fibre(g2)
        worst = max(worst, abs(Omega_T(pt_t, g1, g2) - sigma_R(pt_r, v1, v2)))
    return worst


def pullback_hamiltonian_vf(obs, A, p) -> TangentR:
    """``X^R = (d_A^* varE, d_A^* d_A varB)`` evaluated at ``phi(A, p)``."""
    pt = phi(A, p)
    return TangentR(cov_d_star_su(A, obs.varE(pt)), cov_d_star_su(A, cov_d_su(A, obs.varB(pt))))


def check_pullback_consistency(obs, A, p, tol=DEFAULT_TOL):
    """``|gamma((G_A + 1) X^R) - X^T|``: how far the pulled-back field lands
    from the Hamiltonian field on the Yang-Mills side (fibre components)."""
    xr = pullback_hamiltonian_vf(obs, A, p)
    ga, _ = green(A, xr.a, tol=tol)
    g = gamma(A, p, TangentR(ga, xr.x), tol)
    xt = hamiltonian_vf_T(obs, phi(A, p))
    scale = max(1.0, xt.e.norm() + xt.beta.norm())
    return ((g.e - xt.e.project_su()).norm() + (g.beta - xt.beta.project_su()).norm()) / scale


def check_bracket_correspondence(f, g, A, p, tol=DEFAULT_TOL):
    """``|{f, g}(phi(A, p)) - sigma(gamma^-1 X_f, gamma^-1 X_g)|``."""
    pt = phi(A, p)
    vf = gamma_inverse(A, hamiltonian_vf_T(f, pt), tol, check=False)
    vg = gamma_inverse(A, hamiltonian_vf_T(g, pt), tol, check=False)
    return abs(poisson_T(f, g, pt) - sigma_R(PhasePointR(A, p), vf, vg))


def conserved_charge(pt: PhasePointT):
    """Total charge: the integral of ``moment_T``, an n x n matrix."""
    return integrate(moment_T(pt))


def charge_density_defect(pt: PhasePointT):
    """Totals of the two bracket densities and their difference.

    Returns ``(Q1, Q2, |Q1 - Q2|)`` with ``Q1 = int [d_A *B cup E]`` and
    ``Q2 = int [-d_A E cup *B]``.
    """
    q1 = integrate(moment_T_density(pt))
    q2 = integrate(moment_T_density_dual(pt))
    return q1, q2, float(np.abs(q1 - q2).max())


__all__ = [
    "ReducedPointR0",
    "check_bracket_correspondence",
    "check_gamma_symplecto",
    "check_pullback_consistency",
    "conserved_charge",
    "charge_density_defect",
    "gamma",
    "gamma_inverse",
    "horizontal",
    "inner",
    "phi",
    "project_R0",
    "pullback_hamiltonian_vf",
    "random_R0_tangent",
]
