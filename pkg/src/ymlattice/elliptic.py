"""Green operator of the covariant Hodge Laplacian, irreducibility check and
the orthogonal (Helmholtz) splittings of tangent and cotangent data."""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import lie
from .errors import ConvergenceError, DegreeError, IrreducibilityError
from .gauge import cov_d, cov_d_star
from .lattice import AlgCochain

DEFAULT_TOL = 1e-10
IRREDUCIBLE_FLOOR = 1e-8
# Rayleigh quotients below this (times 1/h^2) mean CG has hit the kernel
KERNEL_FLOOR = 1e-10


@dataclass
class GreenSolveReport:
    iterations: int
    residual: float
    tol: float
    min_rayleigh: float = float("inf")
    history: list = field(default_factory=list, repr=False)

    @property
    def converged(self):
        return self.residual <= self.tol


def cov_d_su(A, c):
    """``d_A`` followed by projection onto su(n)-valued cochains."""
    return cov_d(A, c).project_su()


def cov_d_star_su(A, y):
    return cov_d_star(A, y).project_su()


def laplacian(A, c):
    """``(d_A^* d_A + d_A d_A^*) c`` on su(n)-valued cochains.

    Both factors are compressed to su(n) (``cov_d_su``, ``cov_d_star_su``):
    the cup of two su(n) cochains has a non-su(n) part, and keeping it adds
    a spurious near-kernel made of identity and hermitian components.  Terms leaving degrees 0..3 are dropped.
    """
    k = c.degree
    if k not in (0, 1, 2, 3):
        raise DegreeError(f"bad degree {k}")
    c = c.project_su()
    out = None
    if k < 3:
        out = cov_d_star_su(A, cov_d_su(A, c))
    if k > 0:
        t = cov_d_su(A, cov_d_star_su(A, c))
        out = t if out is None else out + t
    return out


def green(A, rhs, tol=DEFAULT_TOL, maxit=None):
    """Solve ``laplacian(A, x) = rhs`` by conjugate gradients.

    Returns ``(x, report)``.  The right-hand side is projected onto su(n)
    first and the solution is su(n)-valued.  Raises ``IrreducibilityError`` when CG meets a direction of
    (numerically) zero curvature, and ``ConvergenceError`` after ``maxit``.
    """
    k = rhs.degree
    b = rhs.project_su()
    dim = b.values.size * 2
    maxit = 10 * dim if maxit is None else maxit
    floor = KERNEL_FLOOR / A.cx.h ** 2

    def dot(u, v):
        return float(np.real(np.vdot(u.values, v.values)))

    x = b * 0.0
    r = b
    p = r
    rr = dot(r, r)
    bnorm = np.sqrt(rr)
    report = GreenSolveReport(0, 0.0, tol)
    if bnorm == 0.0:
        return x, report
    for it in range(1, maxit + 1):
        Ap = laplacian(A, p)
        pAp = dot(p, Ap)
        pp = dot(p, p)
        rayleigh = pAp / pp
        report.min_rayleigh = min(report.min_rayleigh, rayleigh)
        if rayleigh <= floor:
            report.iterations = it
            report.residual = np.sqrt(rr) / bnorm
            raise IrreducibilityError(
                report, f"Laplacian has a near-kernel (Rayleigh quotient {rayleigh:.3e})"
            )
        alpha = rr / pAp
        x = x + alpha * p
        r = r - alpha * Ap
        rr_new = dot(r, r)
        rel = np.sqrt(rr_new) / bnorm
        report.history.append(rel)
        if rel <= tol:
            report.iterations = it
            report.residual = rel
            # true residual guards against drift of the recurrence
            true = (b - laplacian(A, x)).norm() / b.norm()
            report.residual = max(rel, true)
            if true <= 10 * tol:
                return x, report
        p = r + (rr_new / rr) * p
        rr = rr_new
    report.iterations = maxit
    report.residual = np.sqrt(rr) / bnorm
    raise ConvergenceError(report)


def _laplacian0_dense(A):
    """Real matrix of the degree-0 Laplacian in an orthonormal su(n) basis."""
    cx, n = A.cx, A.n
    basis = lie.su_basis(n)
    m = len(basis)
    dim = cx.V * m
    cols = np.empty((dim, dim))
    for v in range(cx.V):
        for a, T in enumerate(basis):
            vals = np.zeros((cx.V, n, n), dtype=np.complex128)
            vals[v] = T
            out = laplacian(A, AlgCochain(cx, 0, vals)).values
            coeff = np.array([[lie.inner_su(Tb, out[w]) for Tb in basis] for w in range(cx.V)])
            cols[:, v * m + a] = coeff.ravel()
    return 0.5 * (cols + cols.T)


def irreducibility_check(A, iterations=50, seed=0):
    """Smallest eigenvalue of the degree-0 covariant Laplacian.

    Shifted inverse power iteration on the assembled operator followed by a
    Rayleigh quotient of the unshifted operator.  ``A`` counts as irreducible
    when the estimate exceeds ``IRREDUCIBLE_FLOOR``.
    """
    L = _laplacian0_dense(A)
    shift = 1e-6 * max(1.0, np.abs(L).max())
    lu = sla.lu_factor(L + shift * np.eye(L.shape[0]))
    v = np.random.default_rng(seed).standard_normal(L.shape[0])
    v /= np.linalg.norm(v)
    for _ in range(iterations):
        v = sla.lu_solve(lu, v)
        v /= np.linalg.norm(v)
    return float(max(v @ L @ v, 0.0))


def is_irreducible(A, floor=IRREDUCIBLE_FLOOR):
    return irreducibility_check(A) > floor


def decompose_tangent(A, x, tol=DEFAULT_TOL):
    """Split a 1-cochain as ``x = d_A xi + y`` with ``d_A^* y = 0``.

    ``xi = G_A d_A^* x`` and the exact part is taken in su(n), so both parts
    are su(n)-valued and orthogonal.  Returns ``(xi, y)``.
    """
    if x.degree != 1:
        raise DegreeError("decompose_tangent expects a 1-cochain")
    xi, _ = green(A, cov_d_star(A, x), tol=tol)
    return xi, x - cov_d_su(A, xi)


def decompose_cotangent(A, u, tol=DEFAULT_TOL):
    """Split a 2-cochain as ``u = d_A^* lam + w`` with ``d_A w = 0``.

    ``lam`` solves the degree-3 Green problem ``d_A d_A^* lam = d_A u``, which
    makes the split exactly orthogonal without needing ``G_A`` to commute
    with ``d_A``.  Returns ``(lam, w)``.
    """
    if u.degree != 2:
        raise DegreeError("decompose_cotangent expects a 2-cochain")
    lam, _ = green(A, cov_d_su(A, u), tol=tol)
    return lam, u - cov_d_star_su(A, lam)
