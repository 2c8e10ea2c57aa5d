"""Symplectic forms, canonical one-forms, moment maps, observables and
Poisson brackets on the three phase spaces, with finite-difference audits.

Pairings of a form with its dual are realized through the star as
``inner(a, *alpha)``; ``inner`` is ``-h^3 sum tr(ab)`` on su(n).
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import lie
from .gauge import (
    PhasePointR,
    PhasePointS,
    PhasePointT,
    TangentR,
    TangentS,
    TangentT,
    cov_d,
    cov_d_star,
    curvature,
    fundamental_vf,
    gauge_flow,
)
from .lattice import AlgCochain, bracket_adjoint, bracket_cup, hodge, inner, pair

DEFAULT_PROBES = 16
DEFAULT_FD_STEP = 1e-4


# -- one- and two-forms ------------------------------------------------------


def theta_S(pt: PhasePointS, v: TangentS) -> float:
    """Canonical one-form on the cotangent bundle: ``inner(a, *lam)``."""
    return inner(v.a, hodge(pt.lam))


def omega_S(pt: PhasePointS, v1: TangentS, v2: TangentS) -> float:
    """``(b, *alpha) - (a, *beta)`` for ``v1 = (a, alpha)``, ``v2 = (b, beta)``."""
    return inner(v2.a, hodge(v1.alpha)) - inner(v1.a, hodge(v2.alpha))


def sigma_R(pt: PhasePointR, v1: TangentR, v2: TangentR) -> float:
    """``(b, x) - (a, y)`` for ``v1 = (a, x)``, ``v2 = (b, y)``."""
    return inner(v2.a, v1.x) - inner(v1.a, v2.x)


def Theta_T(pt: PhasePointT, v: TangentT) -> float:
    return inner(v.e, cov_d_star(pt.A, pt.B))


def Omega_T(pt: PhasePointT, v1: TangentT, v2: TangentT) -> float:
    """Exterior derivative of ``Theta_T`` (constant vector fields).

    ``([a1 cup e2], B) - ([a2 cup e1], B) + (e2, d_A^* beta1) - (e1, d_A^* beta2)``;
    the bracket terms come from varying ``A`` inside ``d_A^*``.
    """
    A, B = pt.A, pt.B
    return (
        inner(bracket_cup(v1.a, v2.e), B)
        - inner(bracket_cup(v2.a, v1.e), B)
        + inner(v2.e, cov_d_star(A, v1.beta))
        - inner(v1.e, cov_d_star(A, v2.beta))
    )


def omega_T_covector(pt: PhasePointT, v1: TangentT) -> TangentT:
    """Riesz representative of ``Omega_T(pt, v1, .)`` in the tangent inner product."""
    A, B = pt.A, pt.B
    ga = -bracket_adjoint(v1.e, B, 1)
    ge = bracket_adjoint(v1.a, B, 1) + cov_d_star(A, v1.beta)
    gb = -cov_d(A, v1.e)
    return TangentT(ga, ge, gb)


# -- moment maps -------------------------------------------------------------


def moment_R(A, p):
    """``d_A^* p``, an su(n) 0-cochain."""
    return cov_d_star(A, p)


def moment_S(A, lam):
    """Charge density ``*d_A^* *lam``, the lattice form of ``-d_A lam``.

    On 2-forms in three dimensions ``d_A^* = -* d_A *``, so this is the
    density whose pairing with ``xi`` generates the star-transported action.
    """
    return hodge(cov_d_star(A, hodge(lam)))


def moment_T(pt: PhasePointT):
    """Charge density dual to the gauge action on the fibre.

    ``pair(moment_T, xi) = ([E cup xi], d_A^* B)``; integrates to zero on
    abelian data.  See ``moment_T_density`` for the pointwise bracket form.
    """
    y = cov_d_star(pt.A, pt.B)
    return hodge(bracket_adjoint(pt.E, y, 0).project_su())


def moment_T_density(pt: PhasePointT):
    """Bracket density ``[d_A *B cup E]``."""
    return bracket_cup(cov_d(pt.A, hodge(pt.B)), pt.E)


def moment_T_density_dual(pt: PhasePointT):
    """Alternative density ``[-d_A E cup *B]``; same total for abelian data."""
    return bracket_cup(-cov_d(pt.A, pt.E), hodge(pt.B))


def moment_value(pt, xi) -> float:
    """``J^xi(pt)``: the moment map paired with the gauge parameter ``xi``."""
    if isinstance(pt, PhasePointR):
        return inner(moment_R(pt.A, pt.p), xi)
    if isinstance(pt, PhasePointS):
        return pair(moment_S(pt.A, pt.lam), xi)
    if isinstance(pt, PhasePointT):
        return pair(moment_T(pt), xi)
    raise TypeError(type(pt).__name__)


def symplectic_form(pt, v1, v2) -> float:
    if isinstance(pt, PhasePointR):
        return sigma_R(pt, v1, v2)
    if isinstance(pt, PhasePointS):
        return omega_S(pt, v1, v2)
    if isinstance(pt, PhasePointT):
        return Omega_T(pt, v1, v2)
    raise TypeError(type(pt).__name__)


# -- random data and finite differences --------------------------------------


def random_tangent(pt, seed=None, scale=1.0):
    """Random su(n)-valued tangent vector at ``pt`` (all components)."""
    rng = np.random.default_rng(seed)
    cx, n = pt.A.cx, pt.A.n

    def r(k):
        return cx.random(k, n, seed=rng, scale=scale)

    if isinstance(pt, PhasePointR):
        return TangentR(r(1), r(1))
    if isinstance(pt, PhasePointS):
        return TangentS(r(1), r(2))
    return TangentT(r(1), r(1), r(2))


def random_point(space, cx, n=2, seed=None, scale=0.5):
    rng = np.random.default_rng(seed)
    A = cx.random(1, n, seed=rng, scale=scale)
    if space == "R":
        return PhasePointR(A, cx.random(1, n, seed=rng))
    if space == "S":
        return PhasePointS(A, cx.random(2, n, seed=rng))
    if space == "T":
        return PhasePointT(A, cx.random(1, n, seed=rng), cx.random(2, n, seed=rng))
    raise ValueError(f"unknown space {space!r}")


def directional(f, pt, v, h=DEFAULT_FD_STEP) -> float:
    """Central difference of ``f`` at ``pt`` along the constant field ``v``."""
    return (f(pt.moved(v, h)) - f(pt.moved(v, -h))) / (2 * h)


def _probes(pt, count, seed):
    rng = np.random.default_rng(seed)
    return [random_tangent(pt, rng) for _ in range(count)]


# -- audits ------------------------------------------------------------------


def check_moment_condition(space, xi, pt, h=DEFAULT_FD_STEP, probes=DEFAULT_PROBES, seed=0):
    """``max_v |dJ^xi(v) - omega(v, xi_#)|`` over random probe directions."""
    kind = {"R": PhasePointR, "S": PhasePointS, "T": PhasePointT}[space]
    if not isinstance(pt, kind):
        raise TypeError(f"space {space} needs a {kind.__name__}")
    xi_vf = fundamental_vf(xi, pt)
    worst = 0.0
    for v in _probes(pt, probes, seed):
        lhs = directional(lambda q: moment_value(q, xi), pt, v, h)
        rhs = symplectic_form(pt, v, xi_vf)
        worst = max(worst, abs(lhs - rhs))
    return worst


def check_equivariance(xi0, pt, t=0.1, steps=64):
    """Covariance of the moment map under the flow of a constant generator.

    For spatially constant ``xi0`` the gauge flow conjugates every value by
    ``U = exp(t xi0)``; the moment density must follow, ``J -> U^H J U``.
    Returns the max-norm defect.
    """
    U = lie.expm(t * xi0.values[0])
    moved = gauge_flow(xi0, t, pt, steps=steps)
    if isinstance(pt, PhasePointR):
        j0, j1 = moment_R(pt.A, pt.p), moment_R(moved.A, moved.p)
    elif isinstance(pt, PhasePointS):
        j0, j1 = moment_S(pt.A, pt.lam), moment_S(moved.A, moved.lam)
    else:
        j0, j1 = moment_T(pt), moment_T(moved)
    expected = U.conj().T @ j0.values @ U
    return float(np.abs(j1.values - expected).max())


def check_omega_exterior(pt: PhasePointT, h=DEFAULT_FD_STEP, probes=DEFAULT_PROBES, seed=0):
    """``max |D_v1 Theta(v2) - D_v2 Theta(v1) - Omega_T(v1, v2)|``."""
    vs = _probes(pt, 2 * probes, seed)
    worst = 0.0
    for v1, v2 in zip(vs[::2], vs[1::2]):
        d = directional(lambda q: Theta_T(q, v2), pt, v1, h) - directional(
            lambda q: Theta_T(q, v1), pt, v2, h
        )
        worst = max(worst, abs(d - Omega_T(pt, v1, v2)))
    return worst


def check_closedness(pt: PhasePointT, h=1e-3, probes=DEFAULT_PROBES, seed=0):
    """Cyclic sum ``D_v1 Omega(v2,v3) + D_v2 Omega(v3,v1) + D_v3 Omega(v1,v2)``."""
    vs = _probes(pt, 3 * probes, seed)
    worst = 0.0
    for v1, v2, v3 in zip(vs[::3], vs[1::3], vs[2::3]):
        s = (
            directional(lambda q: Omega_T(q, v2, v3), pt, v1, h)
            + directional(lambda q: Omega_T(q, v3, v1), pt, v2, h)
            + directional(lambda q: Omega_T(q, v1, v2), pt, v3, h)
        )
        worst = max(worst, abs(s))
    return worst


def _su_coords(c, basis):
    return np.einsum("cij,aij->ca", c.values, np.conj(basis)).real.ravel() * c.cx.h ** 1.5


def _su_embed(cx, k, coeffs, basis):
    vals = np.einsum("ca,aij->cij", coeffs.reshape(cx.ncells(k), len(basis)), basis)
    return AlgCochain(cx, k, vals / cx.h ** 1.5)


def omega_T_matrix(pt: PhasePointT):
    """Real matrix of ``Omega_T`` in an orthonormal basis of su(n) tangents."""
    cx, n = pt.A.cx, pt.A.n
    basis = np.array(lie.su_basis(n))
    m = len(basis)
    sizes = [cx.ncells(1) * m, cx.ncells(1) * m, cx.ncells(2) * m]
    offs = np.concatenate([[0], np.cumsum(sizes)])
    dim = offs[-1]
    zero = [cx.zeros(1, n), cx.zeros(1, n), cx.zeros(2, n)]
    M = np.empty((dim, dim))
    for i in range(dim):
        comp = int(np.searchsorted(offs, i, side="right") - 1)
        parts = list(zero)
        coeff = np.zeros(sizes[comp])
        coeff[i - offs[comp]] = 1.0
        parts[comp] = _su_embed(cx, (1, 1, 2)[comp], coeff, basis)
        w = omega_T_covector(pt, TangentT(*parts))
        M[i] = np.concatenate([_su_coords(w.a, basis), _su_coords(w.e, basis), _su_coords(w.beta, basis)])
    return M


def omega_T_spectrum(pt: PhasePointT, rtol=1e-10):
    """Singular values of the assembled ``Omega_T`` and its numerical rank."""
    sv = np.linalg.svd(omega_T_matrix(pt), compute_uv=False)
    rank = int((sv > rtol * sv[0]).sum()) if sv.size else 0
    return sv, rank


# -- observables -------------------------------------------------------------


@dataclass(frozen=True)
class Observable:
    """Function of ``(E, B)`` with closed-form variational derivatives.

    ``varE`` is a 2-cochain and ``varB`` a 1-cochain, normalized so that
    ``dPhi(e, beta) = (e, d_A^* varE) + (varB, d_A^* beta)``.
    """

    name: str
    eval: Callable[[PhasePointT], float]
    varE: Callable[[PhasePointT], AlgCochain]
    varB: Callable[[PhasePointT], AlgCochain]

    def __call__(self, pt):
        return self.eval(pt)


def constant_observable(value=1.0, n=2):
    return Observable(
        "const",
        lambda pt: value,
        lambda pt: pt.A.cx.zeros(2, pt.A.n),
        lambda pt: pt.A.cx.zeros(1, pt.A.n),
    )


def vortex_hamiltonian():
    """``H = 1/2 (|d_A E|^2 + |d_A^* B|^2)``."""

    def ev(pt):
        return 0.5 * (cov_d(pt.A, pt.E).norm() ** 2 + cov_d_star(pt.A, pt.B).norm() ** 2) * pt.A.cx.h ** 3

    return Observable(
        "vortex",
        ev,
        lambda pt: cov_d(pt.A, pt.E),
        lambda pt: cov_d_star(pt.A, pt.B),
    )


def probe_e(c):
    """``Phi_c = (E, d_A^* c)`` for a stored 2-cochain ``c``."""
    return Observable(
        "probe_e",
        lambda pt: inner(pt.E, cov_d_star(pt.A, c)),
        lambda pt: c,
        lambda pt: pt.A.cx.zeros(1, pt.A.n),
    )


def probe_b(c):
    """``Psi_c = (c, d_A^* B)`` for a stored 1-cochain ``c``."""
    return Observable(
        "probe_b",
        lambda pt: inner(c, cov_d_star(pt.A, pt.B)),
        lambda pt: pt.A.cx.zeros(2, pt.A.n),
        lambda pt: c,
    )


def mixed_observable():
    """``Q = (E, d_A^* B)``, the canonical one-form evaluated on ``(E, B)``."""
    return Observable(
        "mixed",
        lambda pt: inner(pt.E, cov_d_star(pt.A, pt.B)),
        lambda pt: pt.B,
        lambda pt: pt.E,
    )


def product_observable(f, g):
    return Observable(
        f"{f.name}*{g.name}",
        lambda pt: f(pt) * g(pt),
        lambda pt: g(pt) * f.varE(pt) + f(pt) * g.varE(pt),
        lambda pt: g(pt) * f.varB(pt) + f(pt) * g.varB(pt),
    )


def hamiltonian_R(A, p) -> float:
    """``1/2 (F_A, F_A) + 1/2 (p, p)``."""
    F = curvature(A)
    return 0.5 * inner(F, F) + 0.5 * inner(p, p)


def builtin_observables(A, seed=0):
    """Named observables used by the bracket audits and the CLI.

    The probe cochains are drawn deterministically from ``seed``.
    """
    rng = np.random.default_rng(seed)
    cx, n = A.cx, A.n
    pe = probe_e(cx.random(2, n, seed=rng))
    pb = probe_b(cx.random(1, n, seed=rng))
    return [vortex_hamiltonian(), pe, pb, mixed_observable(), product_observable(pe, pb)]


QUADRATIC = ("vortex", "probe_e", "probe_b", "mixed")


def hamiltonian_vf_T(obs: Observable, pt: PhasePointT) -> TangentT:
    """``X_Phi = (0, -varB, varE)``: vertical, so ``dPhi(v) = Omega(X_Phi, v)``."""
    return TangentT(pt.A.cx.zeros(1, pt.A.n), -obs.varB(pt), obs.varE(pt))


def poisson_T(f: Observable, g: Observable, pt: PhasePointT) -> float:
    """``(varB_f, d_A^* varE_g) - (varB_g, d_A^* varE_f)``."""
    A = pt.A
    return inner(f.varB(pt), cov_d_star(A, g.varE(pt))) - inner(g.varB(pt), cov_d_star(A, f.varE(pt)))


def poisson_T_dA(f: Observable, g: Observable, pt: PhasePointT) -> float:
    """Same bracket with ``d_A`` moved onto the ``B`` derivatives."""
    A = pt.A
    return inner(cov_d(A, f.varB(pt)), g.varE(pt)) - inner(cov_d(A, g.varB(pt)), f.varE(pt))


def differential(obs: Observable, pt: PhasePointT, v: TangentT) -> float:
    """``dPhi(v)`` from the variational derivatives (fibre part of ``v``)."""
    A = pt.A
    return inner(v.e, cov_d_star(A, obs.varE(pt))) + inner(obs.varB(pt), cov_d_star(A, v.beta))


def _fibre_probes(pt, count, seed):
    zero = pt.A.cx.zeros(1, pt.A.n)
    return [TangentT(zero, v.e, v.beta) for v in _probes(pt, count, seed)]


def check_variational_derivative(obs, pt, h=DEFAULT_FD_STEP, probes=DEFAULT_PROBES, seed=0):
    """``max |central difference of Phi - dPhi(e, beta)|`` over fibre probes."""
    worst = 0.0
    for v in _fibre_probes(pt, probes, seed):
        worst = max(worst, abs(directional(obs.eval, pt, v, h) - differential(obs, pt, v)))
    return worst


def check_jacobi(f, g, k, pt, h=1e-2):
    """``{{f,g},k} + {{g,k},f} + {{k,f},g}`` at fixed ``A``.

    The outer bracket ``{F, k} = dF(X_k)`` is taken by central differences
    of the inner bracket, which is exact for quadratic observables at any
    step; the large default step keeps rounding out of the residual.
    """

    def outer(a, b, c):
        return directional(lambda q: poisson_T(a, b, q), pt, hamiltonian_vf_T(c, pt), h)

    return abs(outer(f, g, k) + outer(g, k, f) + outer(k, f, g))


__all__ = [
    "Observable",
    "QUADRATIC",
    "Omega_T",
    "Theta_T",
    "builtin_observables",
    "check_closedness",
    "check_equivariance",
    "check_jacobi",
    "check_moment_condition",
    "check_omega_exterior",
    "check_variational_derivative",
    "constant_observable",
    "differential",
    "directional",
    "hamiltonian_R",
    "hamiltonian_vf_T",
    "mixed_observable",
    "moment_R",
    "moment_S",
    "moment_T",
    "moment_T_density",
    "moment_T_density_dual",
    "moment_value",
    "omega_S",
    "omega_T_covector",
    "omega_T_matrix",
    "omega_T_spectrum",
    "poisson_T",
    "poisson_T_dA",
    "probe_b",
    "probe_e",
    "product_observable",
    "random_point",
    "random_tangent",
    "sigma_R",
    "symplectic_form",
    "theta_S",
    "vortex_hamiltonian",
]
