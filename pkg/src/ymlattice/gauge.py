"""Connection-dependent operators: curvature, covariant derivative and its
adjoint, the infinitesimal gauge action and its flow, Gauss constraints."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DegreeError
from .lattice import (
    SUBSETS,
    AlgCochain,
    bracket_cup,
    coboundary,
    coboundary_T,
    cup,
    cup_adjoint_left,
    cup_adjoint_right,
    hodge,
)

# A connection is a degree-1 cochain; kept as a plain alias.
Connection = AlgCochain


def _fields_add(self, v, t):
    parts = {}
    for name, vname in self._tangent_map:
        base = getattr(self, name)
        d = getattr(v, vname)
        parts[name] = base if d is None else base + t * d
    return type(self)(**parts)


@dataclass(frozen=True)
class TangentR:
    a: AlgCochain
    x: AlgCochain

    def __add__(self, o):
        return TangentR(self.a + o.a, self.x + o.x)

    def __mul__(self, s):
        return TangentR(s * self.a, s * self.x)

    __rmul__ = __mul__


@dataclass(frozen=True)
class TangentS:
    a: AlgCochain
    alpha: AlgCochain

    def __add__(self, o):
        return TangentS(self.a + o.a, self.alpha + o.alpha)

    def __mul__(self, s):
        return TangentS(s * self.a, s * self.alpha)

    __rmul__ = __mul__


@dataclass(frozen=True)
class TangentT:
    a: AlgCochain
    e: AlgCochain
    beta: AlgCochain

    def __add__(self, o):
        return TangentT(self.a + o.a, self.e + o.e, self.beta + o.beta)

    def __mul__(self, s):
        return TangentT(s * self.a, s * self.e, s * self.beta)

    __rmul__ = __mul__


@dataclass(frozen=True)
class PhasePointR:
    A: AlgCochain
    p: AlgCochain
    _tangent_map = (("A", "a"), ("p", "x"))
    moved = _fields_add


@dataclass(frozen=True)
class PhasePointS:
    A: AlgCochain
    lam: AlgCochain
    _tangent_map = (("A", "a"), ("lam", "alpha"))
    moved = _fields_add


@dataclass(frozen=True)
class PhasePointT:
    A: AlgCochain
    E: AlgCochain
    B: AlgCochain
    _tangent_map = (("A", "a"), ("E", "e"), ("B", "beta"))
    moved = _fields_add

    def __post_init__(self):
        if (self.A.degree, self.E.degree, self.B.degree) != (1, 1, 2):
            raise DegreeError("PhasePointT needs degrees (1, 1, 2)")


# -- operators -------------------------------------------------------------


def curvature(A):
    """``F_A = dA + A cup A`` (the graded half-bracket of a 1-cochain)."""
    return coboundary(A) + cup(A, A)


def cov_d(A, c):
    """``d_A c = dc + [A cup c]``."""
    if c.degree >= 3:
        raise DegreeError("cov_d of a 3-cochain leaves the complex")
    return coboundary(c) + bracket_cup(A, c)


def cov_d_star(A, y):
    """Exact adjoint of ``cov_d(A, .)`` with respect to ``inner``.

    Degree-0 outputs are projected onto su(n), the gauge Lie algebra, so
    this is the adjoint of ``d_A`` restricted to su(n)-valued 0-cochains.
    """
    if y.degree == 0:
        raise DegreeError("cov_d_star of a 0-cochain leaves the complex")
    k = y.degree - 1
    out = coboundary_T(y) + cup_adjoint_right(A, y, k)
    left = cup_adjoint_left(A, y, k)
    out = out + left if k % 2 else out - left
    return out.project_su() if k == 0 else out


def cov_d_matrix(A, k):
    """Sparse complex matrix of ``d_A`` on flattened k-cochains.

    Acts on ``c.flat()``; its conjugate transpose is the adjoint (before the
    su(n) projection used at degree 0).
    """
    if k >= 3:
        raise DegreeError("cov_d of a 3-cochain leaves the complex")
    cx, n = A.cx, A.n
    nn = n * n
    D = cx.coboundary_matrices[k]
    # d acts identically on every matrix entry
    base = sp.kron(D, sp.identity(nn, format="csr"), format="csr").astype(np.complex128)

    ii, jj, ll = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    ii, jj, ll = ii.ravel(), jj.ravel(), ll.ravel()
    rows, cols, vals = [], [], []
    # A cup c : left multiplication, (L X)_ij = sum_l L_il X_lj
    k_out, k_a, k_b, sign = cx.cup_table(1, k)
    L = A.values[k_a]
    rows.append((k_out[:, None] * nn + ii * n + jj).ravel())
    cols.append((k_b[:, None] * nn + ll * n + jj).ravel())
    vals.append((sign[:, None] * L[:, ii, ll]).ravel())
    # c cup A : right multiplication, (X R)_ij = sum_l X_il R_lj, weight -(-1)^k
    k_out, k_c, k_A, sign = cx.cup_table(k, 1)
    R = A.values[k_A]
    w = -1.0 if k % 2 == 0 else 1.0
    rows.append((k_out[:, None] * nn + ii * n + jj).ravel())
    cols.append((k_c[:, None] * nn + ii * n + ll).ravel())
    vals.append((w * sign[:, None] * R[:, ll, jj]).ravel())
    shape = (cx.ncells(k + 1) * nn, cx.ncells(k) * nn)
    brk = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=shape
    )
    return (base + brk).tocsr()


def fundamental_vf(xi, pt):
    """Infinitesimal gauge action of the su(n) 0-cochain ``xi`` at ``pt``.

    T: ``(d_A xi, [E cup xi], [B cup xi])``; R: ``(d_A xi, [p cup xi])``;
    S: ``(d_A xi, *[*lam cup xi])``, the R action transported by the star.
    """
    da = cov_d(pt.A, xi)
    if isinstance(pt, PhasePointT):
        return TangentT(da, bracket_cup(pt.E, xi), bracket_cup(pt.B, xi))
    if isinstance(pt, PhasePointR):
        return TangentR(da, bracket_cup(pt.p, xi))
    if isinstance(pt, PhasePointS):
        return TangentS(da, hodge(bracket_cup(hodge(pt.lam), xi)))
    raise TypeError(f"no gauge action on {type(pt).__name__}")


def gauge_flow(xi, t, pt, steps=64):
    """Time-``t`` flow of the fundamental vector field of ``xi`` (classical RK4)."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if t == 0:
        return pt
    dt = t / steps
    for _ in range(steps):
        k1 = fundamental_vf(xi, pt)
        k2 = fundamental_vf(xi, pt.moved(k1, dt / 2))
        k3 = fundamental_vf(xi, pt.moved(k2, dt / 2))
        k4 = fundamental_vf(xi, pt.moved(k3, dt))
        incr = (k1 + 2 * k2 + 2 * k3 + k4) * (dt / 6)
        pt = pt.moved(incr, 1.0)
    return pt


def gauss_residuals(pt):
    """``(||d_A B||, ||d_A^* E||)``; the point lies in the Yang-Mills field
    when both vanish."""
    return cov_d(pt.A, pt.B).norm(), cov_d_star(pt.A, pt.E).norm()


def bianchi_defect(A):
    """``||d_A F_A||``; vanishes to rounding for the associative cup."""
    return cov_d(A, curvature(A)).norm()


def smooth_connection(cx, n=2, amplitude=0.5, seed=0):
    """Nonabelian connection sampled from a fixed smooth periodic profile.

    The profile depends on physical position ``x * h``, so lattices that
    cover the same box at different spacing sample the same field.
    """
    from . import lie

    rng = np.random.default_rng(seed)
    gens = [lie.random_su(n, rng) for _ in range(3)]
    L = np.array(cx.shape) * cx.h
    phases = rng.uniform(0, 2 * np.pi, size=(3, 3))

    def fn(x, S):
        mu = S[0]
        pos = 2 * np.pi * (x * cx.h) / L
        val = np.zeros((n, n), dtype=complex)
        for a in range(3):
            val += np.sin(pos[(mu + a) % 3] + phases[mu, a]) * gens[a]
        return amplitude * val

    return cx.from_function(1, fn, n)


__all__ = [
    "Connection",
    "PhasePointR",
    "PhasePointS",
    "PhasePointT",
    "TangentR",
    "TangentS",
    "TangentT",
    "SUBSETS",
    "curvature",
    "cov_d",
    "cov_d_star",
    "cov_d_matrix",
    "fundamental_vf",
    "gauge_flow",
    "gauss_residuals",
    "bianchi_defect",
    "smooth_connection",
]
