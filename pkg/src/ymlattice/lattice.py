"""Periodic cubical 3-complex and matrix-valued cochains on it.

Cells are labelled ``(x, S)``: a base vertex ``x`` in ``Z^3 mod (nx, ny, nz)``
and a sorted direction set ``S`` of axes 0, 1, 2.  A k-cell spans the unit
vectors of ``S`` starting at ``x``.  The flat index of a k-cell is
``vertex_index(x) * C(3, k) + rank(S)`` where vertices are ordered
lexicographically in ``(x0, x1, x2)`` and direction sets lexicographically,
so the whole ordering is lexicographic in ``(x, S)``.

Cochain values are point values of form components (not cell integrals):
the coboundary carries ``1/h``, inner products and integrals carry ``h^3``,
and the Hodge star is a pure signed permutation.
"""

from functools import cached_property
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from . import kernels, lie
from .errors import DegenerateLattice, DegreeError

SUBSETS = {k: list(combinations(range(3), k)) for k in range(4)}
_RANK = {S: i for k in range(4) for i, S in enumerate(SUBSETS[k])}


def perm_sign(seq):
    """Sign of the permutation that sorts ``seq`` (distinct entries)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class CubicalComplex3:
    """Periodic ``nx * ny * nz`` cubical lattice with spacing ``h``."""

    def __init__(self, nx, ny, nz, h=1.0):
        shape = (int(nx), int(ny), int(nz))
        if min(shape) < 2:
            raise DegenerateLattice(f"every axis needs at least 2 points, got {shape}")
        if not h > 0:
            raise ValueError("spacing h must be positive")
        self.shape = shape
        self.h = float(h)
        self.V = shape[0] * shape[1] * shape[2]
        self._cup_tables = {}

    def __repr__(self):
        return f"CubicalComplex3({self.shape[0]}, {self.shape[1]}, {self.shape[2]}, h={self.h})"

    def __eq__(self, other):
        return isinstance(other, CubicalComplex3) and self.shape == other.shape and self.h == other.h

    def __hash__(self):
        return hash((self.shape, self.h))

    # -- indexing ---------------------------------------------------------

    def ncells(self, k):
        _check_degree(k)
        return self.V * len(SUBSETS[k])

    def vertex_index(self, x):
        nx, ny, nz = self.shape
        return ((x[0] % nx) * ny + (x[1] % ny)) * nz + (x[2] % nz)

    def vertex_coords(self, v):
        nx, ny, nz = self.shape
        return (v // (ny * nz), (v // nz) % ny, v % nz)

    def cell_index(self, x, S):
        S = tuple(sorted(S))
        return self.vertex_index(x) * len(SUBSETS[len(S)]) + _RANK[S]

    def cell_coords(self, k, idx):
        m = len(SUBSETS[k])
        return self.vertex_coords(idx // m), SUBSETS[k][idx % m]

    @cached_property
    def _coords(self):
        v = np.arange(self.V)
        return np.stack(self.vertex_coords(v), axis=1)

    def _shifted(self, offset):
        """Vertex index of ``x + offset`` for every vertex ``x``."""
        c = self._coords + np.asarray(offset)
        nx, ny, nz = self.shape
        return ((c[:, 0] % nx) * ny + (c[:, 1] % ny)) * nz + (c[:, 2] % nz)

    @staticmethod
    def _unit(S):
        off = np.zeros(3, dtype=np.int64)
        for mu in S:
            off[mu] += 1
        return off

    # -- operators --------------------------------------------------------

    @cached_property
    def coboundary_matrices(self):
        """Sparse real ``d_k`` for k = 0, 1, 2, shape ``(N_{k+1}, N_k)``."""
        mats = {}
        v = np.arange(self.V)
        for k in range(3):
            rows, cols, vals = [], [], []
            m_out, m_in = len(SUBSETS[k + 1]), len(SUBSETS[k])
            for S in SUBSETS[k + 1]:
                out = v * m_out + _RANK[S]
                for i, mu in enumerate(S):
                    face = tuple(s for s in S if s != mu)
                    sgn = (-1) ** i / self.h
                    far = self._shifted(self._unit((mu,)))
                    rows += [out, out]
                    cols += [far * m_in + _RANK[face], v * m_in + _RANK[face]]
                    vals += [np.full(self.V, sgn), np.full(self.V, -sgn)]
            mats[k] = sp.csr_matrix(
                (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                shape=(self.ncells(k + 1), self.ncells(k)),
            )
        return mats

    @cached_property
    def hodge_tables(self):
        """For each k: (target index of every k-cell, Levi-Civita sign)."""
        tables = {}
        v = np.arange(self.V)
        for k in range(4):
            m_in, m_out = len(SUBSETS[k]), len(SUBSETS[3 - k])
            target = np.empty(self.ncells(k), dtype=np.int64)
            sign = np.empty(self.ncells(k))
            for S in SUBSETS[k]:
                comp = tuple(i for i in range(3) if i not in S)
                src = v * m_in + _RANK[S]
                target[src] = v * m_out + _RANK[comp]
                sign[src] = perm_sign(S + comp)
            tables[k] = (target, sign)
        return tables

    def cup_table(self, j, k):
        """Index table of the front-face cup product of degrees ``(j, k)``.

        Returns int64 arrays ``(k_out, k_a, k_b)`` and float ``sign`` with
        ``(a cup b)[k_out] += sign * a[k_a] @ b[k_b]``.
        """
        if j + k > 3:
            raise DegreeError(f"cup of degrees {j}+{k} exceeds 3")
        key = (j, k)
        if key not in self._cup_tables:
            v = np.arange(self.V)
            outs, ia, ib, sg = [], [], [], []
            m_out, m_a, m_b = len(SUBSETS[j + k]), len(SUBSETS[j]), len(SUBSETS[k])
            for S in SUBSETS[j + k]:
                for P in combinations(S, j):
                    Q = tuple(s for s in S if s not in P)
                    outs.append(v * m_out + _RANK[S])
                    ia.append(v * m_a + _RANK[P])
                    ib.append(self._shifted(self._unit(P)) * m_b + _RANK[Q])
                    sg.append(np.full(self.V, float(perm_sign(P + Q))))
            k_out = np.concatenate(outs)
            order = np.argsort(k_out, kind="stable")
            table = tuple(
                np.ascontiguousarray(arr[order])
                for arr in (k_out, np.concatenate(ia), np.concatenate(ib))
            ) + (np.ascontiguousarray(np.concatenate(sg)[order]),)
            self._cup_tables[key] = table
        return self._cup_tables[key]

    # -- convenience constructors ----------------------------------------

    def zeros(self, k, n=2):
        return AlgCochain(self, k, np.zeros((self.ncells(k), n, n), dtype=np.complex128))

    def random(self, k, n=2, seed=None, scale=1.0):
        """Random su(n)-valued k-cochain."""
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        return AlgCochain(self, k, lie.random_su(n, rng, size=self.ncells(k), scale=scale))

    def random_diagonal(self, k, n=2, seed=None, scale=1.0):
        """Random cochain with values in the diagonal (commuting) subalgebra."""
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        return AlgCochain(self, k, lie.diagonal_su(n, rng, size=self.ncells(k), scale=scale))

    def constant(self, k, M):
        M = np.asarray(M, dtype=np.complex128)
        return AlgCochain(self, k, np.broadcast_to(M, (self.ncells(k),) + M.shape).copy())

    def from_function(self, k, fn, n=2):
        """Build a cochain from ``fn(x, S) -> n x n`` evaluated on every cell."""
        vals = np.empty((self.ncells(k), n, n), dtype=np.complex128)
        for idx in range(self.ncells(k)):
            x, S = self.cell_coords(k, idx)
            vals[idx] = fn(np.asarray(x), S)
        return AlgCochain(self, k, vals)


def build_torus(nx, ny, nz, h=1.0):
    return CubicalComplex3(nx, ny, nz, h)


def _check_degree(k):
    if k not in (0, 1, 2, 3):
        raise DegreeError(f"degree must be 0..3, got {k}")


class AlgCochain:
    """Matrix-valued k-cochain: one complex n-by-n matrix per k-cell.

    Values are stored read-only with shape ``(ncells, n, n)``.  Field data
    (connections, gauge parameters, samples) are su(n)-valued; products of
    cochains are general n-by-n matrices, see ``in_su``.
    """

    __array_priority__ = 100

    def __init__(self, cx, degree, values):
        _check_degree(degree)
        values = np.array(values, dtype=np.complex128, copy=True)
        if values.ndim != 3 or values.shape[0] != cx.ncells(degree) or values.shape[1] != values.shape[2]:
            raise ValueError(
                f"values of shape {values.shape} do not fit a {degree}-cochain on {cx}"
            )
        values.flags.writeable = False
        self.cx = cx
        self.degree = degree
        self.values = values

    @property
    def n(self):
        return self.values.shape[1]

    def __repr__(self):
        return f"AlgCochain(degree={self.degree}, n={self.n}, cells={self.values.shape[0]})"

    def _like(self, values, degree=None):
        return AlgCochain(self.cx, self.degree if degree is None else degree, values)

    def _check_same(self, other):
        if not isinstance(other, AlgCochain):
            return NotImplemented
        if other.degree != self.degree:
            raise DegreeError(f"degree mismatch {self.degree} vs {other.degree}")
        if other.cx != self.cx:
            raise ValueError("cochains live on different complexes")
        return True

    def __add__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return self._like(self.values + other.values)

    def __sub__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return self._like(self.values - other.values)

    def __neg__(self):
        return self._like(-self.values)

    def __mul__(self, s):
        if isinstance(s, AlgCochain):
            return NotImplemented
        return self._like(self.values * s)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self._like(self.values / s)

    def norm(self):
        return float(np.sqrt(inner(self, self)))

    def max_abs(self):
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def su_residual(self):
        return lie.su_residual(self.values)

    def in_su(self, tol=lie.SU_TOL):
        return self.su_residual() <= tol

    def project_su(self):
        return self._like(lie.project_su(self.values))

    def flat(self):
        """Values as a flat complex vector (cell-major, row-major matrices)."""
        return self.values.reshape(-1)

    @classmethod
    def from_flat(cls, cx, degree, vec, n):
        return cls(cx, degree, np.asarray(vec).reshape(cx.ncells(degree), n, n))

    def allclose(self, other, atol=1e-12):
        return self.degree == other.degree and np.allclose(self.values, other.values, rtol=0, atol=atol)


# -- cochain operations ---------------------------------------------------


def coboundary(c):
    if c.degree >= 3:
        raise DegreeError("coboundary of a 3-cochain leaves the complex")
    D = c.cx.coboundary_matrices[c.degree]
    n = c.n
    out = D @ c.values.reshape(c.values.shape[0], n * n)
    return AlgCochain(c.cx, c.degree + 1, out.reshape(-1, n, n))


def coboundary_T(c):
    """Transpose of the coboundary into degree ``k - 1``."""
    if c.degree == 0:
        raise DegreeError("no transpose coboundary below degree 0")
    D = c.cx.coboundary_matrices[c.degree - 1]
    n = c.n
    out = D.T @ c.values.reshape(c.values.shape[0], n * n)
    return AlgCochain(c.cx, c.degree - 1, out.reshape(-1, n, n))


def hodge(c):
    """Hodge star ``k -> 3 - k``: a signed permutation of cell values."""
    target, sign = c.cx.hodge_tables[c.degree]
    out = np.empty_like(c.values)
    out[target] = sign[:, None, None] * c.values
    return AlgCochain(c.cx, 3 - c.degree, out)


def cup(a, b):
    """Front-face cubical cup product with matrix multiplication.

    ``(a cup b)(x, S) = sum_{S = P u Q} sign(P, Q) a(x, P) b(x + e_P, Q)``.
    Associative, and satisfies the graded Leibniz rule exactly.
    """
    if a.cx != b.cx:
        raise ValueError("cochains live on different complexes")
    j, k = a.degree, b.degree
    k_out, k_a, k_b, sign = a.cx.cup_table(j, k)
    out = np.zeros((a.cx.ncells(j + k), a.n, a.n), dtype=np.complex128)
    kernels.gemm_scatter(out, a.values, b.values, k_out, k_a, k_b, sign)
    return AlgCochain(a.cx, j + k, out)


def bracket_cup(a, b):
    """Graded commutator ``a cup b - (-1)^{jk} b cup a``."""
    j, k = a.degree, b.degree
    if j + k > 3:
        raise DegreeError(f"bracket of degrees {j}+{k} exceeds 3")
    ab = cup(a, b)
    ba = cup(b, a)
    return ab - ba if (j * k) % 2 == 0 else ab + ba


def cup_adjoint_right(a, y, k):
    """Adjoint of ``b -> a cup b`` (b of degree ``k``) applied to ``y``."""
    j = a.degree
    k_out, k_a, k_b, sign = a.cx.cup_table(j, k)
    out = np.zeros((a.cx.ncells(k), a.n, a.n), dtype=np.complex128)
    kernels.gemm_scatter(out, a.values, y.values, k_b, k_a, k_out, sign, conj_x=True)
    return AlgCochain(a.cx, k, out)


def cup_adjoint_left(b, y, j):
    """Adjoint of ``a -> a cup b`` (a of degree ``j``) applied to ``y``."""
    k = b.degree
    k_out, k_a, k_b, sign = b.cx.cup_table(j, k)
    out = np.zeros((b.cx.ncells(j), b.n, b.n), dtype=np.complex128)
    kernels.gemm_scatter(out, y.values, b.values, k_a, k_out, k_b, sign, conj_y=True)
    return AlgCochain(b.cx, j, out)


def inner(a, b):
    """``h^3 * sum_cells Re tr(a_c^H b_c)``; equals ``-h^3 sum tr(a b)`` on su(n)."""
    if a.degree != b.degree:
        raise DegreeError(f"inner product of degrees {a.degree} and {b.degree}")
    return a.cx.h ** 3 * float(np.real(np.vdot(a.values, b.values)))


def integrate(mu):
    if mu.degree != 3:
        raise DegreeError("integrate expects a 3-cochain")
    return mu.cx.h ** 3 * mu.values.sum(axis=0)


def pair(mu, xi):
    """Dual pairing of a charge density with a gauge parameter.

    ``h^3 * sum_cubes Re tr(mu_c^H xi_{base vertex of c})``, i.e. the
    sign-flipped trace pairing; ``pair(hodge(z), xi) == inner(z, xi)``.
    """
    if mu.degree != 3 or xi.degree != 0:
        raise DegreeError("pair expects a 3-cochain and a 0-cochain")
    # 3-cell index equals its base-vertex index
    return mu.cx.h ** 3 * float(np.real(np.vdot(mu.values, xi.values)))


def bracket_adjoint(a, y, k):
    """Adjoint of ``c -> [a cup c]`` (c of degree ``k``) applied to ``y``."""
    right = cup_adjoint_right(a, y, k)
    left = cup_adjoint_left(a, y, k)
    return right - left if (a.degree * k) % 2 == 0 else right + left
