"""Structure-preserving time integration of the two Hamiltonian systems:
leapfrog for ``(A, p)`` and implicit midpoint for ``(E, B)`` at fixed ``A``."""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import lie
from .elliptic import cov_d_star_su
from .errors import ConvergenceError, NumericalBlowup
from .gauge import PhasePointT, cov_d, cov_d_matrix, cov_d_star, curvature
from .lattice import AlgCochain, integrate
from .symplectic import hamiltonian_R, moment_T

COLUMNS = ("step", "time", "energy", "gauss_e", "gauss_b", "charge_norm", "bianchi_defect")
CONVENTIONS = ("intro", "body")


@dataclass
class TrajectoryRecord:
    rows: list = field(default_factory=list)
    states: list = field(default_factory=list, repr=False)

    def append(self, *values):
        if self.rows and values[0] <= self.rows[-1][0]:
            raise ValueError("step index must increase")
        self.rows.append(tuple(values))

    def column(self, name):
        i = COLUMNS.index(name)
        return np.array([r[i] for r in self.rows])

    def to_csv(self, fh):
        fh.write(",".join(COLUMNS) + "\n")
        for r in self.rows:
            fh.write(f"{r[0]:d}," + ",".join(f"{x:.17g}" for x in r[1:]) + "\n")

    def energy_drift(self):
        e = self.column("energy")
        return float(np.abs(e - e[0]).max() / abs(e[0])) if e[0] else float(np.abs(e).max())


def _check_finite(step, *cs):
    for c in cs:
        if not np.all(np.isfinite(c.values)):
            raise NumericalBlowup(step)


def force_R(A):
    """``-d_A^* F_A``, the exact negative gradient of ``1/2 (F_A, F_A)`` in su(n)."""
    return -cov_d_star_su(A, curvature(A))


def _charge_norm(pt):
    return float(np.linalg.norm(integrate(moment_T(pt))))


def _record_R(rec, step, t, A, p, energy):
    F = curvature(A)
    pt = PhasePointT(A, -p, F)
    bianchi = cov_d(A, F).norm()
    rec.append(step, t, energy, cov_d_star(A, p).norm(), bianchi, _charge_norm(pt), bianchi)


def evolve_R(A0, p0, dt, steps, record_every=1, keep_states=False):
    """Leapfrog (velocity Verlet) for ``A' = p``, ``p' = -d_A^* F_A``.

    Returns ``(A, p, record)``.  Negative ``dt`` integrates backwards, and a
    forward run followed by a backward run returns the initial state.
    """
    if dt == 0 or steps < 0:
        raise ValueError("need dt != 0 and steps >= 0")
    A, p = A0, p0
    rec = TrajectoryRecord()
    _record_R(rec, 0, 0.0, A, p, hamiltonian_R(A, p))
    if keep_states:
        rec.states.append((A, p))
    f = force_R(A)
    for n in range(1, steps + 1):
        p = p + (0.5 * dt) * f
        A = A + dt * p
        f = force_R(A)
        p = p + (0.5 * dt) * f
        _check_finite(n, A, p)
        if n % record_every == 0 or n == steps:
            _record_R(rec, n, n * dt, A, p, hamiltonian_R(A, p))
            if keep_states:
                rec.states.append((A, p))
    return A, p, rec


class _SuCoords:
    """Orthonormal real coordinates of su(n)-valued k-cochains."""

    def __init__(self, cx, n, k):
        self.cx, self.n, self.k = cx, n, k
        self.basis = np.array(lie.su_basis(n))
        m = len(self.basis)
        N = cx.ncells(k)
        cells = np.repeat(np.arange(N), m * n * n)
        a = np.tile(np.repeat(np.arange(m), n * n), N)
        ij = np.tile(np.arange(n * n), N * m)
        vals = np.tile(self.basis.reshape(m, n * n).ravel(), N)
        self.embed = sp.csr_matrix((vals, (cells * n * n + ij, cells * m + a)), shape=(N * n * n, N * m))

    def coords(self, c):
        return np.real(self.embed.conj().T @ c.flat())

    def cochain(self, z):
        return AlgCochain.from_flat(self.cx, self.k, self.embed @ z, self.n)


def su_cov_d_matrix(A, k):
    """Real matrix of ``P d_A`` from su(n) k-cochains to su(n) (k+1)-cochains."""
    c0 = _SuCoords(A.cx, A.n, k)
    c1 = _SuCoords(A.cx, A.n, k + 1)
    D = c1.embed.conj().T @ cov_d_matrix(A, k) @ c0.embed
    D = sp.csr_matrix(D)
    D.eliminate_zeros()
    return sp.csr_matrix(D.real)


def energy_T(pt):
    """``1/2 (|d_A E|^2 + |d_A^* B|^2)`` with the su(n)-compressed operators."""
    from .elliptic import cov_d_su

    h3 = pt.A.cx.h ** 3
    return 0.5 * h3 * (cov_d_su(pt.A, pt.E).norm() ** 2 + cov_d_star_su(pt.A, pt.B).norm() ** 2)


def _record_T(rec, step, t, pt):
    rec.append(
        step,
        t,
        energy_T(pt),
        cov_d_star(pt.A, pt.E).norm(),
        cov_d(pt.A, pt.B).norm(),
        _charge_norm(pt),
        cov_d(pt.A, curvature(pt.A)).norm(),
    )


def evolve_T(pt0: PhasePointT, dt, steps, convention="intro", record_every=1):
    """Implicit midpoint for the linear field equations at frozen ``A``.

    ``intro``: ``E' = -d_A^* B``, ``B' = d_A E``; ``body`` flips both signs.
    The operators are the su(n)-compressed ones, so the generator is skew
    and the quadratic energy is conserved to rounding.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    if dt == 0 or steps < 0:
        raise ValueError("need dt != 0 and steps >= 0")
    A = pt0.A
    ce = _SuCoords(A.cx, A.n, 1)
    cb = _SuCoords(A.cx, A.n, 2)
    D = su_cov_d_matrix(A, 1)
    s = 1.0 if convention == "intro" else -1.0
    L = s * sp.bmat([[None, -D.T], [D, None]], format="csc")
    I = sp.identity(L.shape[0], format="csc")
    try:
        lu = spla.splu((I - 0.5 * dt * L).tocsc())
    except RuntimeError as exc:
        raise ConvergenceError(None, f"midpoint factorization failed: {exc}") from exc
    rhs_op = (I + 0.5 * dt * L).tocsr()
    ne = ce.embed.shape[1]
    z = np.concatenate([ce.coords(pt0.E), cb.coords(pt0.B)])
    rec = TrajectoryRecord()
    pt = PhasePointT(A, pt0.E.project_su(), pt0.B.project_su())
    _record_T(rec, 0, 0.0, pt)
    for n in range(1, steps + 1):
        z = lu.solve(rhs_op @ z)
        if not np.all(np.isfinite(z)):
            raise NumericalBlowup(n)
        if n % record_every == 0 or n == steps:
            pt = PhasePointT(A, ce.cochain(z[:ne]), cb.cochain(z[ne:]))
            _record_T(rec, n, n * dt, pt)
    return PhasePointT(A, ce.cochain(z[:ne]), cb.cochain(z[ne:])), rec


def maxwell_image_check(rec: TrajectoryRecord, dt):
    """Field equations along the image ``(E, B) = (-p, F_A)`` of an R-trajectory.

    Uses forward differences of stored states (``keep_states=True``, every
    step), so the time-discretization part is first order in ``dt``.
    Returns ``(max |E' - d_A^* B|, max |B' + d_A E|, max |d_A^* E|)``.
    """
    if len(rec.states) < 2:
        raise ValueError("trajectory has no stored states")
    res_e = res_b = gauss = 0.0
    for (A0, p0), (A1, p1) in zip(rec.states[:-1], rec.states[1:]):
        E0, E1 = -p0, -p1
        B0, B1 = curvature(A0), curvature(A1)
        res_e = max(res_e, ((E1 - E0) / dt - cov_d_star_su(A0, B0)).norm())
        res_b = max(res_b, ((B1 - B0) / dt + cov_d(A0, E0)).norm())
        gauss = max(gauss, cov_d_star(A0, E0).norm())
    return res_e, res_b, gauss
