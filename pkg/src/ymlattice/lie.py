"""su(n) matrix algebra: brackets, the positive inner product, exponential, sampling."""

import numpy as np
from scipy.linalg import expm as _expm

SU_TOL = 1e-12
GROUP_TOL = 1e-10


def commutator(X, Y):
    return X @ Y - Y @ X


def inner_su(X, Y):
    """Real inner product ``Re tr(X^H Y)``; equals ``-tr(XY)`` on su(n)."""
    return float(np.real(np.vdot(X, Y)))


def project_su(M):
    """Orthogonal projection onto anti-Hermitian traceless matrices.

    Works on a single matrix or any stack ``(..., n, n)``.
    """
    M = np.asarray(M, dtype=np.complex128)
    ah = 0.5 * (M - np.conj(np.swapaxes(M, -1, -2)))
    n = M.shape[-1]
    tr = np.trace(ah, axis1=-2, axis2=-1) / n
    return ah - tr[..., None, None] * np.eye(n)


def su_residual(M):
    """Max-norm distance from su(n)."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.abs(M - project_su(M))))


def is_su(M, tol=SU_TOL):
    return su_residual(M) <= tol


def expm(X):
    return _expm(np.asarray(X, dtype=np.complex128))


def is_group_element(U, tol=GROUP_TOL):
    n = U.shape[0]
    unitary = np.max(np.abs(U.conj().T @ U - np.eye(n))) <= tol
    return bool(unitary and abs(np.linalg.det(U) - 1.0) <= tol)


def random_su(n, seed=None, size=None, scale=1.0):
    """Sample su(n) element(s) by projecting a complex Gaussian matrix.

    ``seed`` may be an int or a ``numpy.random.Generator``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    shape = (n, n) if size is None else (size, n, n)
    M = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return scale * project_su(M)


def su2_basis():
    """``{i sigma_a / 2}``; orthogonal with squared norm 1/2 under ``inner_su``."""
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    return [0.5j * s for s in (s1, s2, s3)]


def diagonal_su(n, seed=None, size=None, scale=1.0):
    """Random elements of the Cartan (diagonal) subalgebra of su(n)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    shape = (n,) if size is None else (size, n)
    d = rng.standard_normal(shape)
    d = d - d.mean(axis=-1, keepdims=True)
    out = np.zeros(shape + (n,), dtype=np.complex128)
    idx = np.arange(n)
    out[..., idx, idx] = 1j * scale * d
    return out


def su_basis(n):
    """Orthonormal basis of su(n) under ``inner_su`` (``n^2 - 1`` matrices)."""
    cands = []
    for i in range(n):
        for j in range(n):
            E = np.zeros((n, n), dtype=np.complex128)
            E[i, j] = 1.0
            cands.append(project_su(E))
            cands.append(project_su(1j * E))
    basis = []
    for M in cands:
        for B in basis:
            M = M - inner_su(B, M) * B
        nrm = np.sqrt(inner_su(M, M))
        if nrm > 1e-10:
            basis.append(M / nrm)
    return basis
