"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback.  Set ``YMLATTICE_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py.gemm_scatter

if not os.environ.get("YMLATTICE_PURE_PYTHON"):
    try:
        from . import _kernels as _ext
    except ImportError:  # extension not built
        _ext = None
    if _ext is not None:
        BACKEND = "cython"
        _impl = _ext.gemm_scatter


def gemm_scatter(out, X, Y, k_out, k_x, k_y, sign, conj_x=False, conj_y=False):
    """Dispatch to the active backend. ``out`` is updated in place and returned."""
    if _impl is _kernels_py.gemm_scatter:
        return _impl(out, X, Y, k_out, k_x, k_y, sign, conj_x, conj_y)
    X = np.ascontiguousarray(X, dtype=np.complex128)
    Y = np.ascontiguousarray(Y, dtype=np.complex128)
    _impl(out, X, Y, k_out, k_x, k_y, sign, conj_x, conj_y)
    return out


def python_gemm_scatter(*args, **kwargs):
    return _kernels_py.gemm_scatter(*args, **kwargs)
