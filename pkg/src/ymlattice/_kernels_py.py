"""Pure-numpy fallback for the gather/matmul/scatter kernels.

Every cochain product on the lattice reduces to the same primitive:

    out[k_out[t]] += sign[t] * op_x(X[k_x[t]]) @ op_y(Y[k_y[t]])

where ``op`` is either the identity or the conjugate transpose.
"""

import numpy as np


def gemm_scatter(out, X, Y, k_out, k_x, k_y, sign, conj_x=False, conj_y=False):
    """Accumulate batched n-by-n products into ``out`` (modified in place)."""
    if len(k_out) == 0:
        return out
    xs = X[k_x]
    ys = Y[k_y]
    if conj_x:
        xs = np.conj(np.swapaxes(xs, 1, 2))
    if conj_y:
        ys = np.conj(np.swapaxes(ys, 1, 2))
    prod = np.matmul(xs, ys)
    prod *= sign[:, None, None]
    # k_out is sorted by construction, but np.add.at keeps it order-independent
    np.add.at(out, k_out, prod)
    return out
