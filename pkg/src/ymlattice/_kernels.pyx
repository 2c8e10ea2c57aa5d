# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled gather/matmul/scatter kernel; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def gemm_scatter(double complex[:, :, ::1] out,
                 const double complex[:, :, ::1] X,
                 const double complex[:, :, ::1] Y,
                 const cnp.int64_t[::1] k_out,
                 const cnp.int64_t[::1] k_x,
                 const cnp.int64_t[::1] k_y,
                 const double[::1] sign,
                 bint conj_x=False, bint conj_y=False):
    cdef Py_ssize_t nterm = k_out.shape[0]
    cdef Py_ssize_t n = out.shape[1]
    cdef Py_ssize_t t, i, j, l, o, a, b
    cdef double s
    cdef double complex acc, xv, yv
    with nogil:
        for t in range(nterm):
            o = k_out[t]
            a = k_x[t]
            b = k_y[t]
            s = sign[t]
            for i in range(n):
                for j in range(n):
                    acc = 0
                    for l in range(n):
                        if conj_x:
                            xv = X[a, l, i].conjugate()
                        else:
                            xv = X[a, i, l]
                        if conj_y:
                            yv = Y[b, j, l].conjugate()
                        else:
                            yv = Y[b, l, j]
                        acc = acc + xv * yv
                    out[o, i, j] = out[o, i, j] + s * acc
    return np.asarray(out)
