"""Compare the compiled and pure-Python gather-multiply-scatter kernels.

    python benchmarks/bench_kernels.py [--sizes 4 8 12] [--n 2] [--repeat 5]

Times the cup product (all degree pairs) and one covariant Laplacian
application per lattice size, and checks both backends agree bit-for-bit
up to summation order.
"""

import argparse
import time

import numpy as np

from ymlattice import kernels
from ymlattice.elliptic import laplacian
from ymlattice.lattice import build_torus


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def cup_all(cx, fields, impl):
    for (j, k), (a, b) in fields.items():
        k_out, k_a, k_b, sign = cx.cup_table(j, k)
        out = np.zeros((cx.ncells(j + k), a.n, a.n), dtype=np.complex128)
        impl(out, a.values, b.values, k_out, k_a, k_b, sign)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 12])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    print(f"compiled backend available: {kernels.BACKEND == 'cython'}")
    if kernels.BACKEND != "cython":
        print("build the extension (pip install --no-build-isolation -e .) to compare")
    print(f"{'N':>4} {'cells':>8} {'python cup':>12} {'compiled cup':>13} {'speedup':>8} {'max diff':>10}")
    for L in args.sizes:
        cx = build_torus(L, L, L)
        rng = np.random.default_rng(L)
        fields = {
            (j, k): (cx.random(j, args.n, seed=rng), cx.random(k, args.n, seed=rng))
            for j in range(4)
            for k in range(4 - j)
        }
        tp = _time(lambda: cup_all(cx, fields, kernels.python_gemm_scatter), args.repeat)
        tc = _time(lambda: cup_all(cx, fields, kernels.gemm_scatter), args.repeat)
        # agreement on one representative product
        a, b = fields[(1, 1)]
        k_out, k_a, k_b, sign = cx.cup_table(1, 1)
        o1 = np.zeros((cx.ncells(2), args.n, args.n), dtype=np.complex128)
        o2 = np.zeros_like(o1)
        kernels.python_gemm_scatter(o1, a.values, b.values, k_out, k_a, k_b, sign)
        kernels.gemm_scatter(o2, a.values, b.values, k_out, k_a, k_b, sign)
        diff = np.abs(o1 - o2).max()
        print(f"{L:>4} {cx.ncells(1):>8} {tp * 1e3:>10.2f}ms {tc * 1e3:>11.2f}ms {tp / tc:>7.1f}x {diff:>10.1e}")

    cx = build_torus(args.sizes[0], args.sizes[0], args.sizes[0])
    A = cx.random(1, args.n, seed=1, scale=0.5)
    c = cx.random(1, args.n, seed=2)
    t = _time(lambda: laplacian(A, c), args.repeat)
    print(f"covariant Laplacian on 1-cochains, N = {args.sizes[0]}: {t * 1e3:.2f} ms ({kernels.BACKEND})")


if __name__ == "__main__":
    main()
