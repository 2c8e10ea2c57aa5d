import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import cells, shift
from ymlattice import DegenerateLattice, DegreeError, kernels
from ymlattice.lattice import (
    AlgCochain,
    SUBSETS,
    bracket_adjoint,
    bracket_cup,
    build_torus,
    coboundary,
    coboundary_T,
    cup,
    cup_adjoint_left,
    cup_adjoint_right,
    hodge,
    inner,
    integrate,
    pair,
)

seeds = st.integers(0, 2**32 - 1)


def test_cell_counts():
    cx = build_torus(2, 3, 4)
    assert [cx.ncells(k) for k in range(4)] == [24, 72, 72, 24]
    assert [len(SUBSETS[k]) for k in range(4)] == [1, 3, 3, 1]


def test_cell_index_roundtrip():
    cx = build_torus(3, 2, 4)
    for k in range(4):
        for idx, x, S in cells(cx, k):
            assert cx.cell_index(x, S) == idx


def test_degenerate_axis_rejected():
    with pytest.raises(DegenerateLattice):
        build_torus(1, 3, 3)


def test_values_are_read_only(cx2):
    c = cx2.random(1, seed=0)
    with pytest.raises(ValueError):
        c.values[0, 0, 0] = 1.0


def test_degree_mismatch(cx2):
    with pytest.raises(DegreeError):
        cx2.random(1, seed=0) + cx2.random(2, seed=0)
    with pytest.raises(DegreeError):
        inner(cx2.random(1, seed=0), cx2.random(2, seed=0))
    with pytest.raises(DegreeError):
        cup(cx2.random(2, seed=0), cx2.random(2, seed=0))


# -- coboundary: explicit gradient, circulation and divergence ---------------


def test_coboundary_gradient_oracle():
    cx = build_torus(3, 4, 2, h=0.5)
    f = cx.random(0, seed=1)
    df = coboundary(f)
    for idx, x, (i,) in cells(cx, 1):
        want = (f.values[cx.cell_index(shift(cx, x, [i]), ())] - f.values[cx.cell_index(x, ())]) / cx.h
        np.testing.assert_allclose(df.values[idx], want, atol=1e-14)


def test_coboundary_circulation_oracle():
    cx = build_torus(3, 4, 2)
    A = cx.random(1, seed=2)

    def a(x, i):
        return A.values[cx.cell_index(x, (i,))]

    dA = coboundary(A)
    for idx, x, (i, j) in cells(cx, 2):
        want = a(shift(cx, x, [i]), j) - a(x, j) - a(shift(cx, x, [j]), i) + a(x, i)
        np.testing.assert_allclose(dA.values[idx], want, atol=1e-14)


def test_coboundary_divergence_oracle():
    cx = build_torus(3, 4, 2)
    B = cx.random(2, seed=3)

    def b(x, S):
        return B.values[cx.cell_index(x, S)]

    dB = coboundary(B)
    for idx, x, _ in cells(cx, 3):
        want = (
            b(shift(cx, x, [0]), (1, 2)) - b(x, (1, 2))
            - b(shift(cx, x, [1]), (0, 2)) + b(x, (0, 2))
            + b(shift(cx, x, [2]), (0, 1)) - b(x, (0, 1))
        )
        np.testing.assert_allclose(dB.values[idx], want, atol=1e-14)


@pytest.mark.parametrize("L", [2, 3, 4])
@pytest.mark.parametrize("k", [0, 1])
def test_dd_is_zero(L, k):
    cx = build_torus(L, L, L)
    D = cx.coboundary_matrices
    prod = D[k + 1] @ D[k]
    assert prod.nnz == 0 or abs(prod).max() == 0.0


def test_coboundary_transpose(cx2):
    for k in range(3):
        c, y = cx2.random(k, seed=k), cx2.random(k + 1, seed=10 + k)
        assert inner(coboundary(c), y) == pytest.approx(inner(c, coboundary_T(y)), abs=1e-12)


# -- hodge -------------------------------------------------------------------


def test_hodge_oracle_on_one_cochains(cx2):
    a = cx2.random(1, seed=4)
    s = hodge(a)
    for idx, x, (i,) in cells(cx2, 1):
        comp = tuple(j for j in range(3) if j != i)
        sign = -1.0 if i == 1 else 1.0
        np.testing.assert_array_equal(s.values[cx2.cell_index(x, comp)], sign * a.values[idx])


@pytest.mark.parametrize("k", range(4))
def test_hodge_isometry_and_involution(cx3, k):
    a, b = cx3.random(k, seed=k), cx3.random(k, seed=k + 7)
    assert inner(hodge(a), hodge(b)) == pytest.approx(inner(a, b), abs=1e-12)
    np.testing.assert_array_equal(hodge(hodge(a)).values, a.values)


# -- cup product ---------------------------------------------------------------


def test_cup_one_one_oracle():
    cx = build_torus(3, 2, 4)
    a, b = cx.random(1, seed=5), cx.random(1, seed=6)
    ab = cup(a, b)
    for idx, x, (i, j) in cells(cx, 2):
        want = a.values[cx.cell_index(x, (i,))] @ b.values[cx.cell_index(shift(cx, x, [i]), (j,))] - a.values[
            cx.cell_index(x, (j,))
        ] @ b.values[cx.cell_index(shift(cx, x, [j]), (i,))]
        np.testing.assert_allclose(ab.values[idx], want, atol=1e-14)


def test_cup_two_one_oracle():
    cx = build_torus(3, 2, 4)
    a, c = cx.random(2, seed=7), cx.random(1, seed=8)
    ac = cup(a, c)

    def A(x, S):
        return a.values[cx.cell_index(x, S)]

    def C(x, i):
        return c.values[cx.cell_index(x, (i,))]

    for idx, x, _ in cells(cx, 3):
        want = (
            A(x, (0, 1)) @ C(shift(cx, x, [0, 1]), 2)
            - A(x, (0, 2)) @ C(shift(cx, x, [0, 2]), 1)
            + A(x, (1, 2)) @ C(shift(cx, x, [1, 2]), 0)
        )
        np.testing.assert_allclose(ac.values[idx], want, atol=1e-14)


def test_cup_with_zero_cochains(cx2):
    f, b = cx2.random(0, seed=9), cx2.random(2, seed=10)
    fb, bf = cup(f, b), cup(b, f)
    for idx, x, S in cells(cx2, 2):
        np.testing.assert_allclose(fb.values[idx], f.values[cx2.cell_index(x, ())] @ b.values[idx], atol=1e-14)
        far = cx2.cell_index(shift(cx2, x, S), ())
        np.testing.assert_allclose(bf.values[idx], b.values[idx] @ f.values[far], atol=1e-14)


@given(seeds)
def test_cup_leibniz(seed):
    cx = build_torus(2, 3, 2)
    rng = np.random.default_rng(seed)
    for j in range(3):
        for k in range(3 - j):
            a, b = cx.random(j, seed=rng), cx.random(k, seed=rng)
            lhs = coboundary(cup(a, b))
            rhs = cup(coboundary(a), b) + (-1) ** j * cup(a, coboundary(b))
            assert (lhs - rhs).max_abs() <= 1e-13 * (1 + a.max_abs() * b.max_abs())


@given(seeds)
def test_cup_associative(seed):
    cx = build_torus(2, 2, 3)
    rng = np.random.default_rng(seed)
    a, b, c = cx.random(1, seed=rng), cx.random(1, seed=rng), cx.random(1, seed=rng)
    assert (cup(cup(a, b), c) - cup(a, cup(b, c))).max_abs() <= 1e-13


@given(seeds)
def test_graded_jacobi(seed):
    cx = build_torus(2, 2, 2)
    rng = np.random.default_rng(seed)
    a, b, c = cx.random(1, seed=rng), cx.random(1, seed=rng), cx.random(1, seed=rng)
    # [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]] for degree-1 entries
    lhs = bracket_cup(a, bracket_cup(b, c))
    rhs = bracket_cup(bracket_cup(a, b), c) - bracket_cup(b, bracket_cup(a, c))
    assert (lhs - rhs).max_abs() <= 1e-12


@pytest.mark.parametrize("j,k", [(0, 1), (1, 1), (1, 2), (2, 1), (0, 3)])
def test_cup_adjoints(cx2, j, k):
    a, b = cx2.random(j, seed=1), cx2.random(k, seed=2)
    y = AlgCochain(cx2, j + k, cx2.random(j + k, seed=3).values + 0.3j * cx2.random(j + k, seed=4).values)
    assert inner(cup(a, b), y) == pytest.approx(inner(b, cup_adjoint_right(a, y, k)), abs=1e-12)
    assert inner(cup(a, b), y) == pytest.approx(inner(a, cup_adjoint_left(b, y, j)), abs=1e-12)
    if j + k <= 3:
        assert inner(bracket_cup(a, b), y) == pytest.approx(inner(b, bracket_adjoint(a, y, k)), abs=1e-12)


def test_integrate_and_pair(cx2):
    z = cx2.random(0, seed=1)
    xi = cx2.random(0, seed=2)
    assert pair(hodge(z), xi) == pytest.approx(inner(z, xi), abs=1e-14)
    np.testing.assert_allclose(integrate(hodge(z)), z.values.sum(axis=0) * cx2.h ** 3)


def test_inner_is_minus_trace_on_su(cx2):
    a, b = cx2.random(1, seed=1), cx2.random(1, seed=2)
    tr = -np.einsum("cij,cji->", a.values, b.values).real
    assert inner(a, b) == pytest.approx(tr, abs=1e-12)


def test_random_is_su(cx2):
    assert cx2.random(2, n=3, seed=1).in_su()
    assert not cup(cx2.random(1, seed=1), cx2.random(1, seed=2)).in_su()


# -- backends ------------------------------------------------------------------


def test_backends_agree(cx3):
    a, b = cx3.random(1, seed=1), cx3.random(2, seed=2)
    k_out, k_a, k_b, sign = cx3.cup_table(1, 2)
    o1 = np.zeros((cx3.ncells(3), 2, 2), dtype=complex)
    o2 = np.zeros_like(o1)
    kernels.python_gemm_scatter(o1, a.values, b.values, k_out, k_a, k_b, sign)
    kernels.gemm_scatter(o2, a.values, b.values, k_out, k_a, k_b, sign)
    np.testing.assert_allclose(o1, o2, atol=1e-14)
    for cx_, cy_ in ((True, False), (False, True)):
        o1[:] = 0
        o2[:] = 0
        kernels.python_gemm_scatter(o1, a.values, b.values, k_out, k_a, k_b, sign, cx_, cy_)
        kernels.gemm_scatter(o2, a.values, b.values, k_out, k_a, k_b, sign, cx_, cy_)
        np.testing.assert_allclose(o1, o2, atol=1e-14)


def test_pure_python_switch():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "import ymlattice; print(ymlattice.BACKEND)"],
        env={"YMLATTICE_PURE_PYTHON": "1", "PATH": ""},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"
