"""Integer linear algebra against sympy as an independent oracle."""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form

from tropfan import exactlin as el

entries = st.integers(min_value=-6, max_value=6)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(entries) for _ in range(c)] for _ in range(r)]


def sympy_invariants(m):
    s = smith_normal_form(sympy.Matrix(m), domain=sympy.ZZ)
    return [abs(int(s[i, i])) for i in range(min(s.shape)) if s[i, i] != 0]


def test_hnf_example():
    h, u = el.hnf([[2, 6], [0, 4]])
    assert el.matmul(u, [[2, 6], [0, 4]]) == h
    assert abs(el.det(u)) == 1
    assert h[1][0] == 0 and h[0][0] > 0 and h[1][1] > 0
    assert abs(el.det(h)) == 8


def test_snf_examples():
    s, left, right = el.snf([[2, 0], [0, 3]])
    assert s == [[1, 0], [0, 6]]
    assert el.matmul(el.matmul(left, [[2, 0], [0, 3]]), right) == s
    assert el.invariant_factors([[2, 4]]) == [2]


def test_kernel_saturation_and_primitive():
    assert el.integer_kernel([[2, -2]]) == [[1, 1]]
    assert el.lattice_index([[2]], [[1]]) == 2
    assert el.primitive((2, 3)) == (2, 3)
    assert el.primitive((2, 4)) == (1, 2)


def test_lattice_index_infinite_is_none():
    assert el.lattice_index([[1, 0]], [[1, 0], [0, 1]]) is None


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hnf_identity(m):
    h, u = el.hnf(m)
    assert el.matmul(u, m) == h
    assert abs(int(sympy.Matrix(u).det())) == 1
    # echelon with positive pivots and reduced entries above them
    last = -1
    for row in h:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            continue
        p = nz[0]
        assert p > last and row[p] > 0
        last = p


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_against_sympy(m):
    s, left, right = el.snf(m)
    assert el.matmul(el.matmul(left, m), right) == s
    diag = [s[i][i] for i in range(min(len(s), len(s[0]))) if s[i][i]]
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert diag == sympy_invariants(m)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_and_kernel_against_sympy(m):
    assert el.rank(m) == sympy.Matrix(m).rank()
    ker = el.integer_kernel(m)
    assert len(ker) == len(m[0]) - sympy.Matrix(m).rank()
    for v in ker:
        assert all(el.dot(row, v) == 0 for row in m)
    if ker:
        # saturated: the kernel lattice has trivial invariant factors
        assert sympy_invariants(ker) == [1] * len(ker)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.integers(1, 4))
def test_rank_of_rational_rows(m, d):
    fr = [[Fraction(x, d + i) for i, x in enumerate(row)] for row in m]
    assert el.rank(fr) == sympy.Matrix(m).rank()


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_against_sympy(m):
    assert el.det(m) == int(sympy.Matrix(m).det())


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=3, max_cols=4), st.lists(entries, min_size=3, max_size=3))
def test_solve_system_integer(a, x):
    x = x[:len(a[0])] + [0] * max(0, len(a[0]) - len(x))
    y = [el.dot(row, x) for row in a]
    sol = el.solve_system_integer(a, y, len(a[0]))
    assert sol is not None
    assert [el.dot(row, sol) for row in a] == y


def test_solve_system_integer_detects_non_integral():
    assert el.solve_system_integer([[2, 0]], [1], 2) is None


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=3, max_cols=4))
def test_saturate_spans_rational_span(m):
    n = len(m[0])
    sat = el.saturate(m, n)
    assert len(sat) == sympy.Matrix(m).rank()
    if sat:
        assert sympy_invariants(sat) == [1] * len(sat)
        assert sympy.Matrix(sat + m).rank() == len(sat)


def test_rational_covector():
    l = el.rational_covector([[2, 0], [0, 3]], [1, 1])
    assert l == [Fraction(1, 2), Fraction(1, 3)]
    assert el.rational_covector([[1, 0], [2, 0]], [1, 1]) is None


def test_complete_basis_and_inverse():
    b = el.complete_basis([[2, 3]], 2)
    assert abs(el.det(b)) == 1 and b[0] == [2, 3]
    inv = el.inverse_unimodular(b)
    assert el.matmul(b, inv) == el.identity(2)


def test_linearly_dependent_basis_raises():
    with pytest.raises(el.LatticeError):
        el.solve_rational([[1, 0], [2, 0]], [1, 0])
