from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_fractions, square_matrices
from nvnielsen.exact import (
    INF,
    DimensionError,
    as_fraction,
    det,
    fmt,
    identity,
    inverse,
    left_nullspace,
    matmul,
    matrix,
    matvec,
    nullspace,
    rank,
    rref,
    solve,
    transpose,
)


def test_floats_refused():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    assert as_fraction("3/6") == Fraction(1, 2)


def test_fmt():
    assert fmt(Fraction(4, 2)) == 2
    assert fmt(Fraction(-1, 4)) == "-1/4"
    assert fmt(INF) == "inf"


def test_inf_arithmetic():
    assert INF > 10**30
    assert 3 + INF is INF
    assert 2 * INF is INF


def test_matmul_shapes():
    with pytest.raises(DimensionError):
        matmul(matrix([[1, 2]]), matrix([[1, 2]]))


def test_rref_small():
    R, piv = rref(matrix([[2, 4], [1, 2]]))
    assert piv == [0]
    assert R == matrix([[1, 2], [0, 0]])


@given(st.integers(1, 4).flatmap(lambda k: square_matrices(k, small_fractions())))
@settings(max_examples=60, deadline=None)
def test_det_matches_sympy(rows):
    M = matrix(rows)
    expected = sympy.Matrix(rows).det()
    assert det(M) == Fraction(int(expected.p), int(expected.q))


@given(st.integers(1, 4).flatmap(lambda k: square_matrices(k, small_fractions())))
@settings(max_examples=60, deadline=None)
def test_inverse_or_singular(rows):
    M = matrix(rows)
    if det(M) == 0:
        assert rank(M) < len(M)
        assert nullspace(M)
    else:
        assert matmul(M, inverse(M)) == identity(len(M))


@given(st.integers(1, 4).flatmap(lambda k: square_matrices(k, small_fractions(bound=2))))
@settings(max_examples=60, deadline=None)
def test_nullspaces(rows):
    M = matrix(rows)
    for v in nullspace(M):
        assert all(x == 0 for x in matvec(M, v))
    for w in left_nullspace(M):
        assert all(x == 0 for x in matvec(transpose(M), w))
    assert len(nullspace(M)) + rank(M) == len(M)


@given(square_matrices(3, small_fractions(bound=2)), st.lists(small_fractions(), min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_solve_consistent(rows, x):
    M = matrix(rows)
    b = matvec(M, x)
    y = solve(M, b)
    assert y is not None and matvec(M, y) == b
