from fractions import Fraction

import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form

from conftest import int_matrices
from nvnielsen.exact import INF, det, identity, mat_sub, matmul, matrix, matvec
from nvnielsen.lattice import (
    Cokernel,
    IntLattice,
    hnf,
    invariant_factors,
    lattice_index,
    snf,
    solve_integer,
    solve_mixed,
    sublattice_cokernel_count,
)


def test_hnf_example():
    H, U = hnf([[2, 4], [6, 8]])
    assert matmul(matrix([[2, 4], [6, 8]]), matrix(U)) == matrix(H)
    assert abs(det(matrix(U))) == 1


def test_solve_mixed_examples():
    one = matrix([[1], [0]])
    sol = solve_mixed(matrix([[2], [0]]), matrix([[0, 0], [0, 1]]), [1, 3])
    assert sol.x == (Fraction(1, 2),) and sol.t == (0, 3)
    assert solve_mixed(matrix([[0], [0]]), identity(2), [Fraction(1, 2), 0]) is None
    assert solve_mixed(one, matrix([[0], [2]]), [5, 1]) is None


def test_lattice_index_examples():
    Z2 = IntLattice.standard(2)
    assert lattice_index(Z2, IntLattice(matrix([[2, 0], [0, 2]]))) == 4
    assert lattice_index(Z2, Z2) == 1
    assert lattice_index(Z2, IntLattice(matrix([[1], [0]]))) is INF


def test_generating_set_is_reduced():
    L = IntLattice(matrix([[2, 4, 6], [0, 0, 0]]))
    assert L.rank == 1
    assert L == IntLattice(matrix([[2], [0]]))


@given(st.integers(1, 3).flatmap(lambda k: int_matrices(k, 5)))
@settings(max_examples=80, deadline=None)
def test_hnf_unimodular(M):
    H, U = hnf(M)
    assert matmul(matrix(M), matrix(U)) == matrix(H)
    assert abs(det(matrix(U))) == 1


@given(st.integers(1, 3).flatmap(lambda k: int_matrices(k, 5)))
@settings(max_examples=80, deadline=None)
def test_snf_matches_sympy(M):
    S, P, Q = snf(M)
    assert matmul(matmul(matrix(P), matrix(M)), matrix(Q)) == matrix(S)
    ref = smith_normal_form(sympy.Matrix(M), domain=sympy.ZZ)
    ours = [abs(d) for d in invariant_factors(M)]
    theirs = [abs(int(ref[i, i])) for i in range(len(M))]
    assert ours == theirs


@given(int_matrices(3, 4), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
@settings(max_examples=80, deadline=None)
def test_solve_integer_finds_planted(M, t):
    d = matvec(matrix(M), t)
    s = solve_integer(matrix(M), d)
    assert s is not None and matvec(matrix(M), s) == d


@given(int_matrices(2, 4))
@settings(max_examples=80, deadline=None)
def test_cokernel_labels_are_distinct_classes(M):
    assume(det(matrix(M)) != 0)
    cok = Cokernel(M)
    assert cok.size == abs(det(matrix(M)))
    labels = list(cok.labels())
    assert len(set(labels)) == len(labels)
    for lbl in labels:
        assert cok.reduce(cok.representative(lbl)) == tuple(lbl)


@given(int_matrices(2, 3), st.sampled_from([1, 2, 3]))
@settings(max_examples=60, deadline=None)
def test_cokernel_count_matches_determinant(M, m):
    Mq = matrix(M)
    assume(det(mat_sub(identity(2), Mq)) != 0)
    L = IntLattice.standard(2)
    count = sublattice_cokernel_count(Mq, L, L.scaled(m))
    W = matmul(mat_sub(identity(2), Mq), L.scaled(m).basis)
    assert count == abs(det(W))
