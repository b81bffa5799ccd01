import random
import time
from fractions import Fraction

import pytest
import sympy

from nvnielsen.exact import diag, identity, matrix
from nvnielsen.group import CanonicalElement
from nvnielsen.lattice import IntLattice
from nvnielsen.nielsen import (
    IntegralityViolation,
    NoEigenvalueOne,
    displacement_is_fixed_point_free,
    find_displacement,
    fixed_point_index,
    fixpoint_enumerate,
    nielsen_averaging,
    nielsen_raw,
    nielsen_via_classes,
)
from nvnielsen.nmap import analyze, make_lift, relabel
from nvnielsen.zoo import (
    degenerate_klein_map,
    klein,
    klein_map,
    random_flat_map,
    random_torus_map,
    torus,
)

half = Fraction(1, 2)


def test_klein_three_routes():
    t0 = time.perf_counter()
    K, f = klein(), klein_map()
    ind, sig = analyze(K, f)
    avg = nielsen_averaging(K, f)
    assert avg.value == 1
    assert set(avg.determinants.values()) == {half}
    cls = nielsen_via_classes(K, f, ind, sig)
    assert cls.value == 1
    assert [r["essential"] for r in cls.per_factor()] == [1, 1]
    fp = fixpoint_enumerate(K, f)
    assert fp.isolated_count == 1
    assert fp.degenerate == []
    assert time.perf_counter() - t0 < 1


def test_klein_lifted_fixed_points():
    # one lift through each factor; both project to the same point
    fp = fixpoint_enumerate(klein(), klein_map())
    got = {(r.factor, r.coset, r.x) for r in fp.raw}
    assert got == {(0, 0, (0, 0)), (1, 1, (0, half))}


def test_raw_formula():
    D = diag(0, half)
    assert nielsen_raw([identity(2), diag(-1, 1)], [D, D]) == 1
    Phi = matrix([[2, 1], [1, 3]])
    assert nielsen_raw([identity(2)], [Phi]) == 1
    assert nielsen_raw([identity(2)], []) == 0


def test_torus_examples():
    T = torus(2)
    assert nielsen_averaging(T, make_lift([([[2, 0], [0, 2]], [0, 0])])).value == 1
    f = make_lift([([[1, 0], [0, 1]], [0, 0])])
    assert nielsen_averaging(T, f).value == 0
    ind, sig = analyze(T, f)
    assert nielsen_via_classes(T, f, ind, sig).value == 0
    g = make_lift([([[3, 0], [0, 3]], [0, 0])])
    ind, sig = analyze(T, g)
    assert nielsen_via_classes(T, g, ind, sig).value == 4
    assert fixpoint_enumerate(T, g).isolated_count == 4


def test_non_integral_average_flagged():
    with pytest.raises(IntegralityViolation):
        nielsen_averaging(klein(), make_lift([([[0, 0], [0, Fraction(1, 3)]], [0, 0])]))


@pytest.mark.parametrize("seed", range(10))
def test_torus_sum_of_determinants(seed):
    T, f = random_torus_map(random.Random(seed))
    analyze(T, f)
    expected = sum(abs(sympy.Matrix(sympy.eye(T.dimension) - sympy.Matrix(F.Phi)).det()) for F in f.factors)
    assert nielsen_averaging(T, f).value == expected


@pytest.mark.parametrize("seed", range(8))
def test_routes_agree_and_fixed_points_match(seed):
    _, G, f = random_flat_map(random.Random(100 + seed))
    ind, sig = analyze(G, f)
    n = nielsen_averaging(G, f).value
    assert nielsen_via_classes(G, f, ind, sig).value == n
    for m in (2, 3):
        assert nielsen_averaging(G, f, G.lattice.scaled(m)).value == n
    # affine with no degenerate pair: one fixed point per essential class
    assert fixpoint_enumerate(G, f).isolated_count == n


@pytest.mark.parametrize("seed", range(4))
def test_lift_independence(seed):
    rng = random.Random(200 + seed)
    _, G, f = random_flat_map(rng)
    n = nielsen_averaging(G, f).value
    perm = tuple(rng.sample(range(f.n), f.n))
    deck = [G.element(CanonicalElement(rng.randrange(G.holonomy_order),
                                       tuple(rng.randint(-2, 2) for _ in range(G.dimension))))
            for _ in range(f.n)]
    g = relabel(G, f, deck, perm)
    ind, sig = analyze(G, g)
    assert nielsen_averaging(G, g).value == n
    assert nielsen_via_classes(G, g, ind, sig).value == n


def test_non_scalar_sublattice():
    K, f = klein(), klein_map()
    sub = IntLattice.from_basis_columns([(2, 0), (0, 3)])
    assert nielsen_averaging(K, f, sub).value == 1


def test_index_signs():
    K, f = klein(), klein_map()
    assert fixed_point_index(K, f, 0, K.identity_element()) == 1
    T = torus(2)
    assert fixed_point_index(T, make_lift([([[2, 0], [0, 2]], [0, 0])]), 0, T.identity_element()) == 1
    assert fixed_point_index(T, make_lift([([[1, 0], [0, 1]], [0, 0])]), 0, T.identity_element()) == 0
    assert fixed_point_index(T, make_lift([([[2, 0], [0, 0]], [0, 0])]), 0, T.identity_element()) == -1


def test_degenerate_klein_map():
    K, f = klein(), degenerate_klein_map()
    ind, sig = analyze(K, f)
    assert nielsen_averaging(K, f).value == 2
    assert nielsen_via_classes(K, f, ind, sig).value == 2
    assert fixed_point_index(K, f, 0, K.identity_element()) == 0
    fp = fixpoint_enumerate(K, f)
    assert (0, 0) in fp.degenerate and fp.degenerate_branches


def test_find_displacement_examples():
    g0 = find_displacement(diag(1, 0), (0, 0))
    assert g0 == (1, 0)
    g0 = find_displacement(identity(2), (3, 7))
    assert (3 + g0[0], 7 + g0[1]) != (0, 0)
    with pytest.raises(NoEigenvalueOne):
        find_displacement(matrix([[2, 0], [0, 2]]), (0, 0))


def test_find_displacement_rank_one():
    # I - Phi has rank 1 here, so a displacement exists and ImageFull is not raised
    Phi = matrix([[1, 1], [0, 0]])
    g0 = find_displacement(Phi, (0, 0))
    assert displacement_is_fixed_point_free(Phi, (0, 0), g0)


@pytest.mark.parametrize("Phi,g", [
    (diag(1, 3), (0, 0)),
    (identity(3), (Fraction(1, 3), 0, 2)),
    (matrix([[1, 2, 0], [0, 1, 0], [0, 0, 5]]), (1, 1, 1)),
])
def test_displacement_verified(Phi, g):
    g0 = find_displacement(Phi, g)
    assert displacement_is_fixed_point_free(Phi, g, g0)
