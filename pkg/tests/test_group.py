import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nvnielsen.exact import diag, identity, matrix
from nvnielsen.group import (
    AffineElement,
    CanonicalElement,
    GroupValidationError,
    compose,
    holonomy_quotient,
    invert,
    make_group,
    require_valid,
    torsion_free_check,
    validate_group,
)
from nvnielsen.lattice import IntLattice
from nvnielsen.zoo import FLAT_GROUPS, klein, p2, torus

half = Fraction(1, 2)


def test_klein_products():
    K = klein()
    b = K.cosets[1]
    a = K.translation((1, 0))
    assert K.canonicalize(b * b) == CanonicalElement(0, (0, 1))
    assert K.canonicalize(a * b) == CanonicalElement(1, (1, 0))
    assert invert(b) == AffineElement(diag(-1, 1), (0, -half))


def test_compose_is_associative_on_examples():
    K = klein()
    a, b = K.translation((1, 0)), K.cosets[1]
    assert compose(a, b, a) == (a * b) * a == a * (b * a)


@pytest.mark.parametrize("name", sorted(FLAT_GROUPS))
def test_flat_groups_are_bieberbach(name):
    assert validate_group(FLAT_GROUPS[name]()).ok


def test_p2_rejected_with_witness():
    t0 = time.perf_counter()
    report = validate_group(p2())
    assert time.perf_counter() - t0 < 1
    assert not report.ok
    fail = report.failures[0]
    assert fail.check == "torsion"
    w = fail.witness
    g = p2().element(CanonicalElement(w.coset, w.coords))
    assert w.order == 2 and (g * g).is_identity() and not g.is_identity()


def test_screw_axis_is_torsion_free_but_rotation_is_not():
    screw = make_group(identity(2), [(identity(2), (0, 0)), (diag(-1, 1), (0, half))])
    assert torsion_free_check(screw) is None
    flip = make_group(identity(2), [(identity(2), (0, 0)), (diag(-1, 1), (0, 0))])
    assert torsion_free_check(flip) is not None


def test_torsion_found_off_the_representative():
    # the representative itself has infinite order; t(1, 0) * rep is a reflection
    G = make_group(identity(2), [(identity(2), (0, 0)), (diag(-1, 1), (1, 0))])
    w = torsion_free_check(G)
    elem = G.element(CanonicalElement(w.coset, w.coords))
    assert (elem * elem).is_identity()


def test_not_closed_rejected():
    R = matrix([[0, -1], [1, 0]])
    G = make_group(identity(2), [(identity(2), (0, 0)), (R, (0, 0)), (diag(-1, -1), (half, 0))])
    report = validate_group(G)
    assert not report.ok
    assert report.failures[0].check == "closure"
    with pytest.raises(GroupValidationError):
        require_valid(G)


def test_holonomy_quotient_sizes():
    K = klein()
    assert len(holonomy_quotient(K, IntLattice.standard(2).scaled(2))) == 8
    assert len(holonomy_quotient(torus(3), IntLattice.standard(3).scaled(3))) == 27


def test_non_invariant_sublattice_refused():
    K = klein()
    with pytest.raises(ValueError):
        holonomy_quotient(K, IntLattice(matrix([[1, 0], [1, 3]])))


@given(st.sampled_from(sorted(FLAT_GROUPS)), st.data())
@settings(max_examples=60, deadline=None)
def test_canonical_round_trip(name, data):
    G = FLAT_GROUPS[name]()
    coords = st.tuples(*[st.integers(-3, 3)] * G.dimension)
    x = CanonicalElement(data.draw(st.integers(0, G.holonomy_order - 1)), data.draw(coords))
    y = CanonicalElement(data.draw(st.integers(0, G.holonomy_order - 1)), data.draw(coords))
    assert G.canonicalize(G.element(x)) == x
    prod = G.canonicalize(G.element(x) * G.element(y))
    assert prod is not None
    assert G.canonicalize(G.element(x).inverse()) is not None
    assert G.canonicalize(AffineElement.translation((Fraction(1, 3),) + (0,) * (G.dimension - 1))) is None


def test_non_maximal_lattice_rejected():
    # 2Z x Z with the half-translation listed as a coset: the primary lattice must be maximal
    G = make_group(matrix([[2, 0], [0, 1]]), [(identity(2), (0, 0)), (identity(2), (1, 0))])
    report = validate_group(G)
    assert report.failures[0].check == "distinct-linear-parts"
    assert "holonomy_quotient" in report.failures[0].message
