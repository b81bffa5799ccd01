"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run ``python3 tests/test_acceptance.py`` for the lines alone; under pytest
they are repeated in the terminal summary. All comparisons are exact.
"""

import random
import sys
import time
from pathlib import Path

import sympy
from sympy.matrices.normalforms import smith_normal_form

from nvnielsen.exact import det, identity, mat_sub, matmul, matrix
from nvnielsen.group import CanonicalElement, validate_group
from nvnielsen.lattice import IntLattice
from nvnielsen.model import parse_model
from nvnielsen.nielsen import (
    displacement_is_fixed_point_free,
    find_displacement,
    fixed_point_index,
    fixpoint_enumerate,
    nielsen_averaging,
    nielsen_via_classes,
)
from nvnielsen.nmap import BranchCollision, analyze, lift_check, validate_map
from nvnielsen.reidemeister import cokernel_count, reidemeister_number_lattice
from nvnielsen.zoo import all_nonsingular, random_flat_map, random_torus_map

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
MAP_FIXTURES = ("klein.json", "torus3.json", "klein_degenerate.json")

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    RESULTS.append(line)
    print(line)
    assert ok, line


def load(name):
    return parse_model(FIXTURES / name)


def test_criterion_1_klein_regression():
    t0 = time.perf_counter()
    K, f = load("klein.json")
    ind, sig = analyze(K, f)
    avg = nielsen_averaging(K, f).value
    cls = nielsen_via_classes(K, f, ind, sig).value
    fix = fixpoint_enumerate(K, f).isolated_count
    ob = lift_check(K, f, ind, IntLattice.standard(2))
    elapsed = time.perf_counter() - t0
    ok = avg == 1 and cls == 1 and fix == 1 and ob is not None and ob.name == "b^2" and elapsed < 1
    record(1, "Klein bottle regression", ok,
           f"averaging={avg}, classes={cls}, fixed points={fix}, "
           f"obstruction={ob.name if ob else None}, {elapsed:.3f}s")


def test_criterion_2_torus_reduction():
    rng = random.Random(2024)
    checked, bad, dims, ns = 0, 0, set(), set()
    for _ in range(24):
        T, f = random_torus_map(rng)
        validate_map(T, f)
        assert all(x.denominator == 1 and -3 <= x <= 3 for F in f.factors for row in F.Phi for x in row)
        k = T.dimension
        oracle = sum(abs(sympy.Matrix(sympy.eye(k) - sympy.Matrix(F.Phi)).det()) for F in f.factors)
        bad += nielsen_averaging(T, f).value != oracle
        checked += 1
        dims.add(k)
        ns.add(f.n)
    ok = checked >= 20 and bad == 0 and dims == {2, 3} and max(ns) <= 3
    record(2, "torus reduction", ok, f"{checked} maps, dims {sorted(dims)}, n in {sorted(ns)}, {bad} mismatches")


def test_criterion_3_route_agreement():
    t0 = time.perf_counter()
    K, f = load("klein.json")
    cases = [("klein fixture", K, f)]
    rng = random.Random(33)
    while len(cases) < 13:
        name, G, g = random_flat_map(rng)
        cases.append((name, G, g))
    bad = []
    for name, G, g in cases:
        assert G.holonomy_order > 1 and 2 <= G.dimension <= 3 and all_nonsingular(G, g)
        ind, sig = analyze(G, g)
        a = nielsen_averaging(G, g).value
        c = nielsen_via_classes(G, g, ind, sig).value
        if a != c:
            bad.append((name, a, c))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30
    record(3, "classes route equals averaging route", ok,
           f"{len(cases)} maps, {len(bad)} disagreements, {elapsed:.2f}s")


def test_criterion_4_sublattice_independence():
    bad = []
    for name in MAP_FIXTURES:
        G, f = load(name)
        base = nielsen_averaging(G, f).value
        for m in (2, 3):
            v = nielsen_averaging(G, f, G.lattice.scaled(m)).value
            if v != base:
                bad.append((name, m, base, v))
    record(4, "sublattice independence", not bad,
           f"{len(MAP_FIXTURES)} map fixtures x {{2L, 3L}}, {len(bad)} changes")


def test_criterion_5_reidemeister_formula():
    rng = random.Random(55)
    checked, bad = 0, 0
    while checked < 60:
        k = rng.choice((2, 3))
        M = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(k)]
        if det(mat_sub(identity(k), matrix(M))) == 0:
            continue
        L = IntLattice.standard(k)
        for m in (1, 2, 3):
            sub = L.scaled(m)
            value = reidemeister_number_lattice(matrix(M), L, sub)
            ours = cokernel_count(matrix(M), L, sub)
            S = smith_normal_form((sympy.eye(k) - sympy.Matrix(M)) * m, domain=sympy.ZZ)
            theirs = abs(int(sympy.prod([S[j, j] for j in range(k)])))
            bad += not (value == ours == theirs)
        checked += 1
    record(5, "lattice Reidemeister formula vs Smith cokernel", bad == 0,
           f"{checked} matrices x 3 sublattices, {bad} mismatches")


def test_criterion_6_lower_bound():
    rows, bad = [], []
    for name in MAP_FIXTURES:
        G, f = load(name)
        fp = fixpoint_enumerate(G, f)
        if fp.degenerate:
            continue
        n = nielsen_averaging(G, f).value
        rows.append(f"{name}: {fp.isolated_count}>={n}")
        if fp.isolated_count < n:
            bad.append(name)
    K, f = load("klein.json")
    klein_equal = fixpoint_enumerate(K, f).isolated_count == nielsen_averaging(K, f).value
    record(6, "fixed points bound the Nielsen number", not bad and klein_equal,
           "; ".join(rows) + f"; Klein equality {klein_equal}")


def test_criterion_7_degenerate_rule():
    G, f = load("klein_degenerate.json")
    validate_map(G, f)
    k = G.dimension
    checked, bad = 0, 0
    for i, F in enumerate(f.factors):
        for c, rep in enumerate(G.cosets):
            M = matmul(rep.A, F.Phi)
            if det(mat_sub(identity(k), M)) != 0:
                continue
            for coords in ((0, 0), (1, 0), (0, 1), (2, -3)):
                bad += fixed_point_index(G, f, i, CanonicalElement(c, coords)) != 0
            g0 = find_displacement(M, rep(F.g))
            bad += not displacement_is_fixed_point_free(M, rep(F.g), g0)
            checked += 1
    flagged = fixpoint_enumerate(G, f).degenerate
    ok = checked > 0 and bad == 0 and len(flagged) == checked
    record(7, "degenerate pairs have index 0 and a verified displacement", ok,
           f"{checked} degenerate pairs, {bad} failures")


def test_criterion_8_validation_guards():
    t0 = time.perf_counter()
    report = validate_group(load("p2.json")[0])
    t_p2 = time.perf_counter() - t0
    torsion = [fl for fl in report.failures if fl.check == "torsion" and fl.witness is not None]
    t0 = time.perf_counter()
    K, f = load("klein_collision.json")
    try:
        validate_map(K, f)
        collision = False
    except BranchCollision:
        collision = True
    t_col = time.perf_counter() - t0
    ok = bool(torsion) and collision and t_p2 < 1 and t_col < 1
    record(8, "validation guards", ok,
           f"p2 witness order {torsion[0].witness.order if torsion else None} in {t_p2:.3f}s, "
           f"collision {collision} in {t_col:.3f}s")


if __name__ == "__main__":
    failed = 0
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
