"""Named groups, the Klein bottle map and random valid maps for tests and scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exact import det, diag, identity, mat_sub, matmul
from .group import CrystalGroup, make_group, validate_group
from .nmap import MapRejected, NMapLift, make_lift, validate_map

half = Fraction(1, 2)
quarter = Fraction(1, 4)


def torus(k: int) -> CrystalGroup:
    I = [[int(r == c) for c in range(k)] for r in range(k)]
    return make_group(I, [(I, [0] * k)], [f"e{j + 1}" for j in range(k)], ["1"])


def klein() -> CrystalGroup:
    """Klein bottle group generated by ``a = t(1, 0)`` and ``b = (diag(-1, 1), (0, 1/2))``."""
    return make_group([[1, 0], [0, 1]],
                      [([[1, 0], [0, 1]], [0, 0]), ([[-1, 0], [0, 1]], [0, half])],
                      ["a", "b^2"], ["1", "b"])


def klein_map() -> NMapLift:
    """The 2-valued map ``(t1, t2) -> {(0, t2/2), (0, t2/2 - 1/4)}``."""
    Phi = [[0, 0], [0, half]]
    return make_lift([(Phi, [0, 0]), (Phi, [0, -quarter])])


def klein_times_circle() -> CrystalGroup:
    I = diag(1, 1, 1)
    return make_group(I, [(I, [0, 0, 0]), (diag(-1, 1, 1), [0, half, 0])],
                      ["a", "b^2", "c"], ["1", "b"])


def dicosm() -> CrystalGroup:
    """Half-turn space: holonomy Z/2 acting by a rotation about the third axis."""
    I = diag(1, 1, 1)
    return make_group(I, [(I, [0, 0, 0]), (diag(-1, -1, 1), [0, 0, half])],
                      ["e1", "e2", "e3"], ["1", "r"])


def quarter_turn() -> CrystalGroup:
    """Holonomy Z/4 acting by quarter turns, with screw translation 1/4."""
    R = ((0, -1, 0), (1, 0, 0), (0, 0, 1))
    reps = []
    P = identity(3)
    for j in range(4):
        reps.append((P, [0, 0, Fraction(j, 4)]))
        P = matmul(R, P)
    return make_group(identity(3), reps, ["e1", "e2", "e3"], ["1", "r", "r^2", "r^3"])


def hantzsche_wendt() -> CrystalGroup:
    """Holonomy Z/2 x Z/2, all linear parts diagonal."""
    return make_group(identity(3), [
        (identity(3), [0, 0, 0]),
        (diag(1, -1, -1), [half, half, 0]),
        (diag(-1, 1, -1), [0, half, half]),
        (diag(-1, -1, 1), [half, 0, half]),
    ], ["e1", "e2", "e3"], ["1", "x", "y", "xy"])


def p2() -> CrystalGroup:
    """Plane group with a half-turn about the origin: crystallographic, not torsion free."""
    return make_group([[1, 0], [0, 1]], [([[1, 0], [0, 1]], [0, 0]), ([[-1, 0], [0, -1]], [0, 0])],
                      ["e1", "e2"], ["1", "r"])


FLAT_GROUPS = {
    "klein": klein,
    "klein_x_s1": klein_times_circle,
    "dicosm": dicosm,
    "quarter_turn": quarter_turn,
    "hantzsche_wendt": hantzsche_wendt,
}


def all_nonsingular(group: CrystalGroup, lift: NMapLift) -> bool:
    k = group.dimension
    return all(det(mat_sub(identity(k), matmul(c.A, F.Phi))) != 0
               for c in group.cosets for F in lift.factors)


def try_validate(group: CrystalGroup, lift: NMapLift, check_pairs: bool = True) -> bool:
    try:
        validate_map(group, lift, check_pairs=check_pairs)
    except MapRejected:
        return False
    return True


@dataclass(frozen=True)
class TorusConfig:
    dimensions: tuple[int, ...] = (2, 3)
    max_n: int = 3
    entry_range: int = 3


def random_torus_map(rng: random.Random, cfg: TorusConfig = TorusConfig()) -> tuple[CrystalGroup, NMapLift]:
    """A valid n-valued affine map on a torus with integer linear parts.

    Factors share the first row of ``Phi`` and have first translation
    coordinates in distinct classes of (1/4)Z mod Z, so their difference
    never vanishes mod the lattice.
    """
    k = rng.choice(cfg.dimensions)
    n = rng.randint(1, cfg.max_n)
    r = cfg.entry_range
    first_row = [rng.randint(-r, r) for _ in range(k)]
    offsets = rng.sample([Fraction(j, 4) for j in range(4)], n)
    factors = []
    for i in range(n):
        Phi = [first_row] + [[rng.randint(-r, r) for _ in range(k)] for _ in range(k - 1)]
        g = [offsets[i]] + [Fraction(rng.randint(-4, 4), 4) for _ in range(k - 1)]
        factors.append((Phi, g))
    return torus(k), make_lift(factors)


def _diag_phi(rng: random.Random, k: int) -> list[list[Fraction]]:
    pool = [Fraction(x, 2) for x in range(-6, 7)]
    return [[rng.choice(pool) if r == c else Fraction(0) for c in range(k)] for r in range(k)]


def _rotation_phi(rng: random.Random) -> list[list[int]]:
    p, q, s = (rng.randint(-3, 3) for _ in range(3))
    if rng.random() < 0.5:
        return [[p, -q, 0], [q, p, 0], [0, 0, s]]
    return [[p, q, 0], [q, -p, 0], [0, 0, s]]


def _quarter_vector(rng: random.Random, k: int) -> list[Fraction]:
    return [Fraction(rng.randint(-3, 3), 4) for _ in range(k)]


def random_flat_candidate(rng: random.Random, name: str) -> tuple[CrystalGroup, NMapLift]:
    """An unvalidated candidate lift on the named flat group."""
    group = FLAT_GROUPS[name]()
    k = group.dimension
    n = rng.choice((1, 1, 2, 2, 2, 3))
    factors = []
    Phi = _rotation_phi(rng) if name == "quarter_turn" else _diag_phi(rng, k)
    g = _quarter_vector(rng, k)
    factors.append((Phi, g))
    for _ in range(n - 1):
        if rng.random() < 0.7:
            # same linear part, shifted translation: the shape of the Klein map
            g2 = [x + y for x, y in zip(g, _quarter_vector(rng, k))]
            factors.append((Phi, g2))
        else:
            Phi2 = _rotation_phi(rng) if name == "quarter_turn" else _diag_phi(rng, k)
            factors.append((Phi2, _quarter_vector(rng, k)))
    return group, make_lift(factors)


def random_flat_map(rng: random.Random, names=tuple(FLAT_GROUPS), nonsingular: bool = True,
                    attempts: int = 5000) -> tuple[str, CrystalGroup, NMapLift]:
    """Rejection sample a map on a group with nontrivial holonomy.

    Candidates are screened on the generators only; run
    :func:`~nvnielsen.nmap.analyze` for the full morphism check.
    """
    for _ in range(attempts):
        name = rng.choice(names)
        group, lift = random_flat_candidate(rng, name)
        if nonsingular and not all_nonsingular(group, lift):
            continue
        if try_validate(group, lift, check_pairs=False):
            return name, group, lift
    raise RuntimeError("no valid map found; raise the attempt budget")


def degenerate_klein_map() -> NMapLift:
    """Single-valued map on the Klein bottle, singular on the trivial coset only."""
    return make_lift([([[1, 0], [0, 3]], [0, 0])])


def colliding_klein_map() -> NMapLift:
    """Two lift factors that agree everywhere, so the branches collide."""
    Phi = [[0, 0], [0, half]]
    return make_lift([(Phi, [0, 0]), (Phi, [0, 0])])


def torus_map_example() -> tuple[CrystalGroup, NMapLift]:
    """3-valued map on the 2-torus with Nielsen number 2 + 2 + 3."""
    return torus(2), make_lift([
        ([[0, 0], [0, 3]], [0, 0]),
        ([[0, 0], [0, -1]], [quarter, 0]),
        ([[0, 0], [2, -2]], [half, 0]),
    ])


def groups_valid() -> dict[str, bool]:
    out = {name: validate_group(f()).ok for name, f in FLAT_GROUPS.items()}
    out["p2"] = validate_group(p2()).ok
    return out

