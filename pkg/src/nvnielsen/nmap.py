"""Affine n-valued map lifts and the morphism they induce on the group.

A lift is a list of affine factors ``F_i(x) = g_i + Phi_i x``. It defines an
n-valued map on the flat manifold when, for every group element ``gamma``
and factor ``i``, there is a factor ``j`` and a group element ``delta`` with
``F_i(gamma x) = delta F_j(x)`` for all ``x``, and the n values are pairwise
distinct modulo the group. Then ``sigma_gamma(j) = i`` and
``phi_i(gamma) = delta``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import factorial, lcm
from typing import Sequence

from .exact import (
    DimensionError,
    Matrix,
    Vector,
    mat_sub,
    matmul,
    matrix,
    matvec,
    vec_add,
    vec_sub,
    vector,
)
from .group import AffineElement, CanonicalElement, CrystalGroup, check_sublattice
from .lattice import IntLattice, solve_mixed

Perm = tuple[int, ...]


@dataclass(frozen=True)
class Factor:
    Phi: Matrix
    g: Vector

    def __post_init__(self):
        Phi = matrix(self.Phi)
        g = vector(self.g)
        if any(len(r) != len(Phi) for r in Phi) or len(g) != len(Phi):
            raise DimensionError("factor needs a k x k matrix and a length-k vector")
        object.__setattr__(self, "Phi", Phi)
        object.__setattr__(self, "g", g)

    def __call__(self, x: Sequence) -> Vector:
        return vec_add(self.g, matvec(self.Phi, x))


@dataclass(frozen=True)
class NMapLift:
    factors: tuple[Factor, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("an n-valued map needs at least one factor")
        if len({len(f.g) for f in self.factors}) != 1:
            raise DimensionError("factors have different dimensions")

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def dimension(self) -> int:
        return len(self.factors[0].g)

    def __call__(self, x: Sequence) -> tuple[Vector, ...]:
        return tuple(f(x) for f in self.factors)


def make_lift(factors) -> NMapLift:
    """Build a lift from ``(Phi, g)`` pairs given as nested lists."""
    return NMapLift(tuple(Factor(matrix(Phi), vector(g)) for Phi, g in factors))


class MapRejected(ValueError):
    """The lift does not define an n-valued map on the quotient."""


class NotMember(MapRejected):
    pass


class NoInducedElement(MapRejected):
    def __init__(self, generator: str, factor: int):
        self.generator, self.factor = generator, factor
        super().__init__(f"no induced element for generator {generator} and factor {factor + 1}")


class AmbiguousFactor(MapRejected):
    def __init__(self, generator: str, factor: int, candidates):
        self.generator, self.factor, self.candidates = generator, factor, candidates
        super().__init__(f"generator {generator}, factor {factor + 1}: several matching factors {candidates}")


class NonPermutation(MapRejected):
    def __init__(self, generator: str, images):
        self.generator, self.images = generator, images
        super().__init__(f"generator {generator} does not permute the factors: {images}")


class BranchCollision(MapRejected):
    def __init__(self, i: int, j: int, coset: int, witness):
        self.i, self.j, self.coset, self.witness = i, j, coset, witness
        x = tuple(str(v) for v in witness.x)
        super().__init__(
            f"factors {i + 1} and {j + 1} meet modulo coset {coset} at x = {x}, t = {witness.t}"
        )


def induced_factor(group: CrystalGroup, lift: NMapLift, i: int, gamma: AffineElement,
                   name: str = "gamma") -> tuple[int, CanonicalElement]:
    """The unique ``(j, delta)`` with ``F_i o gamma = delta o F_j``.

    Found by matching linear parts ``Phi_i A_gamma = A_delta Phi_j`` over all
    (factor, coset) pairs, then checking that the forced translation part
    ``g_i + Phi_i a_gamma - A_delta g_j`` lands in the coset.
    """
    if group.canonicalize(gamma) is None:
        raise NotMember(f"{name} is not an element of the group")
    Fi = lift.factors[i]
    left = matmul(Fi.Phi, gamma.A)
    shifted = vec_add(Fi.g, matvec(Fi.Phi, gamma.a))
    found = []
    for j, Fj in enumerate(lift.factors):
        for c, rep in enumerate(group.cosets):
            if matmul(rep.A, Fj.Phi) != left:
                continue
            a_delta = vec_sub(shifted, matvec(rep.A, Fj.g))
            coords = group.lattice.coordinates(vec_sub(a_delta, rep.a))
            if coords is not None:
                found.append((j, CanonicalElement(c, coords)))
    if not found:
        raise NoInducedElement(name, i)
    if len(found) > 1:
        raise AmbiguousFactor(name, i, found)
    return found[0]


def induced_data(group: CrystalGroup, lift: NMapLift, gamma: AffineElement,
                 name: str = "gamma") -> tuple[Perm, tuple[CanonicalElement, ...]]:
    """``(sigma_gamma, (phi_1(gamma), ..., phi_n(gamma)))`` for one element."""
    n = lift.n
    sigma = [None] * n
    phis = []
    for i in range(n):
        j, delta = induced_factor(group, lift, i, gamma, name)
        if sigma[j] is not None:
            raise NonPermutation(name, [induced_factor(group, lift, l, gamma, name)[0] for l in range(n)])
        sigma[j] = i
        phis.append(delta)
    return tuple(sigma), tuple(phis)


def perm_compose(s: Perm, t: Perm) -> Perm:
    """``(s o t)(x) = s(t(x))``."""
    return tuple(s[t[x]] for x in range(len(t)))


def perm_inverse(s: Perm) -> Perm:
    inv = [0] * len(s)
    for x, y in enumerate(s):
        inv[y] = x
    return tuple(inv)


def perm_order(s: Perm) -> int:
    order, p = 1, s
    ident = tuple(range(len(s)))
    while p != ident:
        p = perm_compose(s, p)
        order += 1
    return order


@dataclass(frozen=True)
class InducedMorphism:
    """Induced data on the fixed generating set of the group."""

    names: tuple[str, ...]
    generators: tuple[AffineElement, ...]
    sigma: tuple[Perm, ...]
    phi: tuple[tuple[CanonicalElement, ...], ...]

    def for_generator(self, name: str) -> tuple[Perm, tuple[CanonicalElement, ...]]:
        idx = self.names.index(name)
        return self.sigma[idx], self.phi[idx]


def branch_collision(group: CrystalGroup, lift: NMapLift, i: int, j: int):
    """A coincidence ``F_i(x) = gamma F_j(x)`` for some ``gamma``, or None."""
    Fi, Fj = lift.factors[i], lift.factors[j]
    negB = tuple(tuple(-x for x in row) for row in group.basis)
    for c, rep in enumerate(group.cosets):
        lhs = mat_sub(Fi.Phi, matmul(rep.A, Fj.Phi))
        rhs = vec_sub(vec_add(rep.a, matvec(rep.A, Fj.g)), Fi.g)
        sol = solve_mixed(lhs, negB, rhs)
        if sol is not None:
            return c, sol
    return None


def check_morphism(group: CrystalGroup, lift: NMapLift, words: Sequence[Sequence[AffineElement]]):
    """Verify the homomorphism and cocycle identities on products of words.

    For each word ``w = (gamma, gamma')`` checks ``sigma_{gamma gamma'} =
    sigma_gamma sigma_gamma'`` and ``phi_i(gamma gamma') = phi_i(gamma)
    phi_{sigma_gamma^-1(i)}(gamma')``. Longer words are folded pairwise.
    Raises MapRejected on the first failure.
    """
    for word in words:
        acc = AffineElement.identity(group.dimension)
        for gamma in word:
            s1, p1 = induced_data(group, lift, acc)
            s2, p2 = induced_data(group, lift, gamma)
            s12, p12 = induced_data(group, lift, acc * gamma)
            if s12 != perm_compose(s1, s2):
                raise MapRejected("sigma is not multiplicative on a sampled word")
            inv = perm_inverse(s1)
            for i in range(lift.n):
                expected = group.element(p1[i]) * group.element(p2[inv[i]])
                if group.canonicalize(expected) != p12[i]:
                    raise MapRejected(f"cocycle identity fails for factor {i + 1} on a sampled word")
            acc = acc * gamma


def validate_map(group: CrystalGroup, lift: NMapLift, *, check_pairs: bool = True) -> InducedMorphism:
    """Check that the lift induces an n-valued map and return the induced data.

    Raises a :class:`MapRejected` subclass naming the failing generator,
    factor pair or coset.
    """
    if lift.dimension != group.dimension:
        raise DimensionError("map and group dimensions differ")
    # distinctness first: coinciding branches also make the matching ambiguous
    for i, j in itertools.combinations(range(lift.n), 2):
        hit = branch_collision(group, lift, i, j)
        if hit is not None:
            raise BranchCollision(i, j, hit[0], hit[1])
    names, gens, sigmas, phis = [], [], [], []
    for name, gamma in group.generators():
        s, p = induced_data(group, lift, gamma, name)
        names.append(name)
        gens.append(gamma)
        sigmas.append(s)
        phis.append(p)
    if check_pairs:
        check_morphism(group, lift, [(a, b) for a in gens for b in gens])
    return InducedMorphism(tuple(names), tuple(gens), tuple(sigmas), tuple(phis))


@dataclass(frozen=True)
class Case:
    """One class of group elements modulo the kernel translations.

    ``element`` is ``translation(B residue) * cosets[coset]``; every element
    of the class is ``translation(P u) * element`` with ``P`` the kernel
    lattice basis and ``u`` integral.
    """

    coset: int
    residue: tuple[int, ...]
    element: AffineElement
    sigma: Perm
    phi: tuple[CanonicalElement, ...]


@dataclass
class SigmaData:
    """sigma-classes, stabilizer indices and the finite case table.

    ``modulus`` is an integer ``o`` such that every translation in ``o``
    times the lattice has trivial sigma and is sent by every ``phi_i`` to
    a translation (namely ``Phi_i`` applied to it). The group is then the
    disjoint union of ``holonomy_order * o**k`` cases.
    """

    classes: list[tuple[int, ...]]
    orbit_size: tuple[int, ...]
    exponent: int
    modulus: int
    kernel_basis: Matrix
    cases: list[Case]
    stabilizer: tuple[tuple[int, ...], ...] = field(default=())

    def stabilizer_cases(self, i: int) -> list[Case]:
        return [self.cases[c] for c in self.stabilizer[i]]

    def index(self, i: int) -> int:
        return self.orbit_size[i]


def _translation_order(group: CrystalGroup, lift: NMapLift, v: Vector, cap: int) -> int:
    for m in range(1, cap + 1):
        s, p = induced_data(group, lift, AffineElement.translation(tuple(m * x for x in v)))
        if s == tuple(range(lift.n)) and all(d.coset == 0 for d in p):
            return m
    raise ValueError(f"translation image order exceeds {cap}")


def sigma_data(group: CrystalGroup, lift: NMapLift, ind: InducedMorphism) -> SigmaData:
    n = lift.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in ind.sigma:
        for x in range(n):
            a, b = find(x), find(s[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    classes = [tuple(v) for _, v in sorted(groups.items())]
    orbit = [0] * n
    for cls in classes:
        for x in cls:
            orbit[x] = len(cls)

    exponent = min(lcm(*(perm_order(s) for s in ind.sigma)) if ind.sigma else 1, factorial(n))
    cap = factorial(n) * group.holonomy_order ** n
    modulus = 1
    for v in group.lattice.basis_vectors():
        modulus = lcm(modulus, _translation_order(group, lift, v, cap))
    kernel = tuple(tuple(modulus * x for x in row) for row in group.basis)

    cases = []
    for c, rep in enumerate(group.cosets):
        for r in itertools.product(range(modulus), repeat=group.lattice.rank):
            elem = group.translation(r) * rep
            s, p = induced_data(group, lift, elem)
            cases.append(Case(c, tuple(r), elem, s, p))
    stab = tuple(tuple(idx for idx, cs in enumerate(cases) if cs.sigma[i] == i) for i in range(n))
    for i in range(n):
        if len(cases) != orbit[i] * len(stab[i]):
            raise AssertionError(
                f"orbit-stabilizer mismatch for factor {i + 1}: "
                f"{len(cases)} cases, {len(stab[i])} stabilizing, orbit {orbit[i]}"
            )
    return SigmaData(classes, tuple(orbit), exponent, modulus, kernel, cases, stab)


def analyze(group: CrystalGroup, lift: NMapLift) -> tuple[InducedMorphism, SigmaData]:
    ind = validate_map(group, lift)
    return ind, sigma_data(group, lift, ind)


@dataclass(frozen=True)
class Obstruction:
    generator: Vector
    name: str
    factor: int
    image: CanonicalElement | None
    reason: str


def lift_check(group: CrystalGroup, lift: NMapLift, ind: InducedMorphism,
               sub: IntLattice) -> Obstruction | None:
    """None when the map lifts to the cover defined by ``sub``.

    The map lifts iff every basis translation ``t`` of ``sub`` has trivial
    ``sigma_t`` and each ``phi_i(t)`` is a translation lying in ``sub``.
    """
    check_sublattice(group, sub, normal=False)
    names = {tuple(v): nm for nm, v in zip(group.lattice_names, group.lattice.basis_vectors())}
    ident = tuple(range(lift.n))
    for v in sub.basis_vectors():
        name = names.get(tuple(v), "translation(" + ", ".join(str(x) for x in v) + ")")
        s, phis = induced_data(group, lift, AffineElement.translation(v), name)
        if s != ident:
            moved = next(i for i in range(lift.n) if s[i] != i)
            return Obstruction(v, name, moved, None, "sigma is not trivial")
        for i, d in enumerate(phis):
            img = group.element(d)
            if not (img.is_translation() and sub.contains(img.a)):
                return Obstruction(v, name, i, d, "image is not in the sublattice")
    return None


def random_words(gens: Sequence[AffineElement], count: int, length: int,
                 rng: random.Random) -> list[list[AffineElement]]:
    """Random words in the generators and their inverses."""
    pool = list(gens) + [g.inverse() for g in gens]
    return [[rng.choice(pool) for _ in range(length)] for _ in range(count)]


def relabel(group: CrystalGroup, lift: NMapLift, deck: Sequence[AffineElement],
            perm: Perm) -> NMapLift:
    """Another lift of the same map: factor ``i`` becomes ``deck[i] F_{perm^-1(i)}``."""
    inv = perm_inverse(perm)
    out = []
    for i, nu in enumerate(deck):
        F = lift.factors[inv[i]]
        out.append(Factor(matmul(nu.A, F.Phi), vec_add(matvec(nu.A, F.g), nu.a)))
    return NMapLift(tuple(out))
