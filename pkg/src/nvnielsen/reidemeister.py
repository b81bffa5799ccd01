"""Twisted conjugacy and Reidemeister classes of the induced morphisms.

For factor ``i`` two elements are equivalent when
``alpha' = gamma alpha phi_i(gamma)^-1`` for some ``gamma`` in the stabilizer
``S_i``. The stabilizer is split into finitely many cases (see
:class:`~nvnielsen.nmap.SigmaData`); inside a case ``gamma = t(P u) gamma_0``
and ``phi_i(gamma) = t(Phi_i P u) phi_i(gamma_0)``, so every question
becomes one integer linear system in ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact import (
    INF,
    Matrix,
    common_denominator,
    det,
    identity,
    inverse,
    mat_sub,
    matmul,
    matvec,
    nullspace,
    vec_add,
    vec_sub,
)
from .group import AffineElement, CanonicalElement, CrystalGroup
from .lattice import Cokernel, IntLattice, lattice_index, solve_integer, sublattice_cokernel_count
from .nmap import NMapLift, SigmaData, induced_factor


def _as_element(group: CrystalGroup, x) -> AffineElement:
    return group.element(x) if isinstance(x, CanonicalElement) else x


def twist_action(group: CrystalGroup, lift: NMapLift, i: int, gamma: AffineElement,
                 alpha: AffineElement) -> AffineElement:
    """``gamma alpha phi_i(gamma)^-1`` computed from the induced data directly.

    ``gamma`` must stabilize ``i``; used to re-verify witnesses.
    """
    j, delta = induced_factor(group, lift, i, gamma)
    if j != i:
        raise ValueError("gamma does not stabilize the factor")
    return gamma * alpha * group.element(delta).inverse()


def twisted_equivalent(group: CrystalGroup, lift: NMapLift, sig: SigmaData, i: int,
                       alpha, alpha2) -> AffineElement | None:
    """A witness ``gamma`` in ``S_i`` with ``alpha2 = gamma alpha phi_i(gamma)^-1``.

    Returns None exactly when the two elements are inequivalent.
    """
    alpha = _as_element(group, alpha)
    alpha2 = _as_element(group, alpha2)
    Phi = lift.factors[i].Phi
    P = sig.kernel_basis
    k = group.dimension
    I = identity(k)
    for case in sig.stabilizer_cases(i):
        g0, d0 = case.element, group.element(case.phi[i])
        d0_inv = inverse(d0.A)
        M = matmul(matmul(g0.A, alpha.A), d0_inv)
        if M != alpha2.A:
            continue
        # alpha2.a = (I - M Phi) P u + g0.A alpha.a + g0.a - M d0.a
        lhs = matmul(mat_sub(I, matmul(M, Phi)), P)
        const = vec_sub(vec_add(matvec(g0.A, alpha.a), g0.a), matvec(M, d0.a))
        u = solve_integer(lhs, vec_sub(alpha2.a, const))
        if u is None:
            continue
        gamma = AffineElement.translation(matvec(P, u)) * g0
        assert twist_action(group, lift, i, gamma, alpha) == alpha2
        return gamma
    return None


@dataclass(frozen=True)
class ReidemeisterClass:
    representative: CanonicalElement
    essential: bool
    coset: int
    seeds: int


@dataclass(frozen=True)
class Certificate:
    """``target = gamma source phi_i(gamma)^-1``, re-verified on creation."""

    source: CanonicalElement
    target: CanonicalElement
    gamma: AffineElement


@dataclass
class ReidemeisterClassSet:
    """Classes of one factor.

    ``classes`` lists every class carried by a coset with non-singular twist
    (all essential). Cosets whose twist ``I - A Phi_i`` is singular carry
    infinitely many classes, all inessential; they are listed in
    ``degenerate_cosets`` and make ``count`` infinite.
    """

    factor: int
    classes: list[ReidemeisterClass]
    degenerate_cosets: tuple[int, ...]
    certificates: list[Certificate] = field(default_factory=list, repr=False)

    @property
    def infinite(self) -> bool:
        return bool(self.degenerate_cosets)

    @property
    def count(self):
        return INF if self.infinite else len(self.classes)

    @property
    def essential_count(self) -> int:
        return sum(1 for c in self.classes if c.essential)


def coset_twist(group: CrystalGroup, lift: NMapLift, sig: SigmaData, i: int, c: int) -> Matrix:
    """Lattice coordinates of the sub-action shift ``(I - A_c Phi_i) P``."""
    k = group.dimension
    A = group.cosets[c].A
    T = mat_sub(identity(k), matmul(A, lift.factors[i].Phi))
    W = matmul(inverse(group.basis), matmul(T, sig.kernel_basis))
    if any(x.denominator != 1 for row in W for x in row):
        raise AssertionError("twisted translation action leaves the lattice")
    return W


def enumerate_classes(group: CrystalGroup, lift: NMapLift, sig: SigmaData, i: int,
                      certify: bool = True) -> ReidemeisterClassSet:
    """All Reidemeister classes of ``phi_i`` on non-degenerate cosets.

    Seeds are the classes of the kernel-translation sub-action, one Smith
    cokernel per coset. The remaining finite part of ``S_i`` (one element
    per case) permutes the seeds; orbits are merged with union-find and every
    merge stores a witness that is re-verified. With ``certify`` the final
    representatives are also checked pairwise inequivalent by the
    independent decision procedure :func:`twisted_equivalent`.
    """
    h = group.holonomy_order
    Phi = lift.factors[i].Phi
    k = group.dimension
    degenerate = []
    cok: dict[int, Cokernel] = {}
    for c in range(h):
        if det(mat_sub(identity(k), matmul(group.cosets[c].A, Phi))) == 0:
            degenerate.append(c)
            continue
        cok[c] = Cokernel(coset_twist(group, lift, sig, i, c))

    seeds: list[CanonicalElement] = []
    slot: dict[tuple[int, tuple[int, ...]], int] = {}
    for c in sorted(cok):
        for label in cok[c].labels():
            slot[(c, tuple(label))] = len(seeds)
            seeds.append(CanonicalElement(c, cok[c].representative(label)))

    parent = list(range(len(seeds)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    certificates = []
    P = sig.kernel_basis
    stab = sig.stabilizer_cases(i)
    for s_idx, seed in enumerate(seeds):
        alpha = group.element(seed)
        for case in stab:
            g0 = case.element
            image = group.canonicalize(g0 * alpha * group.element(case.phi[i]).inverse())
            c2 = image.coset
            t_idx = slot[(c2, cok[c2].reduce(image.coords))]
            if find(t_idx) == find(s_idx):
                continue
            target = seeds[t_idx]
            # kernel translation carrying image onto the target seed
            W = coset_twist(group, lift, sig, i, c2)
            u = solve_integer(W, vec_sub(target.coords, image.coords))
            gamma = AffineElement.translation(matvec(P, u)) * g0
            if twist_action(group, lift, i, gamma, alpha) != group.element(target):
                raise AssertionError("merge witness failed re-verification")
            certificates.append(Certificate(seed, target, gamma))
            a, b = find(s_idx), find(t_idx)
            parent[max(a, b)] = min(a, b)

    members: dict[int, int] = {}
    for x in range(len(seeds)):
        members[find(x)] = members.get(find(x), 0) + 1
    classes = [
        ReidemeisterClass(seeds[r], True, seeds[r].coset, members[r]) for r in sorted(members)
    ]
    if certify:
        for a in range(len(classes)):
            for b in range(a + 1, len(classes)):
                w = twisted_equivalent(group, lift, sig, i, classes[a].representative,
                                       classes[b].representative)
                if w is not None:
                    raise AssertionError("enumerated class representatives are equivalent")
    return ReidemeisterClassSet(i, classes, tuple(degenerate), certificates)


def reidemeister_number_lattice(M: Matrix, lattice: IntLattice, sub: IntLattice):
    """``[lattice : sub] |det(I - M)|`` with INF when the determinant vanishes.

    ``M`` is the linear extension of a morphism ``sub -> lattice``.
    """
    index = lattice_index(lattice, sub)
    if index is INF:
        raise ValueError("sublattice must have finite index")
    for v in sub.basis_vectors():
        if not lattice.contains(matvec(M, v)):
            raise ValueError(f"M does not map sublattice vector {tuple(str(x) for x in v)} into the lattice")
    d = det(mat_sub(identity(lattice.dimension), M))
    if d == 0:
        return INF
    value = index * abs(d)
    assert value.denominator == 1
    return int(value)


def cokernel_count(M: Matrix, lattice: IntLattice, sub: IntLattice):
    """Number of classes of ``lattice / (I - M) sub`` from its Smith form."""
    return sublattice_cokernel_count(M, lattice, sub)


def coincidence_fix(group: CrystalGroup, lift: NMapLift, sig: SigmaData, i: int,
                    beta) -> AffineElement | None:
    """A non-trivial ``gamma`` in ``S_i`` with ``beta phi_i(gamma) beta^-1 = gamma``.

    Returns None when the fixed subgroup of ``tau_beta phi_i`` is trivial.
    """
    beta = _as_element(group, beta)
    Phi = lift.factors[i].Phi
    P = sig.kernel_basis
    beta_inv_A = inverse(beta.A)
    for case in sig.stabilizer_cases(i):
        g0 = case.element
        d0 = group.element(case.phi[i])
        conj_A = matmul(matmul(beta.A, d0.A), beta_inv_A)
        if conj_A != g0.A:
            continue
        # (A_beta Phi P - P) u = g0.a - A_beta d0.a - beta.a + conj_A beta.a
        lhs = mat_sub(matmul(matmul(beta.A, Phi), P), P)
        rhs = vec_add(vec_sub(vec_sub(g0.a, matvec(beta.A, d0.a)), beta.a), matvec(conj_A, beta.a))
        trivial_case = case.coset == 0 and not any(case.residue)
        if trivial_case:
            # u = 0 is the identity; look for a non-zero kernel vector instead
            if det(lhs) != 0:
                continue
            u = _integer_kernel_vector(lhs)
        else:
            u = solve_integer(lhs, rhs)
            if u is None:
                continue
        gamma = AffineElement.translation(matvec(P, u)) * g0
        j, delta = induced_factor(group, lift, i, gamma)
        assert j == i and beta * group.element(delta) * beta.inverse() == gamma
        return gamma
    return None


def _integer_kernel_vector(M: Matrix) -> tuple[int, ...]:
    v = nullspace(M)[0]
    s = common_denominator(v)
    return tuple(int(x * s) for x in v)


def twisted_orbit_sample(group: CrystalGroup, lift: NMapLift, sig: SigmaData, i: int,
                         alpha, gammas) -> list[AffineElement]:
    """Images of ``alpha`` under the twisted action of the given ``gammas``."""
    alpha = _as_element(group, alpha)
    return [twist_action(group, lift, i, g, alpha) for g in gammas]

