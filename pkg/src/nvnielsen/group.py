"""Bieberbach groups as finite holonomy data over a translation lattice.

An element acts on points by ``x -> A x + a`` and products compose on the
left: ``(A1, a1)(A2, a2) = (A1 A2, A1 a2 + a1)``. Every element of a group
factors uniquely as a lattice translation followed by a coset
representative, which is the canonical form used throughout the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import (
    DimensionError,
    Matrix,
    Vector,
    det,
    identity,
    inverse,
    mat_pow,
    matmul,
    matrix,
    matvec,
    vec_add,
    vec_scale,
    vec_sub,
    vector,
    zero_vector,
)
from .lattice import Cokernel, IntLattice, lattice_index, solve_mixed

HOLONOMY_ORDER_CAP = 1000


@dataclass(frozen=True)
class AffineElement:
    A: Matrix
    a: Vector

    def __post_init__(self):
        A = matrix(self.A)
        a = vector(self.a)
        k = len(A)
        if any(len(r) != k for r in A) or len(a) != k:
            raise DimensionError("affine element needs a k x k matrix and a length-k vector")
        if det(A) == 0:
            raise ValueError("linear part of an affine element must be invertible")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "a", a)

    @classmethod
    def identity(cls, k: int) -> AffineElement:
        return cls(identity(k), zero_vector(k))

    @classmethod
    def translation(cls, v: Sequence) -> AffineElement:
        return cls(identity(len(v)), vector(v))

    @property
    def dimension(self) -> int:
        return len(self.a)

    def __call__(self, x: Sequence) -> Vector:
        return vec_add(matvec(self.A, x), self.a)

    def __mul__(self, other: AffineElement) -> AffineElement:
        return compose(self, other)

    def inverse(self) -> AffineElement:
        return invert(self)

    def is_identity(self) -> bool:
        return self.A == identity(self.dimension) and all(x == 0 for x in self.a)

    def is_translation(self) -> bool:
        return self.A == identity(self.dimension)

    def __pow__(self, m: int) -> AffineElement:
        result = AffineElement.identity(self.dimension)
        base = self if m >= 0 else self.inverse()
        for _ in range(abs(m)):
            result = result * base
        return result


def compose(*elements: AffineElement) -> AffineElement:
    """Product of elements, rightmost acting first."""
    if not elements:
        raise ValueError("compose needs at least one element")
    A, a = elements[-1].A, elements[-1].a
    for e in reversed(elements[:-1]):
        if e.dimension != len(a):
            raise DimensionError("cannot compose elements of different dimension")
        A, a = matmul(e.A, A), vec_add(matvec(e.A, a), e.a)
    return AffineElement(A, a)


def invert(e: AffineElement) -> AffineElement:
    Ainv = inverse(e.A)
    return AffineElement(Ainv, vec_scale(-1, matvec(Ainv, e.a)))


def matrix_order(A: Matrix, cap: int = HOLONOMY_ORDER_CAP) -> int | None:
    """Multiplicative order of ``A``, or None if it exceeds ``cap``."""
    I = identity(len(A))
    P = A
    for m in range(1, cap + 1):
        if P == I:
            return m
        P = matmul(P, A)
    return None


@dataclass(frozen=True, order=True)
class CanonicalElement:
    """Group element ``translation(lattice . coords) * cosets[coset]``."""

    coset: int
    coords: tuple[int, ...]


@dataclass(frozen=True)
class CrystalGroup:
    dimension: int
    lattice: IntLattice
    cosets: tuple[AffineElement, ...]
    lattice_names: tuple[str, ...] = ()
    coset_names: tuple[str, ...] = ()
    _by_linear: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cosets", tuple(self.cosets))
        if self.lattice.dimension != self.dimension:
            raise DimensionError("lattice dimension differs from group dimension")
        for c in self.cosets:
            if c.dimension != self.dimension:
                raise DimensionError("coset representative has the wrong dimension")
        if not self.lattice_names:
            object.__setattr__(self, "lattice_names",
                               tuple(f"t{j + 1}" for j in range(self.lattice.rank)))
        if not self.coset_names:
            object.__setattr__(self, "coset_names",
                               ("1",) + tuple(f"c{j}" for j in range(1, len(self.cosets))))
        table = {}
        for idx, c in enumerate(self.cosets):
            table.setdefault(c.A, idx)
        object.__setattr__(self, "_by_linear", table)

    @property
    def holonomy_order(self) -> int:
        return len(self.cosets)

    @property
    def basis(self) -> Matrix:
        return self.lattice.basis

    def coset_of_linear(self, A: Matrix) -> int | None:
        return self._by_linear.get(A)

    def translation(self, coords: Sequence[int]) -> AffineElement:
        return AffineElement.translation(matvec(self.basis, coords))

    def element(self, ce: CanonicalElement) -> AffineElement:
        """Reconstruct the affine element of a canonical form."""
        rep = self.cosets[ce.coset]
        return AffineElement(rep.A, vec_add(rep.a, matvec(self.basis, ce.coords)))

    def canonicalize(self, e: AffineElement) -> CanonicalElement | None:
        """Canonical form of ``e``, or None when ``e`` is not in the group."""
        if e.dimension != self.dimension:
            raise DimensionError("element dimension differs from the group")
        c = self.coset_of_linear(e.A)
        if c is None:
            return None
        coords = self.lattice.coordinates(vec_sub(e.a, self.cosets[c].a))
        if coords is None:
            return None
        return CanonicalElement(c, coords)

    def identity_element(self) -> CanonicalElement:
        return CanonicalElement(0, (0,) * self.lattice.rank)

    def generators(self) -> list[tuple[str, AffineElement]]:
        """Lattice basis translations followed by non-identity coset reps."""
        gens = [(name, AffineElement.translation(v))
                for name, v in zip(self.lattice_names, self.lattice.basis_vectors())]
        gens += [(self.coset_names[c], self.cosets[c]) for c in range(1, len(self.cosets))]
        return gens

    def describe(self, ce: CanonicalElement) -> str:
        """Readable word ``t^coords * coset`` for reports."""
        parts = [n if c == 1 else f"({n})^{c}" if "^" in n else f"{n}^{c}"
                 for n, c in zip(self.lattice_names, ce.coords) if c]
        if ce.coset:
            parts.append(self.coset_names[ce.coset])
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class TorsionWitness:
    coset: int
    coords: tuple[int, ...]
    order: int


@dataclass(frozen=True)
class Failure:
    check: str
    message: str
    witness: object = None


@dataclass
class ValidationReport:
    failures: list[Failure]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(f"{f.check}: {f.message}" for f in self.failures)


class GroupValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(str(report))


def torsion_free_check(g: CrystalGroup, cap: int = HOLONOMY_ORDER_CAP) -> TorsionWitness | None:
    """Return a finite-order element, or None when the group is torsion free.

    ``(A, a_c + B t)`` has finite order iff ``A^m = I`` and the m-fold twisted
    sum of its translation vanishes, an affine lattice equation in ``t``.
    """
    k = g.dimension
    for c in range(1, len(g.cosets)):
        rep = g.cosets[c]
        m = matrix_order(rep.A, cap)
        if m is None:
            continue
        total = twisted_sum(rep.A, m)
        lhs = matmul(total, g.basis)
        rhs = vec_scale(-1, matvec(total, rep.a))
        sol = solve_mixed(tuple(() for _ in range(k)), lhs, rhs)
        if sol is not None:
            return TorsionWitness(c, sol.t, m)
    return None


def validate_group(g: CrystalGroup, cap: int = HOLONOMY_ORDER_CAP) -> ValidationReport:
    failures: list[Failure] = []
    k = g.dimension
    if g.lattice.rank != k:
        failures.append(Failure("lattice-rank", f"lattice has rank {g.lattice.rank}, need {k}"))
        return ValidationReport(failures)
    if not g.cosets or g.cosets[0] != AffineElement.identity(k):
        failures.append(Failure("identity-coset", "coset representative 0 must be (I, 0)"))
    seen: dict = {}
    for idx, c in enumerate(g.cosets):
        if c.A in seen:
            msg = f"cosets {seen[c.A]} and {idx} share a linear part"
            if seen[c.A] == 0:
                msg += ("; the lattice must contain every pure translation of the group,"
                        " pass finer lattices to holonomy_quotient instead")
            failures.append(Failure("distinct-linear-parts", msg, (seen[c.A], idx)))
        seen.setdefault(c.A, idx)
    for idx, c in enumerate(g.cosets):
        if matrix_order(c.A, cap) is None:
            failures.append(Failure("holonomy-order", f"coset {idx} linear part has order > {cap}", idx))
        image = g.lattice.transformed(c.A)
        if image != g.lattice:
            failures.append(Failure("lattice-invariance",
                                    f"coset {idx} linear part does not map the lattice onto itself", idx))
    if failures:
        return ValidationReport(failures)
    for i, j in itertools.product(range(len(g.cosets)), repeat=2):
        prod = g.cosets[i] * g.cosets[j]
        if g.canonicalize(prod) is None:
            failures.append(Failure("closure", f"product of cosets {i} and {j} is not in the group", (i, j)))
    for i, c in enumerate(g.cosets):
        if g.canonicalize(c.inverse()) is None:
            failures.append(Failure("inverse-closure", f"inverse of coset {i} is not in the group", i))
    if failures:
        return ValidationReport(failures)
    w = torsion_free_check(g, cap)
    if w is not None:
        failures.append(Failure("torsion",
                                f"element {g.describe(CanonicalElement(w.coset, w.coords))} has order {w.order}", w))
    return ValidationReport(failures)


def require_valid(g: CrystalGroup) -> CrystalGroup:
    report = validate_group(g)
    if not report.ok:
        raise GroupValidationError(report)
    return g


def check_sublattice(g: CrystalGroup, sub: IntLattice, *, normal: bool = True) -> int:
    """Check a sublattice of the translations and return its finite index.

    With ``normal`` the sublattice must also be invariant under every
    holonomy linear part, which is exactly normality of its translation
    group in ``g``.
    """
    for v in sub.basis_vectors():
        if not g.lattice.contains(v):
            raise ValueError(f"sublattice vector {tuple(str(x) for x in v)} is not a lattice translation")
    index = lattice_index(g.lattice, sub)
    if not isinstance(index, int):
        raise ValueError("sublattice has infinite index")
    if normal:
        for idx, c in enumerate(g.cosets):
            if sub.transformed(c.A) != sub:
                raise ValueError(f"sublattice is not invariant under the linear part of coset {idx}")
    return index


def holonomy_quotient(g: CrystalGroup, sub: IntLattice) -> list[CanonicalElement]:
    """Coset representatives of the group modulo the translations in ``sub``."""
    check_sublattice(g, sub)
    coords = g.lattice.coordinate_matrix(sub)
    cok = Cokernel(coords)
    residues = sorted(cok.representative(lbl) for lbl in cok.labels())
    return [CanonicalElement(c, tuple(r)) for c in range(len(g.cosets)) for r in residues]


def conjugate(g: AffineElement, h: AffineElement) -> AffineElement:
    return g * h * g.inverse()


def twisted_sum(A: Matrix, m: int) -> Matrix:
    """I + A + ... + A^(m-1)."""
    k = len(A)
    total = [[Fraction(0)] * k for _ in range(k)]
    for j in range(m):
        P = mat_pow(A, j)
        for r in range(k):
            for s in range(k):
                total[r][s] += P[r][s]
    return tuple(map(tuple, total))


def make_group(lattice_basis, cosets, lattice_names=(), coset_names=()) -> CrystalGroup:
    """Convenience constructor from nested lists; ``cosets`` are (A, a) pairs."""
    L = IntLattice(matrix(lattice_basis))
    reps = tuple(AffineElement(matrix(A), vector(a)) for A, a in cosets)
    return CrystalGroup(len(L.basis), L, reps, tuple(lattice_names), tuple(coset_names))

