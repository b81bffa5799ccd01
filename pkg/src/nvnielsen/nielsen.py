"""Nielsen numbers of affine n-valued maps on flat manifolds.

Three routes are provided:

* :func:`nielsen_averaging` sums ``|det(I - A Phi_i)|`` over holonomy
  coset representatives and factors and divides by the number of cosets;
* :func:`nielsen_via_classes` counts essential Reidemeister classes per
  factor, weighted by the inverse orbit size of the factor;
* :func:`fixpoint_enumerate` lists the actual fixed points in a fundamental
  cell, which bounds the Nielsen number from above when they are isolated.
"""

from __future__ import annotations

import itertools
import math
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
    left_nullspace,
    mat_sub,
    matmul,
    matvec,
    nullspace,
    solve,
    vec_add,
    vec_scale,
    vec_sub,
)
from .group import CanonicalElement, CrystalGroup, holonomy_quotient
from .lattice import IntLattice, solve_mixed
from .nmap import InducedMorphism, NMapLift, SigmaData
from .reidemeister import ReidemeisterClassSet, enumerate_classes


class IntegralityViolation(ArithmeticError):
    """The averaging sum is not an integer, so the input is not a valid map."""


class NoEigenvalueOne(ValueError):
    pass


class ImageFull(AssertionError):
    pass


def twist_det(A: Matrix, Phi: Matrix) -> Fraction:
    return det(mat_sub(identity(len(A)), matmul(A, Phi)))


@dataclass
class NielsenReport:
    value: int
    method: str
    determinants: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    quotient_order: int | None = None
    class_sets: list[ReidemeisterClassSet] = field(default_factory=list)
    orbit_sizes: tuple[int, ...] = ()

    def per_factor(self) -> list[dict]:
        rows = []
        for cs in self.class_sets:
            rows.append({
                "factor": cs.factor + 1,
                "orbit_size": self.orbit_sizes[cs.factor],
                "classes": cs.count,
                "essential": cs.essential_count,
            })
        return rows


def nielsen_raw(cosets: Sequence[Matrix], factors: Sequence[Matrix]) -> Fraction:
    """``(1/|cosets|) sum_c sum_i |det(I - A_c Phi_i)|`` at the matrix level."""
    if not cosets:
        raise ValueError("need at least one coset matrix")
    k = len(cosets[0])
    for M in list(cosets) + list(factors):
        if len(M) != k or any(len(r) != k for r in M):
            raise DimensionError("all matrices must be square of the same size")
    total = sum((abs(twist_det(A, Phi)) for A in cosets for Phi in factors), Fraction(0))
    return total / len(cosets)


def nielsen_averaging(group: CrystalGroup, lift: NMapLift,
                      sub: IntLattice | None = None) -> NielsenReport:
    """Averaging formula over the cosets of the translations in ``sub``.

    ``sub`` defaults to the full translation lattice; any holonomy-invariant
    finite-index sublattice gives the same value.
    """
    reps = holonomy_quotient(group, sub or group.lattice)
    table: dict[tuple[int, int], Fraction] = {}
    total = Fraction(0)
    for rep in reps:
        A = group.cosets[rep.coset].A
        for i, F in enumerate(lift.factors):
            d = table.get((rep.coset, i))
            if d is None:
                d = table[(rep.coset, i)] = twist_det(A, F.Phi)
            total += abs(d)
    value = total / len(reps)
    if value.denominator != 1:
        raise IntegralityViolation(f"averaging sum gives non-integer {value}")
    return NielsenReport(int(value), "averaging", table, len(reps))


def nielsen_via_classes(group: CrystalGroup, lift: NMapLift, ind: InducedMorphism,
                        sig: SigmaData, certify: bool = True) -> NielsenReport:
    """Sum over factors of (essential classes) / (orbit size of the factor)."""
    sets = [enumerate_classes(group, lift, sig, i, certify=certify) for i in range(lift.n)]
    for cls in sig.classes:
        counts = {sets[i].essential_count for i in cls}
        if len(counts) != 1:
            raise AssertionError(f"essential class counts differ inside sigma-class {cls}: {counts}")
    total = sum((Fraction(s.essential_count, sig.orbit_size[s.factor]) for s in sets), Fraction(0))
    if total.denominator != 1:
        raise IntegralityViolation(f"class count sum gives non-integer {total}")
    return NielsenReport(int(total), "classes", class_sets=sets, orbit_sizes=sig.orbit_size)


def fixed_point_index(group: CrystalGroup, lift: NMapLift, i: int, beta) -> int:
    """Index of the fixed point class of ``beta F_i``: the sign of ``det(I - A_beta Phi_i)``."""
    A = group.cosets[beta.coset].A if isinstance(beta, CanonicalElement) else beta.A
    d = twist_det(A, lift.factors[i].Phi)
    return (d > 0) - (d < 0)


def find_displacement(Phi: Matrix, g: Sequence) -> Vector:
    """A translation ``g0`` such that ``g + Phi x + g0 = x`` has no solution.

    Needs ``I - Phi`` singular. A covector ``w`` killing the image of
    ``I - Phi`` picks a direction ``v`` with ``w v = 1``; then
    ``g0 = (1 - w g) v`` makes ``w (g + g0) = 1``, so ``g + g0`` is outside
    the image.
    """
    k = len(Phi)
    T = mat_sub(identity(k), Phi)
    if det(T) != 0:
        raise NoEigenvalueOne("I - Phi is invertible; the fixed point is unique")
    ws = left_nullspace(T)
    if not ws:
        raise ImageFull("singular I - Phi with full image")
    w = ws[0]
    j = next(idx for idx, x in enumerate(w) if x != 0)
    v = tuple(Fraction(int(idx == j)) / w[j] for idx in range(k))
    lam = sum((wi * gi for wi, gi in zip(w, g)), Fraction(0))
    return vec_scale(1 - lam, v)


def displacement_is_fixed_point_free(Phi: Matrix, g: Sequence, g0: Sequence) -> bool:
    """Re-substitution check: ``(Phi - I) x = -(g + g0)`` is unsolvable."""
    k = len(Phi)
    lhs = mat_sub(Phi, identity(k))
    rhs = vec_scale(-1, vec_add(g, g0))
    return solve_mixed(lhs, tuple(() for _ in range(k)), rhs) is None


@dataclass(frozen=True)
class RawFixedPoint:
    factor: int
    coset: int
    coords: tuple[int, ...]
    x: Vector


@dataclass(frozen=True)
class DegenerateBranch:
    """Non-isolated fixed set of ``t(B coords) cosets[coset] F_factor`` in the cell window."""

    factor: int
    coset: int
    coords: tuple[int, ...]
    particular: Vector
    directions: tuple[Vector, ...]


@dataclass
class FixedPointReport:
    raw: list[RawFixedPoint]
    points: list[Vector]
    degenerate: list[tuple[int, int]]
    degenerate_branches: list[DegenerateBranch]

    @property
    def isolated_count(self) -> int:
        return len(self.points)


def same_point(group: CrystalGroup, x: Sequence, y: Sequence) -> bool:
    """True when ``y = gamma x`` for some group element ``gamma``."""
    for rep in group.cosets:
        if group.lattice.contains(vec_sub(y, rep(x))):
            return True
    return False


def in_fixed_set(group: CrystalGroup, lift: NMapLift, x: Sequence) -> bool:
    """True when ``x`` is one of the values of the map at ``x`` on the manifold."""
    return any(same_point(group, F(x), x) for F in lift.factors)


def _window(T: Matrix, shift: Vector) -> list[range]:
    """Integer ranges of ``T y + shift`` for ``y`` in the unit cube."""
    out = []
    for row, s in zip(T, shift):
        lo = s + sum((min(x, 0) for x in row), Fraction(0))
        hi = s + sum((max(x, 0) for x in row), Fraction(0))
        out.append(range(math.ceil(lo), math.floor(hi) + 1))
    return out


def fixpoint_enumerate(group: CrystalGroup, lift: NMapLift) -> FixedPointReport:
    """Every fixed point of the map inside the half-open lattice cell.

    For factor ``i`` and coset ``c`` a fixed point solves
    ``(I - A_c Phi_i) x = A_c g_i + a_c + B t``; writing ``x = B y`` with
    ``y`` in ``[0, 1)^k`` bounds ``t`` to a finite box. Solutions are merged
    when they lie in one group orbit.
    """
    B = group.basis
    Binv = inverse(B)
    k = group.dimension
    raw: list[RawFixedPoint] = []
    degenerate: list[tuple[int, int]] = []
    branches: list[DegenerateBranch] = []
    for i, F in enumerate(lift.factors):
        for c, rep in enumerate(group.cosets):
            Tx = mat_sub(identity(k), matmul(rep.A, F.Phi))
            T = matmul(Binv, matmul(Tx, B))
            base = vec_add(matvec(rep.A, F.g), rep.a)
            shift = vec_scale(-1, matvec(Binv, base))
            singular = det(Tx) == 0
            if singular:
                degenerate.append((i, c))
            for t in itertools.product(*_window(T, shift)):
                rhs = vec_add(base, matvec(B, t))
                if singular:
                    x = solve(Tx, rhs)
                    if x is not None:
                        branches.append(DegenerateBranch(i, c, tuple(t), x, tuple(nullspace(Tx))))
                    continue
                x = matvec(inverse(Tx), rhs)
                y = matvec(Binv, x)
                if all(0 <= v < 1 for v in y):
                    assert vec_add(rep(F(x)), matvec(B, t)) == x
                    raw.append(RawFixedPoint(i, c, tuple(t), x))
    points: list[Vector] = []
    for r in raw:
        if not any(same_point(group, p, r.x) for p in points):
            points.append(r.x)
    for p in points:
        if not in_fixed_set(group, lift, p):
            raise AssertionError(f"enumerated point {p} is not fixed")
    return FixedPointReport(raw, points, degenerate, branches)

