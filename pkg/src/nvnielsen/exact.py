"""Exact rational vectors and matrices.

Matrices are tuples of row tuples of :class:`fractions.Fraction`, vectors are
tuples of Fractions. Everything here is a pure function on immutable values.
Floats are rejected on entry so nothing inexact can leak into a computation.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]


class DimensionError(ValueError):
    pass


class _Infinite:
    """The symbol used for infinite counts (Reidemeister numbers, indices)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if other == 0:
            raise ValueError("INF * 0 is undefined")
        return self

    __rmul__ = __mul__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INF")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __le__(self, other):
        return other is self

    def __ge__(self, other):
        return True


INF = _Infinite()
ExtendedCount = "int | _Infinite"


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact or boolean scalar {x!r}")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def vector(entries: Iterable) -> Vector:
    return tuple(as_fraction(x) for x in entries)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    M = tuple(vector(r) for r in rows)
    if M and len({len(r) for r in M}) != 1:
        raise DimensionError("ragged matrix rows")
    return M


def shape(M: Matrix) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def identity(k: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((Fraction(0),) * cols for _ in range(rows))


def zero_vector(k: int) -> Vector:
    return (Fraction(0),) * k


def diag(*entries) -> Matrix:
    k = len(entries)
    return tuple(
        tuple(as_fraction(entries[i]) if i == j else Fraction(0) for j in range(k))
        for i in range(k)
    )


def transpose(M: Matrix) -> Matrix:
    return tuple(zip(*M))


def columns(M: Matrix) -> list[Vector]:
    return [tuple(col) for col in zip(*M)]


def from_columns(cols: Sequence[Sequence], rows: int | None = None) -> Matrix:
    if not cols:
        if rows is None:
            raise DimensionError("row count needed for a matrix with no columns")
        return tuple(() for _ in range(rows))
    return transpose(matrix(cols))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    ra, ca = shape(A)
    rb, cb = shape(B)
    if ca != rb:
        raise DimensionError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    Bt = transpose(B) if B and cb else ()
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in Bt)
        if cb else ()
        for row in A
    )


def matvec(A: Matrix, v: Sequence) -> Vector:
    if shape(A)[1] != len(v):
        raise DimensionError(f"cannot apply {shape(A)} matrix to length-{len(v)} vector")
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in A)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    if shape(A) != shape(B):
        raise DimensionError(f"shape mismatch {shape(A)} vs {shape(B)}")
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(A, B))


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    if shape(A) != shape(B):
        raise DimensionError(f"shape mismatch {shape(A)} vs {shape(B)}")
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(A, B))


def mat_scale(c, A: Matrix) -> Matrix:
    c = as_fraction(c)
    return tuple(tuple(c * x for x in r) for r in A)


def hstack(A: Matrix, B: Matrix) -> Matrix:
    if len(A) != len(B):
        raise DimensionError("hstack needs equal row counts")
    return tuple(r + s for r, s in zip(A, B))


def vec_add(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> Vector:
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c, v: Sequence) -> Vector:
    c = as_fraction(c)
    return tuple(c * x for x in v)


def mat_pow(A: Matrix, m: int) -> Matrix:
    result = identity(len(A))
    for _ in range(m):
        result = matmul(result, A)
    return result


def is_integral(entries) -> bool:
    """True when every entry of a vector or matrix is an integer."""
    for x in entries:
        if isinstance(x, tuple):
            if not is_integral(x):
                return False
        elif Fraction(x).denominator != 1:
            return False
    return True


def to_int(M: Matrix) -> list[list[int]]:
    out = []
    for row in M:
        if not is_integral(row):
            raise ValueError("matrix has non-integer entries")
        out.append([int(x) for x in row])
    return out


def common_denominator(entries) -> int:
    d = 1
    for x in entries:
        if isinstance(x, tuple):
            d = lcm(d, common_denominator(x))
        else:
            d = lcm(d, Fraction(x).denominator)
    return d


def rref(M: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot column list."""
    rows, cols = shape(M)
    R = [list(r) for r in M]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return tuple(tuple(row) for row in R), pivots


def rank(M: Matrix) -> int:
    return len(rref(M)[1])


def det(M: Matrix) -> Fraction:
    """Exact determinant by pivoted Gaussian elimination."""
    rows, cols = shape(M)
    if rows != cols:
        raise DimensionError(f"determinant of non-square {rows}x{cols} matrix")
    R = [list(r) for r in M]
    result = Fraction(1)
    for c in range(rows):
        p = next((i for i in range(c, rows) if R[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            R[c], R[p] = R[p], R[c]
            result = -result
        piv = R[c][c]
        result *= piv
        for i in range(c + 1, rows):
            if R[i][c] != 0:
                f = R[i][c] / piv
                R[i] = [x - f * y for x, y in zip(R[i], R[c])]
    return result


def inverse(M: Matrix) -> Matrix:
    rows, cols = shape(M)
    if rows != cols:
        raise DimensionError("inverse of non-square matrix")
    R, piv = rref(hstack(M, identity(rows)))
    if piv[:rows] != list(range(rows)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(r[rows:] for r in R)


def nullspace(M: Matrix) -> list[Vector]:
    """A basis of {x : M x = 0}."""
    rows, cols = shape(M)
    R, piv = rref(M)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * cols
        x[f] = Fraction(1)
        for r, p in enumerate(piv):
            x[p] = -R[r][f]
        basis.append(tuple(x))
    return basis


def left_nullspace(M: Matrix) -> list[Vector]:
    """A basis of {w : w M = 0}."""
    if not M:
        return []
    cols = shape(M)[1]
    if cols == 0:
        return [tuple(Fraction(int(i == j)) for j in range(len(M))) for i in range(len(M))]
    return nullspace(transpose(M))


def solve(M: Matrix, v: Sequence) -> Vector | None:
    """A particular solution of M x = v, or None when inconsistent."""
    rows, cols = shape(M)
    if len(v) != rows:
        raise DimensionError("right-hand side length mismatch")
    if cols == 0:
        return () if all(x == 0 for x in v) else None
    R, piv = rref(hstack(M, tuple((as_fraction(x),) for x in v)))
    if cols in piv:
        return None
    x = [Fraction(0)] * cols
    for r, p in enumerate(piv):
        x[p] = R[r][cols]
    return tuple(x)


def key(M: Matrix) -> tuple:
    """Hashable normal key of a matrix (already a tuple, kept for clarity)."""
    return tuple(tuple(r) for r in M)


def fmt(x) -> str | int:
    """JSON-ready form: bare ints, "p/q" strings for proper fractions."""
    if x is INF:
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return int(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fmt_vector(v: Sequence) -> list:
    return [fmt(x) for x in v]


def fmt_matrix(M: Matrix) -> list:
    return [fmt_vector(r) for r in M]
