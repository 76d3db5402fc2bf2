"""Exact Gaussian elimination over the rationals.

Matrices are tuples of row tuples of Fractions.  Sizes here are tiny
(ambient dimensions k <= 8), so no pivoting strategy beyond "first nonzero"
is needed for exact arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import SingularMatrixError

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b or len(a[0]) != len(b):
        raise ValueError("incompatible shapes")
    cols = len(b[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(cols))
        for i in range(len(a))
    )


def mat_vec(a: Matrix, v: Vector) -> Vector:
    if not a or len(a[0]) != len(v):
        raise ValueError("incompatible shapes")
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in a)


def rref(a: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and the pivot column indices."""
    if not a:
        return a, ()
    rows = [list(r) for r in a]
    nrows, ncols = len(rows), len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(x for x in row) for row in rows), tuple(pivots)


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def rref_tracked(a: Matrix) -> tuple[Matrix, Matrix]:
    """Reduced row echelon form E of a plus an invertible T with T a = E.

    Computed by reducing a with an identity block attached; the transform
    records every row operation including swaps, so it is always invertible.
    """
    if not a:
        return a, ()
    n, w = len(a), len(a[0])
    aug = tuple(tuple(a[i]) + identity(n)[i] for i in range(n))
    rows = [list(r) for r in aug]
    r = 0
    for c in range(w):  # eliminate only within the original columns
        if r >= n:
            break
        pivot_row = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    red = tuple(tuple(row[:w]) for row in rows)
    transform = tuple(tuple(row[w:]) for row in rows)
    return red, transform


def det(a: Matrix) -> Fraction:
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("det needs a square matrix")
    rows = [list(r) for r in a]
    out = Fraction(1)
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            out = -out
        out *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return out


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("inverse needs a square matrix")
    aug = tuple(tuple(a[i]) + identity(n)[i] for i in range(n))
    red, pivots = rref(aug)
    if tuple(range(n)) != pivots[:n] or len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    return tuple(row[n:] for row in red)


def solve(a: Matrix, b: Vector) -> Vector | None:
    """One exact solution of A x = b, or None if inconsistent.

    Free variables are set to zero.
    """
    if not a:
        return () if all(x == 0 for x in b) else None
    ncols = len(a[0])
    aug = tuple(row + (bi,) for row, bi in zip(a, b))
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = red[r][ncols]
    return tuple(x)


def null_space(a: Matrix) -> list[Vector]:
    """Basis of the right null space of A."""
    if not a:
        return []
    ncols = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis: list[Vector] = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        basis.append(tuple(v))
    return basis


def transpose(a: Matrix) -> Matrix:
    if not a:
        return a
    return tuple(tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0])))
