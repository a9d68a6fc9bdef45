"""Exact dense linear algebra over the rationals.

Everything in the engine that needs linear algebra (change of basis for the
Frobenius trace, commutant computations, span comparisons, the triangular
theta solve) goes through these routines.  Matrices are lists of rows of
Fractions; no tolerances exist anywhere.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[Fraction]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("shape mismatch")
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        arow = a[i]
        orow = out[i]
        for k in range(inner):
            aik = arow[k]
            if not aik:
                continue
            brow = b[k]
            for j in range(cols):
                if brow[j]:
                    orow[j] += aik * brow[j]
    return out


def rref(mat: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form (copy) and the list of pivot columns."""
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(mat: Matrix) -> int:
    return len(rref(mat)[1])


def nullspace(mat: Matrix) -> list[list[Fraction]]:
    """Basis of {x : mat @ x = 0}, one vector per free column."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    m, pivots = rref(mat)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * cols
        vec[free] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -m[r][free]
        basis.append(vec)
    return basis


def solve(mat: Matrix, rhs: list[Fraction]) -> list[Fraction] | None:
    """One solution of mat @ x = rhs, or None if inconsistent."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    aug = [mat[i][:] + [rhs[i]] for i in range(rows)]
    m, pivots = rref(aug)
    for r in range(len(pivots), rows):
        if m[r][cols]:
            return None
    if pivots and pivots[-1] == cols:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = m[r][cols]
    return x


def invert(mat: Matrix) -> Matrix:
    """Inverse of a square matrix; raises on singular input."""
    n = len(mat)
    aug = [mat[i][:] + identity(n)[i] for i in range(n)]
    m, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in m]


def row_space_contains(rows: Matrix, vec: list[Fraction]) -> bool:
    if not rows:
        return not any(vec)
    m, pivots = rref(rows)
    residual = vec[:]
    for r, c in enumerate(pivots):
        if residual[c]:
            f = residual[c]
            residual = [a - f * b for a, b in zip(residual, m[r])]
    return not any(residual)


def same_row_space(a: Matrix, b: Matrix) -> bool:
    """Exact span equality of two row collections (over Q)."""
    if not a and not b:
        return True
    cols = len(a[0]) if a else len(b[0])
    ra = rref(a)[0] if a else []
    rb = rref(b)[0] if b else []
    ra = [row for row in ra if any(row)]
    rb = [row for row in rb if any(row)]
    return ra == rb and all(len(r) == cols for r in ra + rb)
