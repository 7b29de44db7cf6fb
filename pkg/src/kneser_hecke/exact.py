"""Exact linear algebra over the rationals (Python ints and Fractions only)."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

Matrix = list[list[Fraction]]


def to_fractions(M: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in M]


def rref(M: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = to_fractions(M)
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        lead = A[r][c]
        if lead != 1:
            A[r] = [x / lead for x in A[r]]
        row = A[r]
        nz = [j for j in range(c, ncols) if row[j] != 0]
        for i in range(nrows):
            if i != r:
                f = A[i][c]
                if f != 0:
                    Ai = A[i]
                    for j in nz:
                        Ai[j] -= f * row[j]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    A = [list(map(int, row)) for row in M]
    if not A or not A[0]:
        return 0
    nrows, ncols = len(A), len(A[0])
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        for i in range(r + 1, nrows):
            a = A[i][c]
            Ai, Ar = A[i], A[r]
            for j in range(c, ncols):
                Ai[j] = (piv * Ai[j] - a * Ar[j]) // prev
        prev = piv
        r += 1
    return r


def nullspace(M: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}``."""
    if not M:
        return []
    ncols = len(M[0])
    R, pivots = rref(M)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -R[i][f]
        basis.append(x)
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``A x = b`` (free variables set to zero), or None."""
    ncols = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = R[i][ncols]
    return x


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str | int) -> Fraction:
    return Fraction(s)
