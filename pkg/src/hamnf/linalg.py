"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are taken left to right, so the free columns are the rightmost
    ones in each dependency.
    """
    A = [[Fraction(x) for x in row] for row in rows]
    if not A:
        return A, []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


@dataclass
class AffineSolution:
    """All solutions ``particular + sum_k t_k * null[k]`` of ``A x = b``."""

    particular: list[Fraction]
    null: list[list[Fraction]]
    free_columns: list[int]


def solve_affine(A: list[list[Fraction]], b: list[Fraction]) -> AffineSolution | None:
    """General solution of ``A x = b``; ``None`` when inconsistent.

    Each null-space vector has a 1 in its own free column and 0 in the
    other free columns, so setting every parameter to 0 zeroes all free
    unknowns in the particular solution.
    """
    if not A:
        return AffineSolution([], [], [])
    ncols = len(A[0])
    aug = [list(row) + [Fraction(bi)] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    free = [c for c in range(ncols) if c not in pivots]
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = R[i][ncols]
    null = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -R[i][fc]
        null.append(v)
    return AffineSolution(x, null, free)
