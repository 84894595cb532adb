"""Exact linear algebra over Q with fraction-free row reduction."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def _integer_row(row: Sequence) -> list[int]:
    den = 1
    for x in row:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    out = [int(x * den) for x in row]
    g = 0
    for x in out:
        g = gcd(g, x)
    if g > 1:
        out = [x // g for x in out]
    return out


def echelon(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced echelon form by fraction-free elimination.

    Returns integer rows (each pivot row has a positive pivot and zeros in
    the other pivot columns) and the list of pivot columns.
    """
    mat = [_integer_row(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        prow = mat[r]
        if prow[c] < 0:
            prow = [-x for x in prow]
            mat[r] = prow
        pv = prow[c]
        for i in range(len(mat)):
            if i == r or not mat[i][c]:
                continue
            f = mat[i][c]
            row = [pv * x - f * y for x, y in zip(mat[i], prow)]
            g = 0
            for x in row:
                g = gcd(g, x)
            mat[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(echelon(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Basis of {x : rows @ x = 0} and its free columns.

    Basis vector ``j`` is 1 at free column ``free[j]`` and 0 at the other
    free columns.
    """
    ech, pivots = echelon(rows, ncols)
    pset = set(pivots)
    free = [c for c in range(ncols) if c not in pset]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(ech, pivots):
            if row[f]:
                v[pc] = Fraction(-row[f], row[pc])
        basis.append(v)
    return basis, free


def solve(columns: Sequence[Sequence], target: Sequence) -> list[Fraction]:
    """Coefficients c with sum_j c_j * columns[j] == target (exact)."""
    n = len(columns)
    m = len(target)
    aug = [[Fraction(columns[j][i]) for j in range(n)] + [Fraction(target[i])] for i in range(m)]
    ech, pivots = echelon(aug, n + 1)
    if n in pivots:
        raise ValueError("target is not in the span")
    if len(pivots) < n:
        raise ValueError("columns are linearly dependent")
    return [Fraction(row[n], row[c]) for row, c in zip(ech, pivots)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def upper_unitriangular_inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse of an upper triangular matrix with ones on the diagonal."""
    n = len(m)
    for i in range(n):
        if m[i][i] != 1 or any(m[i][j] for j in range(i)):
            raise ValueError("matrix is not upper unitriangular")
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    # back substitution column by column: inv[i][j] = -sum_{i<l<=j} m[i][l] inv[l][j]
    for j in range(n):
        for i in range(j - 1, -1, -1):
            inv[i][j] = -sum((m[i][l] * inv[l][j] for l in range(i + 1, j + 1)), Fraction(0))
    return inv
