"""Exact dense linear algebra over a Field (row-reduction based).

Matrices are lists of rows; every function takes the column count explicitly
where a matrix may have no rows.
"""

from __future__ import annotations

from typing import Sequence

from .field import Field


def zeros(field: Field, m: int, n: int) -> list:
    z = field.zero
    return [[z] * n for _ in range(m)]


def identity(field: Field, n: int) -> list:
    M = zeros(field, n, n)
    for i in range(n):
        M[i][i] = field.one
    return M


def transpose(M: Sequence[Sequence], ncols: int | None = None) -> list:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(field: Field, A, B, inner: int | None = None, ncols: int | None = None) -> list:
    if not A:
        return []
    n = ncols if ncols is not None else (len(B[0]) if B else 0)
    z = field.zero
    out = []
    for row in A:
        r = [z] * n
        for k, a in enumerate(row):
            if a:
                bk = B[k]
                for j in range(n):
                    b = bk[j]
                    if b:
                        r[j] = r[j] + a * b
        out.append(r)
    return out


def matvec(field: Field, A, v) -> list:
    z = field.zero
    out = []
    for row in A:
        s = z
        for a, b in zip(row, v):
            if a and b:
                s = s + a * b
        out.append(s)
    return out


def is_zero_matrix(M) -> bool:
    return all(not x for row in M for x in row)


def rref(field: Field, M, ncols: int | None = None):
    """Reduced row echelon form. Returns (rows, pivot_columns); zero rows dropped."""
    rows = [list(r) for r in M]
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    pivots = []
    r = 0
    for c in range(n):
        p = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = field.one / rows[r][c]
        pr = [x * inv if x else x for x in rows[r]]
        rows[r] = pr
        nz = [j for j in range(c, n) if pr[j]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    for j in nz:
                        ri[j] = ri[j] - f * pr[j]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(field: Field, M, ncols: int | None = None) -> int:
    return len(rref(field, M, ncols)[1])


def nullspace(field: Field, M, ncols: int) -> list:
    """Basis of {x : M x = 0}, one vector per free column, in the standard RREF form."""
    R, piv = rref(field, M, ncols)
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [field.zero] * ncols
        v[free] = field.one
        for row, pc in zip(R, piv):
            if row[free]:
                v[pc] = -row[free]
        basis.append(v)
    return basis


def solve(field: Field, A, b, ncols: int):
    """One solution x of A x = b, or None if inconsistent."""
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(field, aug, ncols + 1)
    if piv and piv[-1] == ncols:
        return None
    x = [field.zero] * ncols
    for row, pc in zip(R, piv):
        x[pc] = row[ncols]
    return x


def inverse(field: Field, A) -> list:
    n = len(A)
    aug = [list(row) + idr for row, idr in zip(A, identity(field, n))]
    R, piv = rref(field, aug, 2 * n)
    if n and (len(piv) < n or piv[n - 1] != n - 1):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def det(field: Field, A) -> object:
    n = len(A)
    M = [list(r) for r in A]
    d = field.one
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c]), None)
        if p is None:
            return field.zero
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d = d * M[c][c]
        inv = field.one / M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] * inv
            if f:
                for j in range(c, n):
                    M[i][j] = M[i][j] - f * M[c][j]
    return d


def is_invertible(field: Field, A) -> bool:
    n = len(A)
    if any(len(r) != n for r in A):
        return False
    return rank(field, A, n) == n
