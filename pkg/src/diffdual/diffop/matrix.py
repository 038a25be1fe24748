"""Matrices of differential operators between free modules of finite rank."""

from __future__ import annotations

from typing import Sequence

from ..ring.polynomial import Polynomial, PolynomialRing
from .operator import DividedPowerOp, adjoint, apply, compose


class MatrixDiffOp:
    """An m x n grid of DividedPowerOp acting on column vectors of length n."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: PolynomialRing, entries: Sequence[Sequence[DividedPowerOp]], rows=None, cols=None):
        grid = [list(r) for r in entries]
        self.rows = len(grid) if rows is None else rows
        self.cols = (len(grid[0]) if grid else 0) if cols is None else cols
        if len(grid) != self.rows or any(len(r) != self.cols for r in grid):
            raise ValueError("ragged operator matrix")
        for r in grid:
            for e in r:
                if e.ring != ring:
                    raise ValueError("all entries must share the ambient variables")
        self.ring = ring
        self.entries = grid

    @classmethod
    def zero(cls, ring, rows, cols):
        return cls(ring, [[DividedPowerOp.zero(ring) for _ in range(cols)] for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [[DividedPowerOp.identity(ring) if i == j else DividedPowerOp.zero(ring)
                           for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def scalar(cls, op: DividedPowerOp):
        return cls(op.ring, [[op]], 1, 1)

    @classmethod
    def from_functions(cls, ring, M):
        """Order-zero operator given by a matrix of functions."""
        rows = len(M)
        cols = len(M[0]) if M else 0
        return cls(ring, [[DividedPowerOp.multiplication(ring(f)) for f in row] for row in M], rows, cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def order(self) -> int:
        return max((e.order() for r in self.entries for e in r), default=-1)

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def __eq__(self, other):
        return (isinstance(other, MatrixDiffOp) and self.ring == other.ring and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __add__(self, other):
        self._same_shape(other)
        return MatrixDiffOp(self.ring, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
                            self.rows, self.cols)

    def __neg__(self):
        return MatrixDiffOp(self.ring, [[-a for a in r] for r in self.entries], self.rows, self.cols)

    def __sub__(self, other):
        return self + (-other)

    def _same_shape(self, other):
        if self.ring != other.ring or self.rows != other.rows or self.cols != other.cols:
            raise ValueError("operator matrices of different shape or ambient")

    def apply(self, vec: Sequence[Polynomial]) -> list:
        if len(vec) != self.cols:
            raise ValueError("vector length %d, operator has %d columns" % (len(vec), self.cols))
        out = []
        for r in self.entries:
            acc = self.ring.zero()
            for op, v in zip(r, vec):
                if v and op.terms:
                    acc = acc + apply(op, v)
            out.append(acc)
        return out

    def __call__(self, vec):
        return self.apply(vec)

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in r) for r in self.entries) + "]"

    __repr__ = __str__


def matrix_compose(A: MatrixDiffOp, B: MatrixDiffOp) -> MatrixDiffOp:
    if A.cols != B.rows:
        raise ValueError("composition dimensions do not match: %dx%d after %dx%d" % (A.rows, A.cols, B.rows, B.cols))
    if A.ring != B.ring:
        raise ValueError("ambient mismatch")
    ring = A.ring
    out = []
    for i in range(A.rows):
        row = []
        for j in range(B.cols):
            acc = DividedPowerOp.zero(ring)
            for k in range(A.cols):
                a, b = A.entries[i][k], B.entries[k][j]
                if a.terms and b.terms:
                    acc = acc + compose(a, b)
            row.append(acc)
        out.append(row)
    return MatrixDiffOp(ring, out, A.rows, B.cols)


def matrix_adjoint(D: MatrixDiffOp) -> MatrixDiffOp:
    """Transpose of the entrywise adjoint."""
    return MatrixDiffOp(D.ring, [[adjoint(D.entries[i][j]) for i in range(D.rows)] for j in range(D.cols)],
                        D.cols, D.rows)
