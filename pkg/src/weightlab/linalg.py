"""Sparse exact matrices and column-reduction based linear algebra over Q.

Entries are Python ints or ``fractions.Fraction``; zeros are never stored.
Vectors are plain ``dict`` objects mapping an index to a nonzero entry.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable

import numpy as np

from .kernel import reduce_columns

__all__ = [
    "SparseMatrix",
    "Reduction",
    "rank",
    "solve",
    "nullspace",
    "clean",
    "vec_add",
    "vec_scale",
    "vec_sub",
]


def clean(x):
    """Demote a Fraction with unit denominator to int."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def vec_add(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for k, v in b.items():
        y = out.get(k, 0) + scale * v
        if y:
            out[k] = clean(y)
        else:
            out.pop(k, None)
    return out


def vec_sub(a: dict, b: dict) -> dict:
    return vec_add(a, b, -1)


def vec_scale(a: dict, c) -> dict:
    if not c:
        return {}
    return {k: clean(c * v) for k, v in a.items()}


class SparseMatrix:
    """Column-major sparse matrix with exact entries."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: list[dict] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise ValueError("column count mismatch")
        self.cols = cols

    # construction -----------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "SparseMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[tuple]) -> "SparseMatrix":
        cols = [{} for _ in range(ncols)]
        for i, j, v in entries:
            y = cols[j].get(i, 0) + v
            if y:
                cols[j][i] = clean(y)
            else:
                cols[j].pop(i, None)
        return cls(nrows, ncols, cols)

    @classmethod
    def from_dense(cls, rows) -> "SparseMatrix":
        arr = np.asarray(rows, dtype=object)
        if arr.size == 0:
            arr = arr.reshape((arr.shape[0] if arr.ndim else 0, arr.shape[1] if arr.ndim > 1 else 0))
        nrows, ncols = arr.shape
        cols = []
        for j in range(ncols):
            cols.append({i: clean(arr[i, j]) for i in range(nrows) if arr[i, j]})
        return cls(nrows, ncols, cols)

    @classmethod
    def from_columns(cls, nrows: int, cols: list[dict]) -> "SparseMatrix":
        return cls(nrows, len(cols), [dict(c) for c in cols])

    # views --------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=object)
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i, j] = v
        return out

    def to_lists(self) -> list[list]:
        return self.to_dense().tolist()

    def rows(self) -> list[dict]:
        out = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows, self.rows())

    T = property(transpose)

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # arithmetic -------------------------------------------------------
    def apply(self, vec: dict) -> dict:
        out: dict = {}
        cols = self.cols
        for j, x in vec.items():
            if not x:
                continue
            for i, v in cols[j].items():
                y = out.get(i, 0) + x * v
                if y:
                    out[i] = y
                else:
                    del out[i]
        return {i: clean(v) for i, v in out.items()}

    def __matmul__(self, other):
        if isinstance(other, dict):
            return self.apply(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return SparseMatrix(self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return SparseMatrix(self.nrows, self.ncols,
                            [vec_add(a, b) for a, b in zip(self.cols, other.cols)])

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return SparseMatrix(self.nrows, self.ncols,
                            [vec_add(a, b, -1) for a, b in zip(self.cols, other.cols)])

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def scale(self, c) -> "SparseMatrix":
        return SparseMatrix(self.nrows, self.ncols, [vec_scale(col, c) for col in self.cols])

    def submatrix(self, rows: list[int] | None, cols: list[int] | None) -> "SparseMatrix":
        """Restrict to the given row and column index lists (in that order)."""
        cols = list(range(self.ncols)) if cols is None else cols
        if rows is None:
            return SparseMatrix(self.nrows, len(cols), [dict(self.cols[j]) for j in cols])
        where = {r: i for i, r in enumerate(rows)}
        out = []
        for j in cols:
            out.append({where[i]: v for i, v in self.cols[j].items() if i in where})
        return SparseMatrix(len(rows), len(cols), out)

    @staticmethod
    def block(row_sizes: list[int], col_sizes: list[int], blocks: dict) -> "SparseMatrix":
        """Assemble from ``{(bi, bj): SparseMatrix}`` with the given block sizes."""
        roff = np.concatenate([[0], np.cumsum(row_sizes, dtype=np.int64)]).tolist()
        coff = np.concatenate([[0], np.cumsum(col_sizes, dtype=np.int64)]).tolist()
        cols = [{} for _ in range(int(coff[-1]))]
        for (bi, bj), m in blocks.items():
            if m.shape != (row_sizes[bi], col_sizes[bj]):
                raise ValueError(f"block {(bi, bj)} has shape {m.shape}")
            r0, c0 = roff[bi], coff[bj]
            for j, col in enumerate(m.cols):
                target = cols[c0 + j]
                for i, v in col.items():
                    y = target.get(r0 + i, 0) + v
                    if y:
                        target[r0 + i] = y
                    else:
                        target.pop(r0 + i, None)
        return SparseMatrix(int(roff[-1]), int(coff[-1]), cols)


def _to_kernel(col: dict) -> tuple[tuple[list, list], int]:
    """Integer-scale a column; returns the kernel column and the scale factor."""
    den = 1
    for v in col.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    keys = sorted(col)
    if den == 1:
        return (keys, [int(col[k]) for k in keys]), 1
    return (keys, [int(col[k] * den) for k in keys]), den


class Reduction:
    """Left-to-right column reduction ``R = M V`` of a sparse matrix over Q.

    Column ``j`` of ``R`` either vanishes (then ``V[j]`` spans part of the
    kernel) or has a distinct lowest row ``lows[j]``.
    """

    def __init__(self, M: SparseMatrix, track: bool = True):
        self.matrix = M
        packed = [_to_kernel(c) for c in M.cols]
        R, V, lows = reduce_columns([p[0] for p in packed], track)
        self.R = [dict(zip(*c)) for c in R]
        self.lows = lows
        self.pivot_of = {low: j for j, low in enumerate(lows) if low >= 0}
        if track:
            scales = [p[1] for p in packed]
            self.V = []
            for c in V:
                if all(scales[i] == 1 for i in c[0]):
                    self.V.append(dict(zip(*c)))
                else:
                    self.V.append({i: scales[i] * v for i, v in zip(*c)})
        else:
            self.V = None

    @property
    def rank(self) -> int:
        return len(self.pivot_of)

    def kernel_basis(self) -> list[dict]:
        if self.V is None:
            raise ValueError("reduction was run without tracking")
        return [self.V[j] for j, low in enumerate(self.lows) if low < 0]

    def reduce(self, b: dict, want_solution: bool = True):
        """Eliminate ``b`` against the pivots.

        Returns ``(remainder, x)`` with ``b = M x + remainder`` where the
        remainder's lowest row is not a pivot row.
        """
        r = {k: v for k, v in b.items() if v}
        x: dict = {}
        while r:
            low = max(r)
            j = self.pivot_of.get(low)
            if j is None:
                break
            coef = Fraction(r[low]) / self.R[j][low]
            r = vec_add(r, self.R[j], -coef)
            if want_solution:
                x = vec_add(x, self.V[j], coef)
        return r, x

    def solve(self, b: dict) -> dict | None:
        """A solution of ``M x = b`` over Q, or ``None`` when insoluble."""
        r, x = self.reduce(b)
        return None if r else x

    def contains(self, b: dict) -> bool:
        r, _ = self.reduce(b, want_solution=False)
        return not r


def rank(M: SparseMatrix) -> int:
    if M.ncols == 0 or M.nrows == 0:
        return 0
    return Reduction(M, track=False).rank


def solve(M: SparseMatrix, b: dict) -> dict | None:
    return Reduction(M).solve(b)


def nullspace(M: SparseMatrix) -> list[dict]:
    return Reduction(M).kernel_basis()
