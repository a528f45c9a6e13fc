"""Independent reference computations for the tests.

Everything here is dense linear algebra over Fraction written from the
definitions, sharing no code with the package's reduction kernel.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def _rref_rows(rows: list[dict]) -> list[dict]:
    """Row echelon basis of the span of sparse Fraction vectors."""
    pivots: dict = {}
    for r in rows:
        v = {i: Fraction(x) for i, x in r.items() if x}
        while v:
            p = min(v)
            if p not in pivots:
                c = v[p]
                pivots[p] = {i: x / c for i, x in v.items()}
                break
            w, c = pivots[p], v[p]
            for i, x in w.items():
                y = v.get(i, 0) - c * x
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
    return list(pivots.values())


def span_rank(vectors: list[dict]) -> int:
    return len(_rref_rows(vectors))


def dense_rank(A) -> int:
    A = np.asarray(A, dtype=object)
    if A.size == 0:
        return 0
    return span_rank([{j: x for j, x in enumerate(row) if x} for row in A])


def kernel(cols: list[dict], rows: set | None = None) -> list[dict]:
    """Basis of {x : sum_j x_j cols[j] restricted to ``rows`` = 0} over Q."""
    # eliminate on [col restricted | e_j] and keep combinations that vanish
    aug = []
    for j, c in enumerate(cols):
        v = {("a", i): Fraction(x) for i, x in c.items() if x and (rows is None or i in rows)}
        v[("b", j)] = Fraction(1)
        aug.append(v)
    pivots: dict = {}
    out = []
    for v in aug:
        while True:
            top = [k for k in v if k[0] == "a"]
            if not top:
                out.append({k[1]: x for k, x in v.items()})
                break
            p = min(top)
            if p not in pivots:
                pivots[p] = v
                break
            w = pivots[p]
            c = v[p] / w[p]
            for k, x in w.items():
                y = v.get(k, 0) - c * x
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
    return out


def homology_ranks(dims: dict, boundary) -> dict:
    """Betti numbers over Q of a chain complex given by dims and ∂_k matrices."""
    out = {}
    for k, n in dims.items():
        if not n:
            continue
        d = boundary(k)
        z = n - dense_rank(d.to_dense()) if d.nrows and d.ncols else n
        up = boundary(k + 1)
        b = dense_rank(up.to_dense()) if up.nrows and up.ncols else 0
        if z - b:
            out[k] = z - b
    return out


def _apply(D, vec: dict) -> dict:
    out: dict = {}
    for j, x in vec.items():
        for i, y in D.cols[j].items():
            out[i] = out.get(i, 0) + x * y
    return {i: x for i, x in out.items() if x}


class FilteredOracle:
    """E^r of the column filtration from Z^r_p = {x ∈ F_p : Dx ∈ F_{p-r}}.

    E^r_p = Z^r_p / (Z^{r-1}_{p-1} + D Z^{r-1}_{p+r-1}) in each degree.
    """

    def __init__(self, T):
        self.T = T
        self.f = {k: T.filtration(k) for k in T.degrees}
        self._Z: dict = {}

    def _fil(self, k):
        return self.f.get(k, [])

    def Z(self, k: int, p: int, r) -> list[dict]:
        key = (k, p, r)
        if key not in self._Z:
            f = self._fil(k)
            cols_idx = [i for i, s in enumerate(f) if s <= p]
            if not cols_idx:
                self._Z[key] = []
                return []
            D = self.T.D(k)
            fl = self._fil(k - 1)
            rows = {i for i, s in enumerate(fl) if s > p - r}
            sub = [D.cols[i] for i in cols_idx]
            ker = kernel(sub, rows)
            self._Z[key] = [{cols_idx[a]: x for a, x in v.items()} for v in ker]
        return self._Z[key]

    def E(self, r) -> dict:
        """``{(s, t): rank}`` of E^r; r may be ``float('inf')``."""
        out = {}
        ss = [s for k in self.T.degrees for s in self._fil(k)]
        if not ss:
            return out
        lo, hi = min(ss), max(ss)
        if r == float("inf"):
            r = hi - lo + 2
        for k in self.T.degrees:
            for p in range(lo, hi + 1):
                Zr = self.Z(k, p, r)
                if not Zr:
                    continue
                low = list(self.Z(k, p - 1, r - 1))
                if k + 1 in self.f:
                    low += [_apply(self.T.D(k + 1), z) for z in self.Z(k + 1, p + r - 1, r - 1)]
                e = span_rank(Zr + low) - span_rank(low)
                if e:
                    out[(p, k - p)] = e
        return out

    def weight_ranks(self, k: int) -> dict:
        """``{ℓ: rank Gr^W_ℓ H_k}`` with W_ℓ the image of H_k(F_{ℓ+k})."""
        f = self._fil(k)
        if not f:
            return {}
        B = [_apply(self.T.D(k + 1), {j: 1}) for j in range(self.T.dim(k + 1))] if k + 1 in self.f else []
        b = span_rank(B)
        out, prev = {}, 0
        for p in range(min(f), max(f) + 1):
            dim = span_rank(self.Z(k, p, float("inf")) + B) - b
            if dim - prev:
                out[p - k] = dim - prev
            prev = dim
        return out


def e_r_ranks(T, r) -> dict:
    return FilteredOracle(T).E(r)


def snf_invariants(A) -> tuple:
    """Invariant factors > 1 of an integer matrix (sympy Smith normal form)."""
    import sympy
    from sympy.matrices.normalforms import smith_normal_form

    A = np.asarray(A, dtype=object)
    if A.size == 0:
        return ()
    S = smith_normal_form(sympy.Matrix(A.tolist()), domain=sympy.ZZ)
    diag = [abs(int(S[i, i])) for i in range(min(S.shape))]
    return tuple(d for d in diag if d > 1)
