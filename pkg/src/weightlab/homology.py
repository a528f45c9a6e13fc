"""Exact homology over Z and Q with generators and induced maps.

Strategy: unit-pivot Gaussian elimination of the chain complex (keeping
track of the inclusion of the small complex and the projection onto it),
then a dense Smith normal form on what is left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from .errors import NotAComplex, NotChainMap
from .linalg import SparseMatrix, vec_add
from .simplicial import Chain, SimplicialComplex, _boundary

__all__ = [
    "smith_normal_form",
    "invariant_factors",
    "ChainComplex",
    "ChainMap",
    "HomologyGroup",
    "InducedMap",
    "homology",
    "homology_all",
    "induced_map",
    "Homology",
]


# Smith normal form -------------------------------------------------------

def _snf(A: np.ndarray):
    """Return ``(P, Pinv, D, Q, Qinv)`` with ``P @ A @ Q = D``."""
    A = np.array(A, dtype=object)
    m, n = A.shape
    D = A.copy()
    P = np.eye(m, dtype=object)
    Pinv = np.eye(m, dtype=object)
    Q = np.eye(n, dtype=object)
    Qinv = np.eye(n, dtype=object)

    def swap_rows(i, j):
        if i != j:
            D[[i, j]] = D[[j, i]]
            P[[i, j]] = P[[j, i]]
            Pinv[:, [i, j]] = Pinv[:, [j, i]]

    def swap_cols(i, j):
        if i != j:
            D[:, [i, j]] = D[:, [j, i]]
            Q[:, [i, j]] = Q[:, [j, i]]
            Qinv[[i, j]] = Qinv[[j, i]]

    def add_row(src, dst, c):  # row dst += c * row src
        D[dst] += c * D[src]
        P[dst] += c * P[src]
        Pinv[:, src] -= c * Pinv[:, dst]

    def add_col(src, dst, c):  # col dst += c * col src
        D[:, dst] += c * D[:, src]
        Q[:, dst] += c * Q[:, src]
        Qinv[src] -= c * Qinv[dst]

    def neg_row(i):
        D[i] = -D[i]
        P[i] = -P[i]
        Pinv[:, i] = -Pinv[:, i]

    t = 0
    while t < min(m, n):
        block = D[t:, t:]
        nz = np.argwhere(block != 0)
        if nz.size == 0:
            break
        # minimal-|entry| pivot
        absvals = [abs(block[i, j]) for i, j in nz]
        i, j = nz[int(np.argmin(absvals))]
        swap_rows(t, t + int(i))
        swap_cols(t, t + int(j))
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i, t]:
                    q = D[i, t] // D[t, t]
                    add_row(t, i, -q)
                    if D[i, t]:
                        done = False
            for j in range(t + 1, n):
                if D[t, j]:
                    q = D[t, j] // D[t, t]
                    add_col(t, j, -q)
                    if D[t, j]:
                        done = False
            if done:
                # enforce divisibility of the remaining block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i, j] % D[t, t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # move the smallest nonzero entry of row/column t to the pivot
            cands = [(abs(D[i, t]), i, t) for i in range(t, m) if D[i, t]]
            cands += [(abs(D[t, j]), t, j) for j in range(t, n) if D[t, j]]
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
        if D[t, t] < 0:
            neg_row(t)
        t += 1
    return P, Pinv, D, Q, Qinv


def smith_normal_form(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smith normal form ``M = U @ D @ V`` with ``U``, ``V`` unimodular.

    Accepts a ``SparseMatrix`` or anything ``numpy`` turns into a 2-d array.
    """
    A = M.to_dense() if isinstance(M, SparseMatrix) else np.array(M, dtype=object)
    if A.ndim != 2:
        A = A.reshape((A.shape[0], -1)) if A.size else np.zeros((0, 0), dtype=object)
    P, Pinv, D, Q, Qinv = _snf(A)
    return Pinv, D, Qinv


def invariant_factors(M) -> tuple[int, ...]:
    _, D, _ = smith_normal_form(M)
    return tuple(int(D[i, i]) for i in range(min(D.shape)) if D[i, i])


# chain complexes ---------------------------------------------------------

@dataclass(eq=False)
class ChainComplex:
    """Finitely generated free chain complex ``d[k] : C_k → C_{k-1}``.

    ``dims`` maps degree to rank; degrees not listed are zero.  ``host`` is
    an optional simplicial complex whose k-simplices index ``C_k``.
    """

    dims: dict[int, int]
    d: dict[int, SparseMatrix] = field(default_factory=dict)
    host: SimplicialComplex | None = None
    labels: dict[int, list] | None = None

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def boundary(self, k: int) -> SparseMatrix:
        m = self.d.get(k)
        if m is None:
            return SparseMatrix(self.dim(k - 1), self.dim(k))
        return m

    @property
    def degrees(self) -> list[int]:
        return sorted(k for k, v in self.dims.items() if v)

    @classmethod
    def from_simplicial(cls, K: SimplicialComplex) -> "ChainComplex":
        dims = {k: K.n(k) for k in range(K.dim + 1)}
        d = {k: _boundary(K, k) for k in range(1, K.dim + 1)}
        return cls(dims, d, host=K)

    @classmethod
    def relative(cls, K: SimplicialComplex, L: SimplicialComplex) -> "ChainComplex":
        """Quotient complex ``C(K)/C(L)`` on the simplices of K not in L."""
        keep = {k: [i for i, s in enumerate(K.simplices(k)) if s not in L] for k in range(K.dim + 1)}
        dims = {k: len(v) for k, v in keep.items()}
        d = {}
        for k in range(1, K.dim + 1):
            d[k] = _boundary(K, k).submatrix(keep[k - 1], keep[k])
        labels = {k: [K.simplices(k)[i] for i in v] for k, v in keep.items()}
        return cls(dims, d, labels=labels)

    def check(self) -> None:
        for k in self.degrees:
            a, b = self.boundary(k), self.boundary(k + 1)
            if a.ncols != self.dim(k) or b.nrows != self.dim(k):
                raise NotAComplex(f"shape mismatch at degree {k}")
            if not (a @ b).is_zero():
                raise NotAComplex(f"∂∂ ≠ 0 at degree {k}")

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in self.dims.items())


@dataclass(eq=False)
class ChainMap:
    """Degree-preserving map ``f[k] : S_k → T_k`` between chain complexes."""

    source: ChainComplex
    target: ChainComplex
    maps: dict[int, SparseMatrix]

    def at(self, k: int) -> SparseMatrix:
        m = self.maps.get(k)
        if m is None:
            return SparseMatrix(self.target.dim(k), self.source.dim(k))
        return m

    def check(self, degrees=None) -> None:
        degs = degrees if degrees is not None else sorted(set(self.source.degrees) | set(self.target.degrees))
        for k in degs:
            lhs = self.target.boundary(k) @ self.at(k)
            rhs = self.at(k - 1) @ self.source.boundary(k)
            if lhs != rhs:
                raise NotChainMap(f"f does not commute with ∂ in degree {k}")


@dataclass(eq=False)
class HomologyGroup:
    """Homology in one degree: rank, torsion and generator cycles."""

    degree: int
    rank: int
    torsion: tuple[int, ...]
    generators: list
    torsion_generators: list = field(default_factory=list)
    ring: str = "Z"
    _engine: Any = field(default=None, repr=False)

    def coordinates(self, cycle) -> list:
        """Free-part coordinates of a cycle (Chain or index vector)."""
        free, _ = self._engine.coordinates(self.degree, _as_vector(cycle))
        return free


@dataclass(eq=False)
class InducedMap:
    source: HomologyGroup
    target: HomologyGroup
    matrix: np.ndarray


def _as_vector(c) -> dict:
    return c.to_vector() if isinstance(c, Chain) else dict(c)


class Homology:
    """Homology of a chain complex in every degree, computed once."""

    def __init__(self, C: ChainComplex | SimplicialComplex, track: bool = True):
        if isinstance(C, SimplicialComplex):
            C = ChainComplex.from_simplicial(C)
        C.check()
        self.complex = C
        self.track = track
        self._eliminate()
        self._dense()

    # phase 1: sparse unit-pivot elimination ---------------------------
    def _eliminate(self) -> None:
        C = self.complex
        degs = sorted(set(C.degrees) | {k + 1 for k in C.degrees})
        cols: dict[int, dict[int, dict]] = {}
        rows: dict[int, dict[int, set]] = {}
        for k in degs:
            m = C.boundary(k)
            cols[k] = {j: dict(c) for j, c in enumerate(m.cols)}
            rk: dict[int, set] = {}
            for j, c in cols[k].items():
                for i in c:
                    rk.setdefault(i, set()).add(j)
            rows[k] = rk
        alive = {k: set(range(C.dim(k))) for k in degs + [min(degs, default=0) - 1]}
        iota: dict[int, dict[int, dict]] = {k: {} for k in degs}
        log: list = []
        for k in sorted(degs, reverse=True):
            ck, rk = cols[k], rows[k]
            changed = True
            while changed:
                changed = False
                for b in sorted(ck):
                    col = ck.get(b)
                    if not col:
                        continue
                    units = [i for i, v in col.items() if v == 1 or v == -1]
                    if not units:
                        continue
                    a = min(units, key=lambda i: (len(rk[i]), i))
                    self._pivot(k, a, b, cols, rows, alive, iota, log)
                    changed = True
        self._cols = cols
        self._alive = {k: sorted(v) for k, v in alive.items()}
        self._iota = iota
        self._log = log

    def _pivot(self, k, a, b, cols, rows, alive, iota, log) -> None:
        ck, rk = cols[k], rows[k]
        colb = ck[b]
        eps = colb[a]
        snapshot = dict(colb)
        track = self.track
        for c in list(rk[a]):
            if c == b:
                continue
            colc = ck[c]
            factor = -colc[a] * eps
            for i, v in colb.items():
                y = colc.get(i, 0) + factor * v
                if y:
                    if i not in colc:
                        rk.setdefault(i, set()).add(c)
                    colc[i] = y
                else:
                    colc.pop(i, None)
                    rk[i].discard(c)
            if track:
                ib = iota[k].get(b, {b: 1})
                iota[k][c] = vec_add(iota[k].get(c, {c: 1}), ib, factor)
        for i in colb:
            rk[i].discard(b)
        del ck[b]
        rk.pop(a, None)
        alive[k].discard(b)
        iota[k].pop(b, None)
        # a leaves C_{k-1}: drop its column in d_{k-1}
        if k - 1 in cols and a in cols[k - 1]:
            for i in cols[k - 1][a]:
                rows[k - 1][i].discard(a)
            del cols[k - 1][a]
        alive[k - 1].discard(a)
        if k - 1 in iota:
            iota[k - 1].pop(a, None)
        # b leaves C_k: drop its row in d_{k+1}
        if k + 1 in rows:
            for c in rows[k + 1].pop(b, ()):
                del cols[k + 1][c][b]
        log.append((k, a, b, eps, snapshot))

    # phase 2: dense Smith forms on the remainder ------------------------
    def _dense(self) -> None:
        C = self.complex
        alive = self._alive
        degs = sorted(set(C.degrees))
        self._pos = {k: {x: i for i, x in enumerate(alive.get(k, []))} for k in degs}
        dense = {}
        for k in degs + [max(degs, default=0) + 1]:
            rows_ = alive.get(k - 1, [])
            cols_ = alive.get(k, [])
            A = np.zeros((len(rows_), len(cols_)), dtype=object)
            pos = {x: i for i, x in enumerate(rows_)}
            colmap = self._cols.get(k, {})
            for j, x in enumerate(cols_):
                for i, v in colmap.get(x, {}).items():
                    A[pos[i], j] = v
            dense[k] = A
        self._data = {}
        for k in degs:
            A = dense[k]
            n_k = len(alive.get(k, []))
            if A.size:
                _, _, Dk, Qk, Qinvk = _snf(A)
                r = sum(1 for i in range(min(Dk.shape)) if Dk[i, i])
            else:
                Qk = np.eye(n_k, dtype=object)
                Qinvk = np.eye(n_k, dtype=object)
                r = 0
            Kbasis = Qk[:, r:]
            B = dense.get(k + 1)
            if B is None or B.size == 0:
                Y = np.zeros((n_k - r, B.shape[1] if B is not None else 0), dtype=object)
            else:
                Y = (Qinvk @ B)[r:, :]
            m = n_k - r
            if Y.size:
                P2, P2inv, D2, _, _ = _snf(Y)
                diag = [D2[i, i] for i in range(min(D2.shape)) if D2[i, i]]
            else:
                P2 = np.eye(m, dtype=object)
                P2inv = np.eye(m, dtype=object)
                diag = []
            G = Kbasis @ P2inv if m else np.zeros((n_k, 0), dtype=object)
            if self.track:
                # first nonzero coefficient of each generator positive
                for i in range(m):
                    vec = self._lift(k, G[:, i])
                    if vec and vec[min(vec)] < 0:
                        G[:, i] = -G[:, i]
                        P2[i, :] = -P2[i, :]
            self._data[k] = dict(r=r, Qinv=Qinvk, P2=P2, diag=diag, G=G, m=m)

    # results ------------------------------------------------------------
    def _lift(self, k: int, reduced: np.ndarray) -> dict:
        """Map a vector of the reduced complex back to the original basis."""
        out: dict = {}
        alive = self._alive.get(k, [])
        iota = self._iota.get(k, {})
        for i, x in enumerate(reduced):
            if x:
                out = vec_add(out, iota.get(alive[i], {alive[i]: 1}), x)
        return out

    def _project(self, k: int, vec: dict) -> np.ndarray:
        y = dict(vec)
        for kk, a, b, eps, snap in self._log:
            if kk == k + 1 and a in y:
                y = vec_add(y, snap, -y[a] * eps)
            elif kk == k and b in y:
                del y[b]
        pos = self._pos.get(k, {})
        out = np.zeros(len(pos), dtype=object)
        for i, v in y.items():
            if i not in pos:
                raise ValueError("vector is not a cycle of this complex")
            out[pos[i]] = v
        return out

    def coordinates(self, k: int, vec: dict) -> tuple[list, list]:
        """Coordinates of the class of a cycle: (free part, torsion residues)."""
        data = self._data.get(k)
        if data is None:
            return [], []
        if not self.track:
            raise ValueError("coordinates need a tracked computation")
        v = self._project(k, vec)
        w = data["Qinv"] @ v if len(v) else v
        r = data["r"]
        if any(w[:r]):
            raise ValueError("vector is not a cycle")
        z = data["P2"] @ w[r:] if data["m"] else np.zeros(0, dtype=object)
        diag = data["diag"]
        t = len(diag)
        tors = [int(z[i] % diag[i]) for i in range(t) if diag[i] != 1]
        return [int(x) for x in z[t:]], tors

    @cached_property
    def _groups(self) -> dict:
        out = {}
        for k, data in self._data.items():
            diag = data["diag"]
            t = len(diag)
            free, tors = [], []
            G = data["G"]
            for i in range(G.shape[1]):
                if i < t and diag[i] == 1:
                    continue
                vec = self._lift(k, G[:, i]) if self.track else None
                (tors if i < t else free).append(vec)
            out[k] = (data["m"] - t, tuple(int(x) for x in diag if x != 1), free, tors)
        return out

    def group(self, k: int, ring: str = "Z") -> HomologyGroup:
        rank, torsion, free, tors = self._groups.get(k, (0, (), [], []))
        host = self.complex.host
        if host is not None and self.track:
            free = [Chain.from_vector(host, k, v) for v in free]
            tors = [Chain.from_vector(host, k, v) for v in tors]
        if ring == "Q":
            return HomologyGroup(k, rank, (), free, [], "Q", self)
        return HomologyGroup(k, rank, torsion, free, tors, "Z", self)

    def betti(self) -> dict[int, int]:
        return {k: self._groups[k][0] for k in self._groups}

    def torsion(self) -> dict[int, tuple]:
        return {k: self._groups[k][1] for k in self._groups}


def homology(C: ChainComplex | SimplicialComplex, k: int, ring: str = "Z") -> HomologyGroup:
    """Homology group ``H_k(C)`` over ``ring`` ("Z" or "Q")."""
    return Homology(C).group(k, ring)


def homology_all(C: ChainComplex | SimplicialComplex, track: bool = False) -> dict[int, tuple[int, tuple]]:
    """``{k: (rank, torsion)}`` for every degree with a nonzero chain group."""
    H = Homology(C, track=track)
    return {k: (H.betti()[k], H.torsion()[k]) for k in sorted(H._groups)}


def induced_map(f: ChainMap, k: int, source: Homology | None = None,
                target: Homology | None = None) -> InducedMap:
    """Matrix of ``f_*`` on the free parts of ``H_k`` in the chosen bases."""
    f.check()
    hs = source or Homology(f.source)
    ht = target or Homology(f.target)
    gs, gt = hs.group(k), ht.group(k)
    mat = np.zeros((gt.rank, gs.rank), dtype=object)
    fk = f.at(k)
    for j, g in enumerate(gs.generators):
        image = fk.apply(_as_vector(g))
        coords, _ = ht.coordinates(k, image)
        for i, x in enumerate(coords):
            mat[i, j] = x
    return InducedMap(gs, gt, mat)
