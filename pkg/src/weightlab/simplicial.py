"""Abstract simplicial complexes, exact chains and cochains, subdivision.

Simplices are strictly increasing vertex tuples and are oriented by that
order.  Vertex identifiers only need to be hashable and mutually comparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Any, Iterable, Mapping, NamedTuple

from .errors import DegreeOutOfRange, MalformedSimplex, NotOrientable, NotPseudomanifold
from .linalg import SparseMatrix, clean

__all__ = [
    "Simplex",
    "make_simplex",
    "faces",
    "SimplicialComplex",
    "close_under_faces",
    "boundary_matrix",
    "coboundary_matrix",
    "Chain",
    "Cochain",
    "Bary",
    "SubdivisionMap",
    "barycentric_subdivide",
    "support_intersection_dim",
    "is_dimensionally_transverse",
    "orient",
    "permutation_sign",
]

Simplex = tuple


def make_simplex(vertices: Iterable) -> Simplex:
    """Sort a vertex collection into a simplex, rejecting repeats."""
    s = tuple(sorted(vertices))
    if not s:
        raise MalformedSimplex("empty simplex")
    for a, b in zip(s, s[1:]):
        if a == b:
            raise MalformedSimplex(f"repeated vertex {a!r} in {tuple(vertices)!r}")
    return s


def faces(s: Simplex) -> list[Simplex]:
    """Codimension-one faces, the j-th omitting vertex j."""
    return [s[:j] + s[j + 1:] for j in range(len(s))] if len(s) > 1 else []


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[j] < seq[i]:
                sign = -sign
    return sign


class SimplicialComplex:
    """A finite simplicial complex closed under faces.

    Simplices of each dimension are kept sorted; ``index(k)`` maps a
    k-simplex to its position, which is the basis order of ``C_k``.
    """

    def __init__(self, simplices: Iterable[Simplex] = (), *, closed: bool = False):
        allsimp: set = set()
        if closed:
            allsimp = set(simplices)
        else:
            stack = [make_simplex(s) for s in simplices]
            while stack:
                s = stack.pop()
                if s in allsimp:
                    continue
                allsimp.add(s)
                stack.extend(f for f in faces(s) if f not in allsimp)
        dim = max((len(s) for s in allsimp), default=0) - 1
        by_dim: list[list] = [[] for _ in range(dim + 1)]
        for s in allsimp:
            by_dim[len(s) - 1].append(s)
        for lst in by_dim:
            lst.sort()
        self._by_dim = by_dim
        self._set = frozenset(allsimp)
        self.dim = dim

    # basic access -----------------------------------------------------
    def simplices(self, k: int) -> list[Simplex]:
        if 0 <= k <= self.dim:
            return self._by_dim[k]
        return []

    def n(self, k: int) -> int:
        return len(self.simplices(k))

    @cached_property
    def _indices(self) -> list[dict]:
        return [{s: i for i, s in enumerate(lst)} for lst in self._by_dim]

    def index(self, k: int) -> dict:
        if 0 <= k <= self.dim:
            return self._indices[k]
        return {}

    @cached_property
    def vertices(self) -> list:
        return [s[0] for s in self.simplices(0)]

    @property
    def f_vector(self) -> list[int]:
        return [len(lst) for lst in self._by_dim]

    def all_simplices(self) -> list[Simplex]:
        return [s for lst in self._by_dim for s in lst]

    def __contains__(self, s) -> bool:
        return s in self._set

    def __len__(self) -> int:
        return len(self._set)

    def __iter__(self):
        return iter(self.all_simplices())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._set == other._set

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return f"SimplicialComplex(dim={self.dim}, f={self.f_vector})"

    @property
    def is_empty(self) -> bool:
        return not self._set

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(lst) for k, lst in enumerate(self._by_dim))

    # derived complexes ------------------------------------------------
    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self._set <= other._set

    def intersection(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(self._set & other._set, closed=True)

    def union(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(self._set | other._set, closed=True)

    def full_subcomplex(self, vertices: Iterable) -> "SimplicialComplex":
        vs = set(vertices)
        return SimplicialComplex((s for s in self._set if vs.issuperset(s)), closed=True)

    def is_full_in(self, ambient: "SimplicialComplex") -> bool:
        """Whether this complex is the full subcomplex of ``ambient`` on its vertices."""
        if not self.is_subcomplex_of(ambient):
            return False
        vs = set(self.vertices)
        return all(s in self._set for s in ambient._set if vs.issuperset(s))

    def top_simplices(self) -> list[Simplex]:
        return self.simplices(self.dim)

    def facets(self) -> list[Simplex]:
        """Maximal simplices."""
        covered = set()
        for s in self._set:
            covered.update(faces(s))
        return sorted(s for s in self._set if s not in covered)

    def connected_components(self) -> list["SimplicialComplex"]:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.simplices(1):
            a, b = find(e[0]), find(e[1])
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict = {}
        for s in self._set:
            groups.setdefault(find(s[0]), []).append(s)
        return [SimplicialComplex(groups[r], closed=True) for r in sorted(groups)]


def close_under_faces(generators: Iterable[Iterable]) -> SimplicialComplex:
    """Smallest complex containing the given vertex tuples."""
    return SimplicialComplex([make_simplex(g) for g in generators])


def boundary_matrix(K: SimplicialComplex, k: int) -> SparseMatrix:
    """Matrix of ``∂_k : C_k(K) → C_{k-1}(K)``."""
    if k < 1 or k > K.dim:
        raise DegreeOutOfRange(f"boundary degree {k} outside 1..{K.dim}")
    return _boundary(K, k)


def _boundary(K: SimplicialComplex, k: int) -> SparseMatrix:
    """``∂_k`` for any integer k, zero outside the nontrivial range."""
    rows_idx = K.index(k - 1)
    cols = []
    for s in K.simplices(k):
        col = {}
        if k >= 1:
            for j, f in enumerate(faces(s)):
                col[rows_idx[f]] = -1 if j % 2 else 1
        cols.append(col)
    return SparseMatrix(K.n(k - 1), K.n(k), cols)


def coboundary_matrix(K: SimplicialComplex, i: int) -> SparseMatrix:
    """Matrix of ``δ^i : C^i(K) → C^{i+1}(K)``, the transpose of ``∂_{i+1}``."""
    return _boundary(K, i + 1).transpose()


# chains -----------------------------------------------------------------

def _check_ring(v):
    if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
        raise TypeError(f"coefficients must be int or Fraction, got {type(v).__name__}")
    return clean(v)


@dataclass(frozen=True, eq=False)
class Chain:
    """A simplicial k-chain with exact coefficients on a host complex."""

    complex: SimplicialComplex
    degree: int
    coeffs: Mapping[Simplex, Any] = field(default_factory=dict)

    def __post_init__(self):
        clean_coeffs = {}
        for s, v in self.coeffs.items():
            v = _check_ring(v)
            if not v:
                continue
            if len(s) != self.degree + 1 or s not in self.complex:
                raise MalformedSimplex(f"{s!r} is not a {self.degree}-simplex of the host")
            clean_coeffs[s] = v
        object.__setattr__(self, "coeffs", clean_coeffs)

    @classmethod
    def from_vector(cls, K: SimplicialComplex, k: int, vec: Mapping[int, Any]) -> "Chain":
        simp = K.simplices(k)
        return cls(K, k, {simp[i]: v for i, v in vec.items() if v})

    def to_vector(self) -> dict:
        idx = self.complex.index(self.degree)
        return {idx[s]: v for s, v in self.coeffs.items()}

    def boundary(self) -> "Chain":
        out: dict = {}
        for s, v in self.coeffs.items():
            for j, f in enumerate(faces(s)):
                y = out.get(f, 0) + (-v if j % 2 else v)
                if y:
                    out[f] = y
                else:
                    out.pop(f, None)
        return Chain(self.complex, self.degree - 1, out)

    def is_cycle(self) -> bool:
        return self.degree == 0 or not self.boundary().coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self) -> SimplicialComplex:
        """Closed support: simplices with nonzero coefficient and their faces."""
        return SimplicialComplex(self.coeffs.keys(), closed=False) if self.coeffs else SimplicialComplex()

    def _combine(self, other: "Chain", sign: int) -> "Chain":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        out = dict(self.coeffs)
        for s, v in other.coeffs.items():
            y = out.get(s, 0) + sign * v
            if y:
                out[s] = y
            else:
                out.pop(s, None)
        return Chain(self.complex, self.degree, out)

    def __add__(self, other: "Chain") -> "Chain":
        return self._combine(other, 1)

    def __sub__(self, other: "Chain") -> "Chain":
        return self._combine(other, -1)

    def __neg__(self) -> "Chain":
        return Chain(self.complex, self.degree, {s: -v for s, v in self.coeffs.items()})

    def __rmul__(self, c) -> "Chain":
        return Chain(self.complex, self.degree, {s: c * v for s, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.degree == other.degree and dict(self.coeffs) == dict(other.coeffs)

    def __repr__(self) -> str:
        return f"Chain(degree={self.degree}, terms={len(self.coeffs)})"


@dataclass(frozen=True, eq=False)
class Cochain:
    """A simplicial i-cochain, stored as its values on i-simplices."""

    complex: SimplicialComplex
    degree: int
    values: Mapping[Simplex, Any] = field(default_factory=dict)

    def __post_init__(self):
        vals = {}
        for s, v in self.values.items():
            v = _check_ring(v)
            if not v:
                continue
            if len(s) != self.degree + 1 or s not in self.complex:
                raise MalformedSimplex(f"{s!r} is not a {self.degree}-simplex of the host")
            vals[s] = v
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_vector(cls, K: SimplicialComplex, i: int, vec: Mapping[int, Any]) -> "Cochain":
        simp = K.simplices(i)
        return cls(K, i, {simp[j]: v for j, v in vec.items() if v})

    def to_vector(self) -> dict:
        idx = self.complex.index(self.degree)
        return {idx[s]: v for s, v in self.values.items()}

    def coboundary(self) -> "Cochain":
        vec = coboundary_matrix(self.complex, self.degree).apply(self.to_vector())
        return Cochain.from_vector(self.complex, self.degree + 1, vec)

    def evaluate(self, c: Chain) -> Any:
        if c.degree != self.degree:
            return 0
        return clean(sum(v * self.values.get(s, 0) for s, v in c.coeffs.items()))

    def __add__(self, other: "Cochain") -> "Cochain":
        out = dict(self.values)
        for s, v in other.values.items():
            out[s] = out.get(s, 0) + v
        return Cochain(self.complex, self.degree, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.degree == other.degree and dict(self.values) == dict(other.values)

    def __repr__(self) -> str:
        return f"Cochain(degree={self.degree}, terms={len(self.values)})"


# barycentric subdivision ------------------------------------------------

class Bary(NamedTuple):
    """Barycenter of a simplex; ordered by dimension then vertices."""

    dim: int
    simplex: tuple


@dataclass(frozen=True, eq=False)
class SubdivisionMap:
    """First barycentric subdivision with its subdivision and approximation maps.

    ``carry(k)`` is the chain map ``sd : C_k(K) → C_k(K')``; ``theta(k)`` is
    the chain map induced by the simplicial approximation sending the
    barycenter of a simplex to its largest vertex, with ``θ∘sd = id``.
    """

    source: SimplicialComplex
    target: SimplicialComplex

    def carry(self, k: int) -> SparseMatrix:
        return self._carry[k] if 0 <= k <= self.source.dim else SparseMatrix(self.target.n(k), self.source.n(k))

    def theta(self, k: int) -> SparseMatrix:
        return self._theta[k] if 0 <= k <= self.source.dim else SparseMatrix(self.source.n(k), self.target.n(k))

    @cached_property
    def _carry(self) -> list[SparseMatrix]:
        K, T = self.source, self.target
        out = []
        sd: dict = {}
        for k in range(K.dim + 1):
            idx = T.index(k)
            cols = []
            for s in K.simplices(k):
                b = Bary(k, s)
                if k == 0:
                    chain = {(b,): 1}
                else:
                    chain = {}
                    sign_k = -1 if k % 2 else 1
                    for j, f in enumerate(faces(s)):
                        fs = -1 if j % 2 else 1
                        for piece, v in sd[f].items():
                            key = piece + (b,)
                            chain[key] = chain.get(key, 0) + sign_k * fs * v
                sd[s] = chain
                cols.append({idx[p]: v for p, v in chain.items() if v})
            out.append(SparseMatrix(T.n(k), K.n(k), cols))
        return out

    @cached_property
    def _theta(self) -> list[SparseMatrix]:
        K, T = self.source, self.target
        out = []
        for k in range(K.dim + 1):
            idx = K.index(k)
            cols = []
            for flag in T.simplices(k):
                image = [b.simplex[-1] for b in flag]
                if len(set(image)) < len(image):
                    cols.append({})
                    continue
                target = tuple(sorted(image))
                cols.append({idx[target]: permutation_sign(image)})
            out.append(SparseMatrix(K.n(k), T.n(k), cols))
        return out

    def apply(self, c: Chain) -> Chain:
        vec = self.carry(c.degree).apply(c.to_vector())
        return Chain.from_vector(self.target, c.degree, vec)

    def approximate(self, c: Chain) -> Chain:
        vec = self.theta(c.degree).apply(c.to_vector())
        return Chain.from_vector(self.source, c.degree, vec)

    def subcomplex_image(self, L: SimplicialComplex) -> SimplicialComplex:
        """The subdivision L' of a subcomplex L, as a subcomplex of the target."""
        return SimplicialComplex(
            (flag for flag in self.target if all(b.simplex in L for b in flag)), closed=True)


def barycentric_subdivide(K: SimplicialComplex) -> tuple[SimplicialComplex, SubdivisionMap]:
    """First barycentric subdivision: vertices are the simplices of K."""
    if K.is_empty:
        raise ValueError("cannot subdivide the empty complex")
    cofaces: dict = {}
    for s in K:
        for f in faces(s):
            cofaces.setdefault(f, []).append(s)
    flags = []
    stack = [(v,) for v in K.simplices(0)]
    while stack:
        chain = stack.pop()
        up = cofaces.get(chain[-1])
        if up:
            stack.extend(chain + (s,) for s in up)
        else:
            flags.append(tuple(Bary(len(x) - 1, x) for x in chain))
    T = SimplicialComplex(flags)
    return T, SubdivisionMap(K, T)


# supports ---------------------------------------------------------------

def support_intersection_dim(xi: Chain, L: SimplicialComplex) -> int:
    """Dimension of ``|ξ| ∩ L`` with closed supports; -1 when empty."""
    best = -1
    lv = {s[0] for s in L.simplices(0)}
    for s in xi.coeffs:
        inside = [v for v in s if v in lv]
        for size in range(len(inside), best + 1, -1):
            hit = False
            for sub in combinations(inside, size):
                if sub in L:
                    best = size - 1
                    hit = True
                    break
            if hit:
                break
    return best


def is_dimensionally_transverse(xi: Chain, strata: list[SimplicialComplex],
                                codims: list[int] | None = None) -> bool:
    """Check ``dim |ξ|∩Y^(r) ≤ k-2r`` and ``dim |∂ξ|∩Y^(r) ≤ k-1-2r`` for r ≥ 1.

    ``strata[r-1]`` is the stratum of (real) codimension ``codims[r-1]``,
    which defaults to ``2r``.
    """
    k = xi.degree
    bd = xi.boundary() if k > 0 else None
    for r, Y in enumerate(strata, start=1):
        c = codims[r - 1] if codims is not None else 2 * r
        # an empty intersection is always transverse
        d = support_intersection_dim(xi, Y)
        if d >= 0 and d > k - c:
            return False
        d = support_intersection_dim(bd, Y) if bd is not None else -1
        if d >= 0 and d > k - 1 - c:
            return False
    return True


# orientation ------------------------------------------------------------

def orient(K: SimplicialComplex, seeds: Iterable[Simplex] = ()) -> Chain:
    """Coherent fundamental cycle of a closed orientable pseudomanifold.

    Each connected component is oriented independently; its first top
    simplex gets coefficient +1 unless a seed from ``seeds`` (positively
    oriented top simplices) lies in that component.
    """
    d = K.dim
    top = K.simplices(d)
    if d == 0:
        return Chain(K, 0, {s: 1 for s in top})
    cofaces: dict = {}
    for s in top:
        for j, f in enumerate(faces(s)):
            cofaces.setdefault(f, []).append((s, j))
    for f in K.simplices(d - 1):
        if len(cofaces.get(f, ())) != 2:
            raise NotPseudomanifold(f"codimension-one face {f!r} lies in "
                                    f"{len(cofaces.get(f, ()))} top simplices")
    if any(len(f) != d + 1 for f in K.facets()):
        raise NotPseudomanifold("complex is not pure")
    seedset = set(seeds)
    sign: dict = {}
    for start in top:
        if start in sign:
            continue
        comp = [start]
        sign[start] = 1
        stack = [start]
        while stack:
            s = stack.pop()
            for j, f in enumerate(faces(s)):
                for t, jj in cofaces[f]:
                    if t == s:
                        continue
                    # induced orientations on f must cancel
                    want = -sign[s] * (-1) ** j * (-1) ** jj
                    if t in sign:
                        if sign[t] != want:
                            raise NotOrientable("no coherent orientation exists")
                    else:
                        sign[t] = want
                        comp.append(t)
                        stack.append(t)
        flip = next((sign[s] for s in comp if s in seedset), 1)
        if flip < 0:
            for s in comp:
                sign[s] = -sign[s]
    return Chain(K, d, sign)
