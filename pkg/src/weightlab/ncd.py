"""Normal crossing divisor models: strata, the Mayer-Vietoris operator,
fundamental cycles, the Milnor realization SY and the dual graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .errors import InvalidModel, MissingSelfIntersection, NotOrientable, NotPseudomanifold
from .linalg import SparseMatrix
from .simplicial import (
    Chain,
    SimplicialComplex,
    barycentric_subdivide,
    orient,
)

__all__ = [
    "StratumId",
    "NCDModel",
    "stratum",
    "level",
    "level_basis",
    "mv_operator",
    "fundamental_cycle",
    "MilnorRealization",
    "milnor_realization",
    "sn_inverse",
    "dual_graph",
    "deep_stratum",
]

StratumId = tuple


class NCDModel:
    """Triangulated pair (X, Y) with Y = Y_0 ∪ ... ∪ Y_{m-1} normal crossing.

    ``X`` may be ``None`` for divisor-only models; those support the
    constructions that never look at the ambient space (A(Y), SY, the
    dual graph).  Components are indexed by input order.

    Validation checks that X is a closed orientable pseudomanifold of
    dimension 2n, that every nonempty p-fold intersection is a full
    subcomplex of the expected dimension 2(n-p) and is itself a closed
    orientable pseudomanifold.  When fullness fails and ``repair`` is set,
    the model is barycentrically subdivided once.
    """

    def __init__(self, X: SimplicialComplex | None, components: Iterable[SimplicialComplex], n: int,
                 *, names: list[str] | None = None, orientation_seeds: dict | None = None,
                 flags: dict | None = None, repair: bool = True):
        comps = list(components)
        self.X = X
        self.components = comps
        self.n = n
        self.names = list(names) if names is not None else [f"Y{i}" for i in range(len(comps))]
        self.seeds = dict(orientation_seeds or {})
        self.flags = dict(flags or {})
        self.subdivided = False
        self._strata: dict = {}
        try:
            self._validate()
        except _NotFull as exc:
            if not repair:
                raise InvalidModel(str(exc)) from None
            self._repair()
            try:
                self._validate()
            except _NotFull as exc2:
                raise InvalidModel(f"fullness fails after subdivision: {exc2}") from None

    # validation --------------------------------------------------------
    @property
    def ambient(self) -> SimplicialComplex:
        return self.X if self.X is not None else self.Y

    @property
    def index_set(self) -> list[int]:
        return list(range(len(self.components)))

    def _validate(self) -> None:
        n = self.n
        if n < 1:
            raise InvalidModel("complex dimension n must be at least 1")
        if self.X is not None:
            if self.X.dim != 2 * n:
                raise InvalidModel(f"X has dimension {self.X.dim}, expected {2 * n}")
            orient(self.X, self._seeds_for(()))
        for i, Yi in enumerate(self.components):
            if Yi.is_empty:
                raise InvalidModel(f"component {i} is empty")
            if self.X is not None and not Yi.is_subcomplex_of(self.X):
                raise InvalidModel(f"component {i} is not a subcomplex of X")
        self._strata = {}
        self.__dict__.pop("_level_cache", None)
        amb = self.ambient
        for p in range(1, len(self.components) + 1):
            for sid, S in self._level_raw(p):
                if not S.is_full_in(amb):
                    raise _NotFull(f"stratum {sid} is not a full subcomplex")
                expect = 2 * (n - p)
                if S.dim != expect:
                    raise InvalidModel(f"stratum {sid} has dimension {S.dim}, expected {expect}")
                if p == len(sid) and expect >= 0:
                    orient(S, self._seeds_for(sid))

    def _repair(self) -> None:
        amb = self.ambient
        T, sub = barycentric_subdivide(amb)
        self.components = [sub.subcomplex_image(Y) for Y in self.components]
        if self.X is not None:
            self.X = T
        self.seeds = {}
        self.subdivided = True
        self._strata = {}
        for key in ("Y", "_level_cache", "_fund_cache", "max_level"):
            self.__dict__.pop(key, None)

    def _seeds_for(self, sid) -> list:
        return [tuple(s) for s in self.seeds.get(tuple(sid), [])]

    # strata -------------------------------------------------------------
    def _level_raw(self, p: int):
        if p == 0:
            return [((), self.ambient)]
        out = []
        if p == 1:
            for i, Y in enumerate(self.components):
                self._strata[(i,)] = Y
                out.append(((i,), Y))
            return out
        for sid, S in self._level_raw(p - 1):
            for j in range(sid[-1] + 1, len(self.components)):
                key = sid + (j,)
                T = self._strata.get(key)
                if T is None:
                    T = S.intersection(self.components[j])
                    self._strata[key] = T
                if not T.is_empty:
                    out.append((key, T))
        return out

    def stratum(self, sid: StratumId) -> SimplicialComplex:
        sid = tuple(sid)
        if not sid:
            return self.ambient
        if list(sid) != sorted(set(sid)) or sid[-1] >= len(self.components) or sid[0] < 0:
            raise InvalidModel(f"invalid stratum id {sid}")
        S = self._strata.get(sid)
        if S is None:
            S = self.components[sid[0]]
            for j in sid[1:]:
                S = S.intersection(self.components[j])
            self._strata[sid] = S
        return S

    def level(self, p: int) -> list[tuple[StratumId, SimplicialComplex]]:
        if p == 0:
            return [((), self.ambient)]
        cache = self.__dict__.setdefault("_level_cache", {})
        if p not in cache:
            cache[p] = list(self._level_raw(p))
        return list(cache[p])

    @cached_property
    def Y(self) -> SimplicialComplex:
        out = SimplicialComplex()
        for Yi in self.components:
            out = out.union(Yi)
        return out

    @cached_property
    def max_level(self) -> int:
        p = 0
        while self.level(p + 1):
            p += 1
        return p

    def fundamental_cycle(self, sid: StratumId = ()) -> Chain:
        return self._fundamental(tuple(sid))

    def _fundamental(self, sid):
        cache = self.__dict__.setdefault("_fund_cache", {})
        if sid not in cache:
            S = self.stratum(sid)
            if S.is_empty:
                raise InvalidModel(f"stratum {sid} is empty")
            cache[sid] = orient(S, self._seeds_for(sid))
        return cache[sid]

    def with_orientation(self, sid: StratumId, seeds: list) -> "NCDModel":
        """A copy with different orientation seeds for one stratum."""
        new = object.__new__(NCDModel)
        new.__dict__.update({k: v for k, v in self.__dict__.items() if k != "_fund_cache"})
        new.seeds = dict(self.seeds)
        new.seeds[tuple(sid)] = [tuple(s) for s in seeds]
        new._strata = dict(self._strata)
        return new

    def __repr__(self) -> str:
        return (f"NCDModel(n={self.n}, components={len(self.components)}, "
                f"X={'none' if self.X is None else self.X.f_vector})")


class _NotFull(Exception):
    pass


def stratum(M: NCDModel, sid: StratumId) -> SimplicialComplex:
    """The intersection subcomplex Y_{α1...αp} (X for the empty id)."""
    return M.stratum(sid)


def level(M: NCDModel, p: int) -> list[tuple[StratumId, SimplicialComplex]]:
    """Labeled nonempty components of the normalization Ỹ^p."""
    return M.level(p)


def level_basis(M: NCDModel, p: int, k: int) -> list[tuple[StratumId, tuple]]:
    """Basis of C_k(Ỹ^p): (stratum id, k-simplex) pairs, grouped by id."""
    return [(sid, s) for sid, S in M.level(p) for s in S.simplices(k)]


def _level_index(M: NCDModel, p: int, k: int) -> dict:
    return {b: i for i, b in enumerate(level_basis(M, p, k))}


def mv_operator(M: NCDModel, p: int, k: int) -> SparseMatrix:
    """Matrix of i : C_k(Ỹ^p) → C_k(Ỹ^{p-1}), signs (-1)^{k+i}.

    On the component (α1...αp) deleting the index at position i routes the
    chain to the remaining tuple; i is also the insertion position of the
    deleted index into the remaining tuple.
    """
    if p < 1:
        raise ValueError("mv_operator needs p >= 1")
    src = level_basis(M, p, k)
    tgt = _level_index(M, p - 1, k)
    cols = []
    for sid, s in src:
        col = {}
        for i in range(len(sid)):
            rest = sid[:i] + sid[i + 1:]
            col[tgt[(rest, s)]] = -1 if (k + i) % 2 else 1
        cols.append(col)
    return SparseMatrix(len(tgt), len(src), cols)


def fundamental_cycle(M: NCDModel, sid: StratumId = ()) -> Chain:
    """Coherently oriented top cycle of a stratum (±1 coefficients)."""
    return M.fundamental_cycle(sid)


def deep_stratum(M: NCDModel, p: int) -> SimplicialComplex:
    """Y^p: union of all p-fold intersections (X for p = 0)."""
    if p <= 0:
        return M.ambient
    out = SimplicialComplex()
    for _, S in M.level(p):
        out = out.union(S)
    return out


# Milnor realization -----------------------------------------------------

def _shuffles(p: int, q: int):
    """Lattice paths (0,0)→(p,q) with their Eilenberg-Zilber signs."""
    def rec(i, j, path, sign, xs_left):
        if i == p and j == q:
            yield path, sign
            return
        if i < p:
            yield from rec(i + 1, j, path + [(i + 1, j)], sign, xs_left - 1)
        if j < q:
            # a step in the second factor passes the remaining first-factor steps
            yield from rec(i, j + 1, path + [(i, j + 1)], sign * (-1) ** xs_left, xs_left)
    yield from rec(0, 0, [(0, 0)], 1, p)


@dataclass(eq=False)
class MilnorRealization:
    """SY = ⋃ Y_A × Δ_A inside Y × Δ_I, triangulated by staircases.

    Vertices are pairs (v, α) with v a vertex of Y_α; simplices are chains
    increasing in both coordinates whose first coordinates span a simplex
    of Y_A, A being the set of second coordinates.
    """

    model: NCDModel
    complex: SimplicialComplex
    _prism_cache: dict = field(default_factory=dict, repr=False)

    def prism(self, sid: StratumId, simplex: tuple) -> dict:
        """Signed staircase decomposition of simplex × Δ_sid."""
        key = (tuple(sid), simplex)
        out = self._prism_cache.get(key)
        if out is None:
            out = {}
            p, q = len(simplex) - 1, len(sid) - 1
            for path, sign in _shuffles(p, q):
                out[tuple((simplex[i], sid[j]) for i, j in path)] = sign
            self._prism_cache[key] = out
        return out


def milnor_realization(M: NCDModel) -> MilnorRealization:
    """Build SY with prisms Ỹ^p × Δ_{p-1} in staircase triangulation."""
    if not M.components:
        raise InvalidModel("Y is empty")
    gens = []
    for p in range(1, M.max_level + 1):
        for sid, S in M.level(p):
            for s in S.facets():
                for path, _ in _shuffles(len(s) - 1, len(sid) - 1):
                    gens.append(tuple((s[i], sid[j]) for i, j in path))
    return MilnorRealization(M, SimplicialComplex(gens))


def sn_inverse(M: NCDModel, xi: Chain, sid: StratumId, SY: MilnorRealization | None = None) -> Chain:
    """sn⁻¹ : C_k(Y_sid) → C_{k+p-1}(SY), the prism chain over ξ."""
    SY = SY or milnor_realization(M)
    out: dict = {}
    for s, c in xi.coeffs.items():
        for simp, sign in SY.prism(sid, s).items():
            y = out.get(simp, 0) + c * sign
            if y:
                out[simp] = y
            else:
                out.pop(simp, None)
    return Chain(SY.complex, xi.degree + len(sid) - 1, out)


# dual graph --------------------------------------------------------------

def dual_graph(M: NCDModel, self_intersections: list[int] | dict | None = None):
    """Plumbing graph of a surface configuration (n = 2)."""
    from .homology import Homology
    from .plumbing import PlumbingGraph

    if M.n != 2:
        raise InvalidModel("dual graph needs n = 2")
    if M.level(3):
        raise InvalidModel("triple intersections must be empty")
    m = len(M.components)
    if self_intersections is None:
        self_intersections = M.flags.get("self_intersections")
    if self_intersections is None:
        raise MissingSelfIntersection("self-intersection numbers are extrinsic and must be supplied")
    if isinstance(self_intersections, dict):
        missing = [i for i in range(m) if i not in self_intersections]
        if missing:
            raise MissingSelfIntersection(f"no self-intersection for components {missing}")
        e = [int(self_intersections[i]) for i in range(m)]
    else:
        if len(self_intersections) != m:
            raise MissingSelfIntersection("one self-intersection per component is required")
        e = [int(x) for x in self_intersections]
    genera = []
    for i, Y in enumerate(M.components):
        H = Homology(Y, track=False)
        b = H.betti()
        if b.get(0, 0) != 1 or b.get(1, 0) % 2:
            raise InvalidModel(f"component {i} is not a connected closed orientable surface")
        genera.append(b.get(1, 0) // 2)
    edges = []
    for sid, S in M.level(2):
        edges.extend([sid] * S.n(0))
    return PlumbingGraph(genera, e, edges)
