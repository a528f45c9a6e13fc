"""Double complexes with anticommuting differentials and their totals.

Conventions: the vertical differential ∂ maps (s, t) → (s, t-1), the
horizontal differential δ maps (s, t) → (s-1, t), and D = ∂ + δ on
Tot_k = ⊕_{s+t=k} A_{s,t}.  The weight filtration is W_s = ⊕_{p≤s} A_{p,*},
a subcomplex because δ lowers s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .duality import cap_level, transverse_model
from .errors import AnticommutationViolated
from .homology import ChainComplex, homology_all
from .linalg import SparseMatrix
from .ncd import NCDModel, level, level_basis, mv_operator
from .simplicial import SimplicialComplex, _boundary

__all__ = [
    "DoubleComplex",
    "TotalComplex",
    "total",
    "truncate",
    "build_X",
    "build_Y",
    "build_XY",
    "build_X_XminusY",
    "build_XminusY",
    "build_boundaryU",
    "build_pair",
    "synthetic_nondegenerate",
    "PAIRS",
    "deleted_star_complement",
    "oracle_homology",
]

PAIRS = ("Y", "XY", "X_XmY", "XmY", "dU")


@dataclass(eq=False)
class DoubleComplex:
    """Bigraded free module with explicit bases and differentials.

    ``bases[(s, t)]`` lists basis labels; ``vertical[(s, t)]`` is the matrix
    (s, t) → (s, t-1) and ``horizontal[(s, t)]`` the matrix (s, t) → (s-1, t).
    Missing matrices are zero.
    """

    bases: dict
    vertical: dict = field(default_factory=dict)
    horizontal: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.bases = {k: list(v) for k, v in sorted(self.bases.items()) if len(v)}

    def dim(self, s: int, t: int) -> int:
        return len(self.bases.get((s, t), ()))

    @property
    def bidegrees(self) -> list:
        return sorted(self.bases)

    @property
    def s_range(self) -> tuple[int, int]:
        ss = [s for s, _ in self.bases]
        return (min(ss), max(ss)) if ss else (0, -1)

    @property
    def t_range(self) -> tuple[int, int]:
        ts = [t for _, t in self.bases]
        return (min(ts), max(ts)) if ts else (0, -1)

    def is_zero(self) -> bool:
        return not self.bases

    def d_vert(self, s: int, t: int) -> SparseMatrix:
        m = self.vertical.get((s, t))
        return m if m is not None else SparseMatrix(self.dim(s, t - 1), self.dim(s, t))

    def d_horiz(self, s: int, t: int) -> SparseMatrix:
        m = self.horizontal.get((s, t))
        return m if m is not None else SparseMatrix(self.dim(s - 1, t), self.dim(s, t))

    def check_axioms(self) -> dict:
        """Report which of ∂² = 0, δ² = 0, ∂δ + δ∂ = 0 fail, by bidegree."""
        bad = {"dd": [], "hh": [], "anti": [], "shape": []}
        for (s, t) in self.bases:
            v, h = self.d_vert(s, t), self.d_horiz(s, t)
            if v.shape != (self.dim(s, t - 1), self.dim(s, t)) or h.shape != (self.dim(s - 1, t), self.dim(s, t)):
                bad["shape"].append((s, t))
                continue
            if not (self.d_vert(s, t - 1) @ v).is_zero():
                bad["dd"].append((s, t))
            if not (self.d_horiz(s - 1, t) @ h).is_zero():
                bad["hh"].append((s, t))
            if not (self.d_vert(s - 1, t) @ h + self.d_horiz(s, t - 1) @ v).is_zero():
                bad["anti"].append((s, t))
        bad["ok"] = not any(bad[k] for k in ("dd", "hh", "anti", "shape"))
        return bad

    def truncate(self, mode: str, i: int) -> "DoubleComplex":
        """σ_{s≤i} (mode "le", a subcomplex) or σ_{s≥i} (mode "ge", a quotient)."""
        if mode not in ("le", "ge"):
            raise ValueError("mode must be 'le' or 'ge'")
        keep = (lambda s: s <= i) if mode == "le" else (lambda s: s >= i)
        bases = {k: v for k, v in self.bases.items() if keep(k[0])}
        vert = {k: m for k, m in self.vertical.items() if keep(k[0]) and k in bases}
        horiz = {k: m for k, m in self.horizontal.items()
                 if keep(k[0]) and keep(k[0] - 1) and k in bases}
        return DoubleComplex(bases, vert, horiz, name=f"{self.name}[s{'<=' if mode == 'le' else '>='}{i}]")

    def shift(self, ds: int = 0, dt: int = 0) -> "DoubleComplex":
        mv = lambda k: (k[0] + ds, k[1] + dt)
        return DoubleComplex({mv(k): v for k, v in self.bases.items()},
                             {mv(k): m for k, m in self.vertical.items()},
                             {mv(k): m for k, m in self.horizontal.items()}, name=self.name)

    @cached_property
    def tot(self) -> "TotalComplex":
        return TotalComplex(self)


class TotalComplex:
    """Tot_k = ⊕_{s+t=k} A_{s,t}, blocks ordered by s ascending."""

    def __init__(self, A: DoubleComplex):
        self.A = A
        self.blocks: dict[int, list[tuple[int, int]]] = {}
        for s, t in A.bidegrees:
            self.blocks.setdefault(s + t, []).append((s, t))
        for k in self.blocks:
            self.blocks[k].sort()
        self.offsets: dict[tuple[int, int], int] = {}
        for k, bl in self.blocks.items():
            off = 0
            for st in bl:
                self.offsets[st] = off
                off += A.dim(*st)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.blocks)

    def dim(self, k: int) -> int:
        return sum(self.A.dim(*st) for st in self.blocks.get(k, ()))

    def basis(self, k: int) -> list:
        return [(s, t, lab) for s, t in self.blocks.get(k, ()) for lab in self.A.bases[(s, t)]]

    def filtration(self, k: int) -> list[int]:
        """Column index s of each basis element of Tot_k."""
        return [s for s, t in self.blocks.get(k, ()) for _ in range(self.A.dim(s, t))]

    def block_range(self, s: int, t: int) -> range:
        o = self.offsets.get((s, t))
        return range(0) if o is None else range(o, o + self.A.dim(s, t))

    def D(self, k: int) -> SparseMatrix:
        """D : Tot_k → Tot_{k-1}."""
        cache = self.__dict__.setdefault("_D", {})
        if k in cache:
            return cache[k]
        A = self.A
        cols: list[dict] = []
        for s, t in self.blocks.get(k, ()):
            v = A.d_vert(s, t)
            h = A.d_horiz(s, t)
            ov = self.offsets.get((s, t - 1))
            oh = self.offsets.get((s - 1, t))
            for j in range(A.dim(s, t)):
                col = {}
                if ov is not None:
                    for i, x in v.cols[j].items():
                        col[ov + i] = x
                if oh is not None:
                    for i, x in h.cols[j].items():
                        col[oh + i] = col.get(oh + i, 0) + x
                cols.append({i: x for i, x in col.items() if x})
        M = SparseMatrix(self.dim(k - 1), self.dim(k), cols)
        cache[k] = M
        return M

    def check(self) -> None:
        for k in self.degrees:
            if not (self.D(k - 1) @ self.D(k)).is_zero():
                raise AnticommutationViolated(f"D² ≠ 0 in total degree {k}")

    def chain_complex(self, s_max: int | None = None) -> ChainComplex:
        """Tot as a chain complex; with ``s_max`` the subcomplex W_{s_max}."""
        if s_max is None:
            dims = {k: self.dim(k) for k in self.degrees}
            return ChainComplex(dims, {k: self.D(k) for k in self.degrees})
        keep = {k: [i for i, s in enumerate(self.filtration(k)) if s <= s_max] for k in self.degrees}
        dims = {k: len(v) for k, v in keep.items()}
        d = {k: self.D(k).submatrix(keep.get(k - 1, []), keep[k]) for k in self.degrees}
        return ChainComplex(dims, d)

    def vector(self, parts: dict) -> dict:
        """Assemble a Tot vector from ``{(s, t): {index: coeff}}``."""
        out = {}
        for st, vec in parts.items():
            o = self.offsets[st]
            for i, x in vec.items():
                if x:
                    out[o + i] = x
        return out

    def split(self, k: int, vec: dict) -> dict:
        """Inverse of ``vector``: components by bidegree."""
        out: dict = {}
        for s, t in self.blocks.get(k, ()):
            r = self.block_range(s, t)
            part = {i - r.start: x for i, x in vec.items() if i in r and x}
            if part:
                out[(s, t)] = part
        return out


def total(A: DoubleComplex) -> TotalComplex:
    """Total complex, after checking the double-complex axioms."""
    rep = A.check_axioms()
    if not rep["ok"]:
        failures = [(k, v) for k, v in rep.items() if k != "ok" and v]
        raise AnticommutationViolated(f"double complex axioms fail at {failures}")
    T = A.tot
    T.check()
    return T


def truncate(A: DoubleComplex, mode: str, i: int) -> DoubleComplex:
    return A.truncate(mode, i)


# builders ---------------------------------------------------------------------

def _level_boundary(M: NCDModel, p: int, k: int) -> SparseMatrix:
    """∂ on C_k(Ỹ^p), block diagonal over components."""
    blocks = [_boundary(S, k) for _, S in level(M, p)]
    return SparseMatrix.block([b.nrows for b in blocks], [b.ncols for b in blocks],
                              {(a, a): b for a, b in enumerate(blocks)})


def _perp_basis(M: NCDModel, p: int, t_cochain: int) -> list:
    return [("perp", sid, s) for sid, S in level(M, p) for s in S.simplices(t_cochain)]


def _perp_differential(M: NCDModel, p: int, i: int) -> SparseMatrix:
    """Coboundary C^{i}(Ỹ^p) → C^{i+1}(Ỹ^p), block diagonal."""
    blocks = [_boundary(S, i + 1).transpose() for _, S in level(M, p)]
    return SparseMatrix.block([b.nrows for b in blocks], [b.ncols for b in blocks],
                              {(a, a): b for a, b in enumerate(blocks)})


def _chain_row(M: NCDModel, p_min: int, s_of_p, name: str) -> DoubleComplex:
    """Row of chain columns C_*(Ỹ^p), p ≥ p_min, placed at s = s_of_p(p), δ = i."""
    bases, vert, horiz = {}, {}, {}
    p = p_min
    while True:
        lev = level(M, p)
        if not lev:
            break
        s = s_of_p(p)
        top = max(S.dim for _, S in lev)
        for t in range(top + 1):
            bases[(s, t)] = [("chain", sid, x) for sid, x in level_basis(M, p, t)]
            if t >= 1:
                vert[(s, t)] = _level_boundary(M, p, t)
            if p > p_min:
                horiz[(s, t)] = mv_operator(M, p, t)
        p += 1
    return DoubleComplex(bases, vert, horiz, name=name)


def build_X(M: NCDModel) -> DoubleComplex:
    """Single column C_*(X)."""
    return _chain_row(M, 0, lambda p: p, "X").truncate("le", 0)


def build_Y(M: NCDModel) -> DoubleComplex:
    """A_{s,t}(Y) = C_t(Ỹ^{s+1}), δ = i."""
    return _chain_row(M, 1, lambda p: p - 1, "Y")


def build_XY(M: NCDModel) -> DoubleComplex:
    """A_{s,t}(X,Y) = C_t(Ỹ^s) with Ỹ^0 = X, the cone of A(Y) → A(X)."""
    return _chain_row(M, 0, lambda p: p, "XY")


def _perp_row(M: NCDModel, p_min: int, name: str, s_of_p, chain_degree) -> DoubleComplex:
    """Row of transverse columns C^⊥(Ỹ^p), p ≥ p_min, δ = assembled ∩.

    ``chain_degree(s, t)`` is the transverse chain degree of A_{s,t}; the
    basis is made of cochains of degree 2n - t on Ỹ^p.
    """
    n = M.n
    bases, vert, horiz = {}, {}, {}
    p = p_min
    while True:
        lev = level(M, p)
        if not lev:
            break
        s = s_of_p(p)
        top = max(S.dim for _, S in lev)
        for i in range(top + 1):
            t = 2 * n - i
            bases[(s, t)] = _perp_basis(M, p, i)
            if i + 1 <= top:
                vert[(s, t)] = _perp_differential(M, p, i)
        if p > p_min:
            for i in range(top + 1):
                t = 2 * n - i
                # ∩ from level p-1 at column s+1 into level p at column s
                horiz[(s + 1, t)] = cap_level(M, p - 1, chain_degree(s + 1, t))
        p += 1
    return DoubleComplex(bases, vert, horiz, name=name)


def build_X_XminusY(M: NCDModel) -> DoubleComplex:
    """A_{s,t}(X,X-Y) = C^⊥_{t+2s-2}(Ỹ^{1-s}), s ≤ 0, δ = ∩."""
    for sid, _ in level(M, 1):
        transverse_model(M, sid)
    return _perp_row(M, 1, "X_XmY", lambda p: 1 - p, lambda s, t: t + 2 * s - 2)


def build_XminusY(M: NCDModel) -> DoubleComplex:
    """A_{s,t}(X-Y) = C^⊥_{t+2s}(Ỹ^{-s}), s ≤ 0: the cone of ∩ : A^⊥(X) → A(X,X-Y)."""
    transverse_model(M, ())
    return _perp_row(M, 0, "XmY", lambda p: -p, lambda s, t: t + 2 * s)


def _retag(A: DoubleComplex, tag: str) -> DoubleComplex:
    return DoubleComplex({k: [(tag,) + tuple(x) for x in v] for k, v in A.bases.items()},
                         A.vertical, A.horizontal, A.name)


def _direct_sum(A: DoubleComplex, B: DoubleComplex, glue: dict, name: str) -> DoubleComplex:
    """A ⊕ B with extra horizontal blocks ``glue[(s, t)]`` from A_{s,t} to B_{s-1,t}.

    Bases at a shared bidegree list A's elements first.
    """
    keys = sorted(set(A.bases) | set(B.bases))
    bases = {k: A.bases.get(k, []) + B.bases.get(k, []) for k in keys}
    vert, horiz = {}, {}
    for s, t in keys:
        a, b = A.dim(s, t), B.dim(s, t)
        a1, b1 = A.dim(s, t - 1), B.dim(s, t - 1)
        vert[(s, t)] = SparseMatrix.block([a1, b1], [a, b], {(0, 0): A.d_vert(s, t), (1, 1): B.d_vert(s, t)})
        a2, b2 = A.dim(s - 1, t), B.dim(s - 1, t)
        blocks = {(0, 0): A.d_horiz(s, t), (1, 1): B.d_horiz(s, t)}
        if (s, t) in glue:
            blocks[(1, 0)] = glue[(s, t)]
        horiz[(s, t)] = SparseMatrix.block([a2, b2], [a, b], blocks)
    return DoubleComplex(bases, vert, horiz, name=name)


def build_boundaryU(M: NCDModel) -> DoubleComplex:
    """Cone of j₁ : A(X-Y) → A(X,Y)[s-1].

    The transverse row (s ≤ 0) is A(X-Y); the chain row holds C_t(Ỹ^p) at
    s = p - 1 with differential -∂; the glue C^⊥_t(X) → C_t(X) at s = 0 is
    j₁ = θ∘pd.
    """
    if not level(M, 1):
        return DoubleComplex({}, name="dU")
    top = _retag(build_XminusY(M), "U")
    low = _retag(_chain_row(M, 0, lambda p: p - 1, "XY"), "L")
    low = DoubleComplex(low.bases, {k: m.scale(-1) for k, m in low.vertical.items()},
                        low.horizontal, low.name)
    TX = transverse_model(M, ())
    n2 = 2 * M.n
    glue = {(0, t): TX.j_matrix(t) for t in range(n2 + 1) if (0, t) in top.bases}
    return _direct_sum(top, low, glue, "dU")


def build_pair(M: NCDModel, pair: str) -> DoubleComplex:
    """Builder dispatch by pair name: Y, XY, X_XmY, XmY, dU."""
    try:
        return {
            "Y": build_Y,
            "XY": build_XY,
            "X_XmY": build_X_XminusY,
            "XmY": build_XminusY,
            "dU": build_boundaryU,
        }[pair](M)
    except KeyError:
        raise ValueError(f"unknown pair {pair!r}; expected one of {PAIRS}") from None


def synthetic_nondegenerate() -> DoubleComplex:
    """Four-generator double complex whose spectral sequence has d² ≠ 0.

    a ∈ A_{2,0}, b ∈ A_{1,0}, c ∈ A_{1,1}, e ∈ A_{0,1} with ∂c = b,
    δa = b, δc = e.  E¹ = ⟨a⟩ ⊕ ⟨e⟩, d¹ = 0 and d²[a] = ±[e].
    """
    bases = {(2, 0): ["a"], (1, 0): ["b"], (1, 1): ["c"], (0, 1): ["e"]}
    one = SparseMatrix.identity(1)
    return DoubleComplex(bases, {(1, 1): one}, {(2, 0): one, (1, 1): one}, name="synthetic")


# direct homology of the spaces ----------------------------------------------

def deleted_star_complement(M: NCDModel) -> SimplicialComplex:
    """X minus the open star of Y in the barycentric subdivision X'."""
    TX = transverse_model(M, ())
    Y = M.Y
    Xp = TX.Sp
    keep = [s for k in range(Xp.dim + 1) for s in Xp.simplices(k)
            if all(b.simplex not in Y for b in s)]
    return SimplicialComplex(keep, closed=True)


def oracle_homology(M: NCDModel, pair: str) -> dict:
    """Homology of the space a pair's double complex models, computed directly.

    Y: the union of the components; XY: the quotient complex C(X)/C(Y);
    XmY: the deleted-star complement; X_XmY: H^{2n-k}(Y) by duality.
    Returns ``{k: (rank, torsion)}``; ∂U has no direct model here.
    """
    if pair == "Y":
        return homology_all(M.Y) if not M.Y.is_empty else {}
    if pair == "XY":
        return homology_all(ChainComplex.relative(M.X, M.Y))
    if pair == "XmY":
        return homology_all(deleted_star_complement(M))
    if pair == "X_XmY":
        Y = M.Y
        if Y.is_empty:
            return {}
        n2 = 2 * M.n
        top = Y.dim
        dims = {n2 - i: Y.n(i) for i in range(top + 1)}
        d = {n2 - i: _boundary(Y, i + 1).transpose() for i in range(top + 1)}
        return homology_all(ChainComplex(dims, d))
    raise ValueError(f"no direct homology model for pair {pair!r}")
