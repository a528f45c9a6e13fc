"""Chain-level Poincaré duality and the transverse chain model.

Transverse chains on an oriented closed stratum S of dimension d are
modelled by cochains: ``C^⊥_k(S) = C^{d-k}(S)`` with differential the
coboundary.  The realization ``pd`` caps a cochain (pulled back along the
simplicial approximation θ : S' → S) with the subdivided fundamental
cycle; its image consists of dual blocks, which are dimensionally
transverse to every subcomplex of S.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import NotOriented
from .homology import ChainComplex, ChainMap, Homology
from .linalg import Reduction, SparseMatrix, vec_add
from .ncd import NCDModel, StratumId, level
from .simplicial import (
    Chain,
    Cochain,
    SimplicialComplex,
    _boundary,
    barycentric_subdivide,
    coboundary_matrix,
    support_intersection_dim,
)

__all__ = [
    "pd_sign",
    "TransverseChainModel",
    "transverse_model",
    "pd_chain",
    "pd_inverse",
    "cap_operator",
    "TransferMap",
    "transfer",
    "gysin_square_check",
    "pd_identity_check",
    "pd_isomorphism_check",
    "cap_level",
    "level_perp_basis",
    "perp_level_differential",
    "is_realization_transverse",
    "CheckReport",
    "intersection_number",
    "cup_intersection_number",
]


def pd_sign(i: int) -> int:
    """Sign ε_i making ``∂∘pd = pd∘δ`` hold with the front/back cap."""
    return -1 if (i * (i + 1) // 2) % 2 else 1


class TransverseChainModel:
    """Cochain model of transverse chains on one oriented stratum."""

    def __init__(self, S: SimplicialComplex, fundamental: Chain, sid: StratumId = ()):
        if fundamental is None or fundamental.degree != S.dim:
            raise NotOriented("stratum has no fundamental cycle")
        self.S = S
        self.d = S.dim
        self.fundamental = fundamental
        self.sid = tuple(sid)

    @cached_property
    def _subdivision(self):
        return barycentric_subdivide(self.S)

    @property
    def Sp(self) -> SimplicialComplex:
        return self._subdivision[0]

    @property
    def sub(self):
        return self._subdivision[1]

    # the regraded complex ------------------------------------------------
    def dim(self, k: int) -> int:
        """Rank of C^⊥_k = number of (d-k)-simplices."""
        return self.S.n(self.d - k)

    def basis(self, k: int) -> list:
        return self.S.simplices(self.d - k)

    def differential(self, k: int) -> SparseMatrix:
        """∂^⊥_k : C^⊥_k → C^⊥_{k-1}, the coboundary on (d-k)-cochains."""
        i = self.d - k
        return _boundary(self.S, i + 1).transpose()

    def chain_complex(self) -> ChainComplex:
        dims = {k: self.dim(k) for k in range(self.d + 1)}
        d = {k: self.differential(k) for k in range(1, self.d + 1)}
        return ChainComplex(dims, d, labels={k: self.basis(k) for k in dims})

    # realization ----------------------------------------------------------
    @cached_property
    def _pd(self) -> dict[int, SparseMatrix]:
        Sp, sub = self.Sp, self.sub
        d = self.d
        fund = sub.carry(d).apply(self.fundamental.to_vector())
        tops = Sp.simplices(d)
        cols = {i: [{} for _ in range(self.S.n(i))] for i in range(d + 1)}
        idx_S = [self.S.index(i) for i in range(d + 1)]
        idx_T = [Sp.index(d - i) for i in range(d + 1)]
        for j, c in fund.items():
            flag = tops[j]
            for i in range(d + 1):
                prev = flag[i].simplex[-1]
                ok = all(flag[a].simplex[-1] < flag[a + 1].simplex[-1] for a in range(i))
                if not ok:
                    break
                tau = flag[i].simplex
                back = flag[i:]
                col = cols[i][idx_S[i][tau]]
                r = idx_T[i][back]
                col[r] = col.get(r, 0) + pd_sign(i) * c
        return {i: SparseMatrix(Sp.n(d - i), self.S.n(i), cols[i]) for i in range(d + 1)}

    def pd_matrix(self, i: int) -> SparseMatrix:
        """pd : C^i(S) → C_{d-i}(S')."""
        if 0 <= i <= self.d:
            return self._pd[i]
        return SparseMatrix(self.Sp.n(self.d - i), self.S.n(i))

    def realize(self, k: int) -> SparseMatrix:
        """Realization C^⊥_k → C_k(S')."""
        return self.pd_matrix(self.d - k)

    @cached_property
    def _j(self) -> dict[int, SparseMatrix]:
        return {k: self.sub.theta(k) @ self.realize(k) for k in range(self.d + 1)}

    def j_matrix(self, k: int) -> SparseMatrix:
        """θ∘pd : C^⊥_k(S) → C_k(S), duality on the original triangulation."""
        if 0 <= k <= self.d:
            return self._j[k]
        return SparseMatrix(self.S.n(k), self.dim(k))

    def j_chain_map(self) -> ChainMap:
        return ChainMap(self.chain_complex(), ChainComplex.from_simplicial(self.S),
                        {k: self.j_matrix(k) for k in range(self.d + 1)})

    @cached_property
    def _pd_solvers(self) -> dict:
        return {}

    def pd_inverse(self, xi: Chain) -> Cochain | None:
        """The cochain φ with pd(φ) = ξ, or None when ξ is not in the image."""
        i = self.d - xi.degree
        solver = self._pd_solvers.get(i)
        if solver is None:
            solver = Reduction(self.pd_matrix(i))
            self._pd_solvers[i] = solver
        x = solver.solve(xi.to_vector())
        return None if x is None else Cochain.from_vector(self.S, i, x)

    @cached_property
    def homology(self) -> Homology:
        return Homology(self.chain_complex())

    @cached_property
    def homology_S(self) -> Homology:
        return Homology(self.S)


def transverse_model(M: NCDModel, sid: StratumId = ()) -> TransverseChainModel:
    """Transverse chain model of a stratum, cached on the model."""
    cache = M.__dict__.setdefault("_transverse_cache", {})
    sid = tuple(sid)
    if sid not in cache:
        if sid == () and M.X is None:
            raise NotOriented("divisor-only models have no ambient space")
        S = M.stratum(sid)
        cache[sid] = TransverseChainModel(S, M.fundamental_cycle(sid), sid)
    return cache[sid]


def pd_chain(phi: Cochain, model: TransverseChainModel | None = None, fundamental: Chain | None = None) -> Chain:
    """Realize a cochain on an oriented closed complex as a transverse chain."""
    if model is None:
        if fundamental is None:
            raise NotOriented("pd needs a fundamental cycle")
        model = TransverseChainModel(phi.complex, fundamental)
    vec = model.pd_matrix(phi.degree).apply(phi.to_vector())
    return Chain.from_vector(model.Sp, model.d - phi.degree, vec)


def pd_inverse(xi: Chain, model: TransverseChainModel) -> Cochain | None:
    return model.pd_inverse(xi)


# intersection with a component ----------------------------------------------

def cap_operator(M: NCDModel, sid: StratumId, alpha: int, k: int) -> SparseMatrix:
    """∩[Y_α] : C^⊥_k(S) → C^⊥_{k-2}(S∩Y_α) in the cochain model.

    With transverse chains modelled as cochains this is restriction of
    (d-k)-cochains to the substratum; the assembly sign lives in
    ``cap_level``.
    """
    sid = tuple(sid)
    if alpha in sid:
        raise ValueError("α must not already index the stratum")
    S = M.stratum(sid)
    d = S.dim
    tgt_id = tuple(sorted(sid + (alpha,)))
    T = M.stratum(tgt_id)
    i = d - k
    src = S.index(i)
    rows = T.simplices(i)
    cols = [{} for _ in range(S.n(i))]
    for r, s in enumerate(rows):
        cols[src[s]][r] = 1
    return SparseMatrix(len(rows), S.n(i), cols)


def cap_level(M: NCDModel, p: int, k: int) -> SparseMatrix:
    """Assembled ∩ : C^⊥_k(Ỹ^p) → C^⊥_{k-2}(Ỹ^{p+1}).

    On the component (β1...β_{p+1}) the contribution of the stratum with β
    deleted at position i carries the sign (-1)^{k+i}.
    """
    dim_src = 2 * (M.n - p)
    i_deg = dim_src - k
    src = [(sid, s) for sid, S in level(M, p) for s in S.simplices(i_deg)]
    src_idx = {b: j for j, b in enumerate(src)}
    tgt = [(sid, s) for sid, S in level(M, p + 1) for s in S.simplices(i_deg)]
    cols = [{} for _ in src]
    for r, (tid, s) in enumerate(tgt):
        for pos in range(len(tid)):
            rest = tid[:pos] + tid[pos + 1:]
            j = src_idx[(rest, s)]
            cols[j][r] = -1 if (k + pos) % 2 else 1
    return SparseMatrix(len(tgt), len(src), cols)


def level_perp_basis(M: NCDModel, p: int, k: int) -> list:
    """Basis of C^⊥_k(Ỹ^p): (stratum id, (2(n-p)-k)-simplex)."""
    i_deg = 2 * (M.n - p) - k
    return [(sid, s) for sid, S in level(M, p) for s in S.simplices(i_deg)]


def perp_level_differential(M: NCDModel, p: int, k: int) -> SparseMatrix:
    """∂^⊥ on C^⊥_k(Ỹ^p) (block diagonal coboundary)."""
    i_deg = 2 * (M.n - p) - k
    blocks_src, blocks_tgt = [], []
    mats = []
    for sid, S in level(M, p):
        m = _boundary(S, i_deg + 1).transpose()
        mats.append(m)
        blocks_src.append(m.ncols)
        blocks_tgt.append(m.nrows)
    return SparseMatrix.block(blocks_tgt, blocks_src, {(a, a): m for a, m in enumerate(mats)})


# transfer ---------------------------------------------------------------------

@dataclass(eq=False)
class TransferMap:
    """Homology-level Gysin map H_k(S) → H_{k-2}(S∩Y_α)."""

    source: StratumId
    target: StratumId
    degree: int
    matrix: np.ndarray


def _class_matrix(H_src: Homology, k_src: int, images: list[dict], H_tgt: Homology, k_tgt: int) -> np.ndarray:
    g = H_tgt.group(k_tgt)
    mat = np.zeros((g.rank, len(images)), dtype=object)
    for j, v in enumerate(images):
        coords, _ = H_tgt.coordinates(k_tgt, v)
        for i, x in enumerate(coords):
            mat[i, j] = x
    return mat


def _j_homology_matrix(TM: TransverseChainModel, k: int) -> np.ndarray:
    """Matrix of j_* : H^⊥_k(S) → H_k(S) on free parts."""
    Hp, H = TM.homology, TM.homology_S
    gens = Hp.group(k).generators
    jm = TM.j_matrix(k)
    return _class_matrix(Hp, k, [jm.apply(dict(g)) for g in gens], H, k)


def _inverse_unimodular(A: np.ndarray) -> np.ndarray:
    import sympy
    if A.shape[0] == 0:
        return A.copy()
    inv = sympy.Matrix(A.tolist()).inv()
    out = np.array(inv.tolist(), dtype=object)
    for x in out.flat:
        if getattr(x, "q", 1) != 1:
            raise ValueError("matrix is not unimodular")
    return np.vectorize(int, otypes=[object])(out)


def transfer(M: NCDModel, sid: StratumId, alpha: int, k: int) -> TransferMap:
    """i_! = PD∘i*∘PD⁻¹ : H_k(S) → H_{k-2}(S∩Y_α) on free parts."""
    sid = tuple(sid)
    tid = tuple(sorted(sid + (alpha,)))
    S = M.stratum(sid)
    T = M.stratum(tid)
    src_rank = transverse_model(M, sid).homology_S.group(k).rank if not S.is_empty else 0
    if T.is_empty or k - 2 < 0 or k > S.dim:
        tgt_rank = 0
        if not T.is_empty and k - 2 >= 0:
            tgt_rank = transverse_model(M, tid).homology_S.group(k - 2).rank
        return TransferMap(sid, tid, k, np.zeros((tgt_rank, src_rank), dtype=object))
    TS, TT = transverse_model(M, sid), transverse_model(M, tid)
    J_S = _j_homology_matrix(TS, k)
    J_S_inv = _inverse_unimodular(J_S)
    cap = cap_operator(M, sid, alpha, k)
    gens = TS.homology.group(k).generators
    images = [TT.j_matrix(k - 2).apply(cap.apply(dict(g))) for g in gens]
    C = _class_matrix(TS.homology, k, images, TT.homology_S, k - 2)
    return TransferMap(sid, tid, k, C @ J_S_inv)


# checks -------------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


def gysin_square_check(M: NCDModel, sid: StratumId, alpha: int) -> CheckReport:
    """Check PD∘i* = ∩∘PD on homology, degree by degree.

    Left route: restrict a cocycle, then dualize on the substratum.  Right
    route: realize the cocycle as a transverse chain on S', intersect it
    with Y_α (through pd⁻¹ on S', restriction, and pd on the substratum),
    then push to the original triangulation.  Also checks that the realized
    intersection is supported in |ξ| ∩ (S∩Y_α)'.
    """
    sid = tuple(sid)
    tid = tuple(sorted(sid + (alpha,)))
    T = M.stratum(tid)
    if T.is_empty:
        return CheckReport("gysin_square", True, {"vacuous": True})
    TS, TT = transverse_model(M, sid), transverse_model(M, tid)
    d = TS.d
    per_degree = {}
    ok_all = True
    for i in range(d - 1):
        k = d - i
        gens = TS.homology.group(k).generators
        res = CheckReport(f"degree {i}", True)
        for g in gens:
            phi = Cochain.from_vector(TS.S, i, dict(g))
            restricted = cap_operator(M, sid, alpha, k).apply(phi.to_vector())
            left = TT.j_matrix(k - 2).apply(restricted)
            xi = pd_chain(phi, TS)
            back = TS.pd_inverse(xi)
            if back is None or back != phi:
                res.passed = False
                res.details["pd_inverse"] = "failed"
                break
            realized = pd_chain(Cochain.from_vector(TT.S, i, cap_operator(M, sid, alpha, k).apply(back.to_vector())), TT)
            # supports: the substratum's subdivision sits inside S'
            realized_in_S = Chain(TS.Sp, realized.degree, dict(realized.coeffs))
            supp = xi.support()
            if any(s not in supp for s in realized_in_S.coeffs):
                res.passed = False
                res.details["support"] = "realized intersection leaves |ξ|"
                break
            right = TT.sub.theta(k - 2).apply(realized.to_vector())
            cl = TT.homology_S.coordinates(k - 2, left)
            cr = TT.homology_S.coordinates(k - 2, right)
            if cl != cr:
                res.passed = False
                res.details["class"] = (cl, cr)
                break
        per_degree[i] = res.passed
        ok_all &= res.passed
    return CheckReport("gysin_square", ok_all, {"per_degree": per_degree})


def pd_identity_check(TM: TransverseChainModel) -> bool:
    """∂∘pd = pd∘δ as matrices in every degree."""
    d = TM.d
    for i in range(d + 1):
        lhs = _boundary(TM.Sp, d - i) @ TM.pd_matrix(i)
        rhs = TM.pd_matrix(i + 1) @ coboundary_matrix(TM.S, i) if i < d else SparseMatrix(lhs.nrows, lhs.ncols)
        if lhs != rhs:
            return False
    return True


def pd_isomorphism_check(TM: TransverseChainModel) -> CheckReport:
    """Ranks and torsion of H^i(S) and H_{d-i}(S) agree and j_* is unimodular."""
    Hp, H = TM.homology, TM.homology_S
    details = {}
    ok = True
    for k in range(TM.d + 1):
        a, b = Hp.group(k), H.group(k)
        same = a.rank == b.rank and a.torsion == b.torsion
        J = _j_homology_matrix(TM, k)
        if same and J.shape[0]:
            import sympy
            same = abs(sympy.Matrix(J.tolist()).det()) == 1
        details[k] = {"rank": b.rank, "torsion": list(b.torsion), "ok": same}
        ok &= same
    return CheckReport("pd_isomorphism", ok, details)


def is_realization_transverse(M: NCDModel, sid: StratumId, phi: Cochain) -> bool:
    """Whether pd(φ) is dimensionally transverse to the deeper strata of S."""
    from .simplicial import is_dimensionally_transverse

    TM = transverse_model(M, sid)
    xi = pd_chain(phi, TM)
    strata = []
    r = 1
    while True:
        pieces = [S for tid, S in level(M, len(sid) + r) if set(sid) <= set(tid)]
        if not pieces:
            break
        U = SimplicialComplex()
        for S in pieces:
            U = U.union(TM.sub.subcomplex_image(S))
        strata.append(U)
        r += 1
    return is_dimensionally_transverse(xi, strata)


def intersection_number(M: NCDModel, a: int, b: int) -> int:
    """Y_a · Y_b through the transfer of the fundamental class of Y_b.

    For a ≠ b this is the transfer H_{2n-2}(Y_b) → H_{2n-4}(Y_ab) evaluated
    on [Y_b] and summed over the points when n = 2.
    """
    if a == b:
        raise ValueError("self-intersections are not intrinsic to the model")
    sid = (b,)
    tid = tuple(sorted((a, b)))
    T = M.stratum(tid)
    if T.is_empty:
        return 0
    TS, TT = transverse_model(M, sid), transverse_model(M, tid)
    k = TS.d
    fund = M.fundamental_cycle(sid).to_vector()
    # the constant cocycle 1 is dual to the fundamental class
    one = {j: 1 for j in range(TS.S.n(0))}
    restricted = cap_operator(M, sid, a, k).apply(one)
    image = TT.j_matrix(k - 2).apply(restricted)
    if k - 2 == 0:
        return sum(image.values())
    fT = M.fundamental_cycle(tid).to_vector()
    return 1 if image == fT else (-1 if image == {i: -v for i, v in fT.items()} else 0)


def cup_intersection_number(M: NCDModel, a: int, b: int) -> int:
    """⟨φ_a ∪ φ_b, [X]⟩ with φ_c the cocycle dual to [Y_c] (n = 2 only).

    Independent of the transverse model: duals are found by solving
    j(φ) ~ [Y_c] in homology and the cup product is Alexander-Whitney.
    """
    if M.X is None:
        raise NotOriented("needs the ambient space")
    TX = transverse_model(M, ())
    d = TX.d
    k = d - 2
    H = TX.homology_S
    Hp = TX.homology
    J = _j_homology_matrix(TX, k)
    Jinv = _inverse_unimodular(J)
    gens = Hp.group(k).generators

    def dual(c):
        vec = {TX.S.index(k)[s]: v for s, v in M.fundamental_cycle((c,)).coeffs.items()}
        coords = np.array(H.coordinates(k, vec)[0], dtype=object)
        x = Jinv @ coords if len(coords) else coords
        out: dict = {}
        for j, g in enumerate(gens):
            if x[j]:
                out = vec_add(out, dict(g), x[j])
        return out

    fa, fb = dual(a), dual(b)
    i = d - k
    simp_i = TX.S.index(i)
    total = 0
    for s, c in M.fundamental_cycle(()).coeffs.items():
        front, back = s[: i + 1], s[i:]
        total += c * fa.get(simp_i[front], 0) * fb.get(simp_i[back], 0)
    return total
