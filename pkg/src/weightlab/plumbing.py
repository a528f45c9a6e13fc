"""Plumbing graphs and the E¹ fast path for boundaries of surface
configurations in complex surfaces (n = 2)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InputError
from .homology import invariant_factors
from .linalg import SparseMatrix, rank

__all__ = [
    "PlumbingGraph",
    "E1Boundary",
    "e1_boundary_from_plumbing",
    "boundary_weight_ranks",
    "h1_formula_check",
    "random_tree",
]


@dataclass(eq=False)
class PlumbingGraph:
    """Decorated dual graph: genera, self-intersections, edges (multi allowed)."""

    genera: list[int]
    self_ints: list[int]
    edges: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self.genera = [int(g) for g in self.genera]
        self.self_ints = [int(e) for e in self.self_ints]
        if len(self.genera) != len(self.self_ints):
            raise InputError("one genus and one self-intersection per vertex")
        if any(g < 0 for g in self.genera):
            raise InputError("genera must be nonnegative")
        V = len(self.genera)
        edges = []
        for e in self.edges:
            v, w = (int(x) for x in e)
            if v == w:
                raise InputError(f"loop at vertex {v}: components must be smooth")
            if not (0 <= v < V and 0 <= w < V):
                raise InputError(f"edge {e} references a missing vertex")
            edges.append((min(v, w), max(v, w)))
        self.edges = sorted(edges)

    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def genus(self) -> int:
        return sum(self.genera)

    @cached_property
    def intersection_matrix(self) -> np.ndarray:
        V = self.n_vertices
        I = np.zeros((V, V), dtype=object)
        for v, e in enumerate(self.self_ints):
            I[v, v] = e
        for v, w in self.edges:
            I[v, w] += 1
            I[w, v] += 1
        return I

    @cached_property
    def n_components(self) -> int:
        parent = list(range(self.n_vertices))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for v, w in self.edges:
            a, b = find(v), find(w)
            if a != b:
                parent[max(a, b)] = min(a, b)
        return len({find(v) for v in range(self.n_vertices)})

    @property
    def c_gamma(self) -> int:
        """Number of independent cycles of the graph."""
        return self.n_edges - self.n_vertices + self.n_components

    def incidence(self) -> SparseMatrix:
        """Signed incidence: the edge (v, w), v < w, maps to [w] - [v]."""
        cols = [{v: -1, w: 1} for v, w in self.edges]
        return SparseMatrix(self.n_vertices, self.n_edges, cols)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "kind": "plumbing",
            "vertices": [{"genus": g, "self_int": e} for g, e in zip(self.genera, self.self_ints)],
            "edges": [list(e) for e in self.edges],
        }


@dataclass(eq=False)
class E1Boundary:
    """E¹ page of the boundary complex assembled from plumbing data.

    ``entries[(s, t)]`` is the rank of the entry and ``d1[(s, t)]`` the
    matrix of d¹ out of it; ``e2`` holds the ranks after taking homology.
    """

    graph: PlumbingGraph
    entries: dict
    d1: dict
    e2: dict
    torsion_h1: tuple

    def homology_ranks(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (s, t), r in self.e2.items():
            out[s + t] = out.get(s + t, 0) + r
        return out


def e1_boundary_from_plumbing(G: PlumbingGraph) -> E1Boundary:
    """E¹ and E² of the boundary double complex from the graph data.

    Columns: s=1 holds H_*(Ỹ²) (edge points), s=0 holds H_*(Ỹ¹),
    s=-1 holds H_{*-2}(Ỹ¹) and s=-2 holds H_{*-4}(Ỹ²).  The nonzero d¹ are
    the Mayer-Vietoris incidence, the intersection matrix on fundamental
    classes, and the restriction of fundamental classes to the points.
    """
    V, E, g2 = G.n_vertices, G.n_edges, 2 * G.genus
    entries = {
        (1, 0): E,
        (0, 0): V, (0, 1): g2, (0, 2): V,
        (-1, 2): V, (-1, 3): g2, (-1, 4): V,
        (-2, 4): E,
    }
    B = G.incidence()
    I = SparseMatrix.from_dense(G.intersection_matrix) if V else SparseMatrix(0, 0)
    d1 = {
        (1, 0): B,
        (0, 2): I,
        (-1, 4): B.transpose(),
    }
    ranks = {key: rank(m) for key, m in d1.items()}
    e2 = {}
    for (s, t), dim in entries.items():
        out_rank = ranks.get((s, t), 0)
        in_rank = ranks.get((s + 1, t), 0)
        e2[(s, t)] = dim - out_rank - in_rank
    tors = tuple(x for x in invariant_factors(G.intersection_matrix) if x > 1) if V else ()
    return E1Boundary(G, entries, d1, e2, tors)


def boundary_weight_ranks(G: PlumbingGraph) -> dict[int, dict[int, int]]:
    """``{k: {weight: rank}}`` for H_k of the boundary, k = 0..3."""
    e1 = e1_boundary_from_plumbing(G)
    table: dict[int, dict[int, int]] = {k: {} for k in range(4)}
    for (s, t), r in e1.e2.items():
        k = s + t
        table[k][-t] = table[k].get(-t, 0) + r
    return table


def h1_formula_check(G: PlumbingGraph) -> bool:
    """Total H_1 rank equals rank ker I + 2g + c_Γ."""
    I = G.intersection_matrix
    V = G.n_vertices
    ker = V - (rank(SparseMatrix.from_dense(I)) if V else 0)
    total = sum(boundary_weight_ranks(G)[1].values())
    return total == ker + 2 * G.genus + G.c_gamma


def random_tree(n_vertices: int, rng: np.random.Generator, max_genus: int = 2,
                self_int_range: tuple[int, int] = (-4, 1)) -> PlumbingGraph:
    """Random tree with random genera and self-intersections."""
    genera = [int(x) for x in rng.integers(0, max_genus + 1, n_vertices)]
    e = [int(x) for x in rng.integers(self_int_range[0], self_int_range[1] + 1, n_vertices)]
    edges = [(int(rng.integers(0, v)), v) for v in range(1, n_vertices)]
    return PlumbingGraph(genera, e, edges)
