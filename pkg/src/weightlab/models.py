"""Bundled example models and small test complexes."""

from __future__ import annotations

from itertools import combinations

from .ncd import NCDModel
from .plumbing import PlumbingGraph
from .simplicial import SimplicialComplex, close_under_faces

__all__ = [
    "tetrahedron_boundary",
    "torus7",
    "rp2_6",
    "octahedron",
    "circle",
    "staircase_product",
    "torus_point",
    "sphere_point",
    "sphere_two_points",
    "s2xs2_smooth",
    "s2xs2_two_lines",
    "three_spheres",
    "three_spheres_path",
    "two_spheres_two_points",
    "plumbing_suite",
    "BUNDLED_NCD",
]


def tetrahedron_boundary(vertices=(0, 1, 2, 3)) -> SimplicialComplex:
    return close_under_faces(combinations(vertices, 3))


def torus7() -> SimplicialComplex:
    """Minimal 7-vertex torus (Möbius-Császár)."""
    tris = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
    tris += [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
    return close_under_faces(tris)


def rp2_6() -> SimplicialComplex:
    """6-vertex real projective plane."""
    return close_under_faces([(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
                              (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)])


def octahedron(poles, equator) -> SimplicialComplex:
    """Octahedral sphere: two poles over a 4-cycle (poles not adjacent)."""
    a, b = poles
    ring = list(equator)
    tris = []
    for i in range(4):
        e = (ring[i], ring[(i + 1) % 4])
        tris += [(a,) + e, (b,) + e]
    return close_under_faces(tris)


def circle(n: int) -> SimplicialComplex:
    return close_under_faces([(i, (i + 1) % n) for i in range(n)])


def staircase_product(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Triangulated product on vertex pairs (v, w) via staircase chains."""
    gens = []
    for s in K.facets():
        for t in L.facets():
            p, q = len(s) - 1, len(t) - 1

            def paths(i, j, acc):
                if i == p and j == q:
                    gens.append(tuple((s[a], t[b]) for a, b in acc))
                    return
                if i < p:
                    paths(i + 1, j, acc + [(i + 1, j)])
                if j < q:
                    paths(i, j + 1, acc + [(i, j + 1)])

            paths(0, 0, [(0, 0)])
    return SimplicialComplex(gens)


# NCD models ------------------------------------------------------------------

def torus_point() -> NCDModel:
    """n = 1: the 7-vertex torus with Y one vertex."""
    X = torus7()
    return NCDModel(X, [close_under_faces([(0,)])], 1, names=["P"])


def sphere_point() -> NCDModel:
    """n = 1: a tetrahedral sphere with Y one vertex (smooth Y)."""
    X = tetrahedron_boundary()
    return NCDModel(X, [close_under_faces([(0,)])], 1, names=["P"])


def sphere_two_points() -> NCDModel:
    """n = 1: a tetrahedral sphere with Y two vertices."""
    X = tetrahedron_boundary()
    return NCDModel(X, [close_under_faces([(0,)]), close_under_faces([(1,)])], 1, names=["P", "Q"])


def _K():
    return tetrahedron_boundary()


def _section(K, a, first: bool) -> SimplicialComplex:
    if first:
        return SimplicialComplex([tuple((v, a) for v in s) for s in K.facets()])
    return SimplicialComplex([tuple((a, v) for v in s) for s in K.facets()])


def _diagonal(K) -> SimplicialComplex:
    return SimplicialComplex([tuple((v, v) for v in s) for s in K.facets()])


def s2xs2_smooth() -> NCDModel:
    """n = 2: S²×S² with Y = S²×{pt}, one smooth component."""
    K = _K()
    return NCDModel(staircase_product(K, K), [_section(K, 0, True)], 2, names=["A"],
                    flags={"self_intersections": [0]})


def s2xs2_two_lines() -> NCDModel:
    """n = 2: S²×S² with Y = S²×{a} ∪ {b}×S², meeting at one point."""
    K = _K()
    return NCDModel(staircase_product(K, K), [_section(K, 0, True), _section(K, 3, False)], 2,
                    names=["A", "B"], flags={"self_intersections": [0, 0]})


def three_spheres() -> NCDModel:
    """n = 2: cycle of three spheres S²×{a}, {b}×S², diagonal in S²×S².

    Pairwise intersections are single points, the triple intersection is
    empty; self-intersections are 0, 0, 2.
    """
    K = _K()
    comps = [_section(K, 0, True), _section(K, 3, False), _diagonal(K)]
    return NCDModel(staircase_product(K, K), comps, 2, names=["A", "B", "D"],
                    flags={"self_intersections": [0, 0, 2]})


def three_spheres_path() -> NCDModel:
    """n = 2: chain A - B - A' of spheres S²×{a}, {b}×S², S²×{a'}."""
    K = _K()
    comps = [_section(K, 0, True), _section(K, 3, False), _section(K, 1, True)]
    return NCDModel(staircase_product(K, K), comps, 2, names=["A", "B", "A2"],
                    flags={"self_intersections": [0, 0, 0]})


def two_spheres_two_points(self_ints=(-2, -2)) -> NCDModel:
    """Divisor-only n = 2 model: two octahedral spheres sharing two poles."""
    Y1 = octahedron((0, 1), (2, 3, 4, 5))
    Y2 = octahedron((0, 1), (6, 7, 8, 9))
    return NCDModel(None, [Y1, Y2], 2, names=["A", "B"],
                    flags={"self_intersections": list(self_ints)})


BUNDLED_NCD = {
    "torus_point": torus_point,
    "sphere_point": sphere_point,
    "sphere_two_points": sphere_two_points,
    "s2xs2_smooth": s2xs2_smooth,
    "s2xs2_two_lines": s2xs2_two_lines,
    "three_spheres": three_spheres,
}


def plumbing_suite() -> dict[str, PlumbingGraph]:
    """Named plumbing graphs with known boundary 3-manifolds."""
    import numpy as np

    rng = np.random.default_rng(20240611)
    suite = {
        "torus_e0": PlumbingGraph([1], [0]),
        "sphere_m2": PlumbingGraph([0], [-2]),
        "triangle_m2": PlumbingGraph([0, 0, 0], [-2, -2, -2], [(0, 1), (1, 2), (0, 2)]),
        "sphere_m1": PlumbingGraph([0], [-1]),
        "sphere_0": PlumbingGraph([0], [0]),
        "a3_chain": PlumbingGraph([0, 0, 0], [-2, -2, -2], [(0, 1), (1, 2)]),
        "e8": PlumbingGraph([0] * 8, [-2] * 8,
                            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)]),
        "genus2_m1": PlumbingGraph([2], [-1]),
        "double_edge": PlumbingGraph([0, 0], [-2, -2], [(0, 1), (0, 1)]),
        "cycle4_genera": PlumbingGraph([1, 0, 2, 0], [-3, -2, -1, -2], [(0, 1), (1, 2), (2, 3), (0, 3)]),
    }
    from .plumbing import random_tree
    for i in range(4):
        suite[f"random_tree_{i}"] = random_tree(5, rng)
    return suite
