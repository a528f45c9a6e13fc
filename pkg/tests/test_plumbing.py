"""Plumbing graphs and the weight spectral sequence of the boundary 3-manifold."""

import numpy as np
import pytest

from conftest import model, pair_complex
from oracles import dense_rank, snf_invariants
from weightlab.errors import InputError
from weightlab.models import plumbing_suite
from weightlab.ncd import dual_graph
from weightlab.plumbing import (
    PlumbingGraph,
    boundary_weight_ranks,
    e1_boundary_from_plumbing,
    h1_formula_check,
    random_tree,
)
from weightlab.spectral import purity_report, weight_table

SUITE = plumbing_suite()

# [TRIVIAL] classical boundaries: T³, RP³, S³, S²×S¹, L(4,3), Poincaré sphere
KNOWN_H1 = {
    "torus_e0": (3, ()),
    "sphere_m2": (0, (2,)),
    "sphere_m1": (0, ()),
    "sphere_0": (1, ()),
    "a3_chain": (0, (4,)),
    "e8": (0, ()),
    "triangle_m2": (2, (3,)),
}


@pytest.mark.parametrize("name", sorted(SUITE))
def test_h1_formula_and_weight_split(name):
    # [DERIVED] rank H_1 = rank ker I + 2g + c_Γ with weights -2, -1, 0
    G = SUITE[name]
    I = G.intersection_matrix
    ker = G.n_vertices - dense_rank(I)
    table = boundary_weight_ranks(G)
    assert h1_formula_check(G)
    assert table[1] == {-2: ker, -1: 2 * G.genus, 0: G.c_gamma}
    assert sum(table[1].values()) == ker + 2 * G.genus + G.c_gamma


@pytest.mark.parametrize("name", sorted(SUITE))
def test_torsion_and_duality(name):
    # [DERIVED] torsion of H_1 is the torsion of coker I; Betti numbers are symmetric
    G = SUITE[name]
    e1 = e1_boundary_from_plumbing(G)
    assert tuple(e1.torsion_h1) == snf_invariants(G.intersection_matrix)
    b = e1.homology_ranks()
    assert b[0] == b[3] == 1 and b[1] == b[2]


@pytest.mark.parametrize("name", sorted(KNOWN_H1))
def test_known_boundaries(name):
    e1 = e1_boundary_from_plumbing(SUITE[name])
    assert (e1.homology_ranks()[1], tuple(e1.torsion_h1)) == KNOWN_H1[name]


def test_random_trees_are_reproducible():
    # [TRIVIAL]
    a = random_tree(6, np.random.default_rng(3))
    b = random_tree(6, np.random.default_rng(3))
    assert a.to_dict() == b.to_dict() and a.n_edges == 5 and a.c_gamma == 0


def test_graph_validation():
    # [TRIVIAL]
    with pytest.raises(InputError):
        PlumbingGraph([0, 0], [-1])
    with pytest.raises(InputError):
        PlumbingGraph([-1], [0])
    with pytest.raises(InputError):
        PlumbingGraph([0], [-1], [(0, 3)])


@pytest.mark.parametrize("name", ["three_spheres", "three_spheres_path", "s2xs2_two_lines", "s2xs2_smooth"])
def test_plumbing_matches_simplicial_boundary(name):
    # [DERIVED] weights of H(∂U) from the plumbing E¹ equal the simplicial ones
    M = model(name)
    G = dual_graph(M)
    W = weight_table(pair_complex(name, "dU"), integral=False)
    simp = {k: {l: r for l, r in W[k].graded.items() if r} for k in range(4) if k in W}
    plum = {k: {l: r for l, r in v.items() if r} for k, v in boundary_weight_ranks(G).items()}
    assert all(simp.get(k, {}) == plum[k] for k in range(4))


@pytest.mark.parametrize("name", sorted(SUITE))
def test_purity_of_links(name):
    # [DERIVED] negative definite graphs pass; degenerate forms fail the precondition
    G = SUITE[name]
    rep = purity_report(G)
    nondeg = dense_rank(G.intersection_matrix) == G.n_vertices
    if nondeg:
        assert rep["status"] == "pass", rep
    else:
        assert rep["status"] == "precondition_failed"
