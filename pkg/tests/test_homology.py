"""Integer homology via Smith normal form."""

import numpy as np
import pytest

from oracles import homology_ranks, snf_invariants
from weightlab import models
from weightlab.errors import NotChainMap
from weightlab.homology import (
    ChainComplex,
    ChainMap,
    Homology,
    homology,
    homology_all,
    induced_map,
    invariant_factors,
    smith_normal_form,
)
from weightlab.linalg import SparseMatrix
from weightlab.simplicial import SimplicialComplex, barycentric_subdivide, boundary_matrix


@pytest.mark.parametrize("seed", range(15))
def test_snf_against_sympy(seed):
    # [DERIVED] factorization is exact and the invariant factors match sympy
    rng = np.random.default_rng(seed)
    m, n = rng.integers(1, 7, size=2)
    A = rng.integers(-6, 7, size=(m, n)).astype(object)
    U, D, V = smith_normal_form(A)
    assert (U.dot(D).dot(V) == A).all()
    diag = [D[i, i] for i in range(min(m, n))]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert not any(D[i, j] for i in range(m) for j in range(n) if i != j)
    assert tuple(d for d in invariant_factors(A) if d > 1) == snf_invariants(A)


KNOWN = {
    # [TRIVIAL] textbook homology
    "sphere": (models.tetrahedron_boundary(), {0: (1, ()), 1: (0, ()), 2: (1, ())}),
    "torus": (models.torus7(), {0: (1, ()), 1: (2, ()), 2: (1, ())}),
    "rp2": (models.rp2_6(), {0: (1, ()), 1: (0, (2,)), 2: (0, ())}),
    "circle": (models.circle(4), {0: (1, ()), 1: (1, ())}),
    "two_points": (SimplicialComplex([(0,), (1,)]), {0: (2, ())}),
}


@pytest.mark.parametrize("name", sorted(KNOWN))
def test_known_homology(name):
    K, expected = KNOWN[name]
    assert homology_all(K) == expected


@pytest.mark.parametrize("name", ["sphere", "torus", "rp2"])
def test_subdivision_invariance_and_rational_oracle(name):
    # [DERIVED] H(K') ≅ H(K); Betti numbers match dense Fraction ranks
    K, expected = KNOWN[name]
    Kp, _ = barycentric_subdivide(K)
    assert homology_all(Kp) == expected
    C = ChainComplex.from_simplicial(K)
    betti = homology_ranks({k: C.dim(k) for k in C.degrees}, C.boundary)
    assert betti == {k: r for k, (r, _) in expected.items() if r}


def test_relative_homology():
    # [DERIVED] H(torus, point) and H(disk, boundary)
    T = models.torus7()
    pt = SimplicialComplex([(0,)])
    assert homology_all(ChainComplex.relative(T, pt)) == {0: (0, ()), 1: (2, ()), 2: (1, ())}
    D = SimplicialComplex([(0, 1, 2)])
    bd = SimplicialComplex([(0, 1), (1, 2), (0, 2)])
    rel = {k: v for k, v in homology_all(ChainComplex.relative(D, bd)).items() if v != (0, ())}
    assert rel == {2: (1, ())}


def test_generators_and_coordinates():
    # [DERIVED] generators are cycles and have unit coordinates
    H = Homology(models.torus7())
    g = H.group(1)
    assert g.rank == 2
    for j, z in enumerate(g.generators):
        assert z.is_cycle()
        assert g.coordinates(z) == [int(i == j) for i in range(2)]
    # a boundary has zero class
    b = boundary_matrix(models.torus7(), 2).cols[0]
    assert H.coordinates(1, b)[0] == [0, 0]
    # torsion residue of the RP² generator
    Hr = Homology(models.rp2_6())
    t = Hr.group(1).torsion_generators[0]
    assert Hr.coordinates(1, t.to_vector())[1] == [1]
    assert homology(models.rp2_6(), 1, ring="Q").rank == 0


def test_generator_signs_normalized():
    # [TRIVIAL] the first nonzero entry of every free generator is positive
    H = Homology(models.torus7())
    for k in (0, 1, 2):
        for z in H.group(k).generators:
            vec = z.to_vector()
            assert vec[min(vec)] > 0


def test_induced_map_and_chain_map_check():
    # [DERIVED] θ : C(K') → C(K) induces the identity on H_2 of the sphere
    K = models.tetrahedron_boundary()
    Kp, sub = barycentric_subdivide(K)
    f = ChainMap(ChainComplex.from_simplicial(Kp), ChainComplex.from_simplicial(K),
                 {k: sub.theta(k) for k in range(3)})
    assert abs(induced_map(f, 2).matrix[0, 0]) == 1
    bad = ChainMap(ChainComplex.from_simplicial(K), ChainComplex.from_simplicial(K),
                   {1: SparseMatrix.identity(K.n(1))})
    with pytest.raises(NotChainMap):
        bad.check()
