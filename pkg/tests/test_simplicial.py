"""Simplicial complexes, chains, subdivision and orientation."""

import random

import pytest

from weightlab import models
from weightlab.errors import NotPseudomanifold
from weightlab.simplicial import (
    Bary,
    Chain,
    Cochain,
    SimplicialComplex,
    barycentric_subdivide,
    boundary_matrix,
    coboundary_matrix,
    faces,
    is_dimensionally_transverse,
    make_simplex,
    orient,
    permutation_sign,
    support_intersection_dim,
)

COMPLEXES = {
    "sphere": models.tetrahedron_boundary(),
    "torus": models.torus7(),
    "rp2": models.rp2_6(),
    "circle": models.circle(5),
}


def test_faces_and_signs():
    # [TRIVIAL]
    assert make_simplex([3, 1, 2]) == (1, 2, 3)
    assert faces((0, 1, 2)) == [(1, 2), (0, 2), (0, 1)]
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([2, 0, 1]) == 1


def test_closure_and_counts():
    # [TRIVIAL]
    K = SimplicialComplex([(0, 1, 2)])
    assert K.f_vector == [3, 3, 1]
    assert K.euler_characteristic() == 1
    assert (0, 2) in K and (0, 3) not in K
    assert models.torus7().f_vector == [7, 21, 14]


@pytest.mark.parametrize("name", sorted(COMPLEXES))
def test_boundary_squares_to_zero(name):
    # [DERIVED]
    K = COMPLEXES[name]
    for k in range(2, K.dim + 1):
        assert (boundary_matrix(K, k - 1) @ boundary_matrix(K, k)).is_zero()
        assert coboundary_matrix(K, k - 1).to_lists() == boundary_matrix(K, k).transpose().to_lists()


@pytest.mark.parametrize("name", sorted(COMPLEXES))
def test_subdivision_chain_maps_and_theta_sd(name):
    # [DERIVED] sd and θ are chain maps and θ∘sd = id exactly
    K = COMPLEXES[name]
    Kp, sub = barycentric_subdivide(K)
    assert all(isinstance(v[0], Bary) for v in Kp.simplices(0))
    assert Kp.n(0) == sum(K.f_vector)
    for k in range(K.dim + 1):
        comp = sub.theta(k) @ sub.carry(k)
        assert comp.to_lists() == [[int(i == j) for j in range(K.n(k))] for i in range(K.n(k))]
        if k:
            assert boundary_matrix(Kp, k) @ sub.carry(k) == sub.carry(k - 1) @ boundary_matrix(K, k)
            assert boundary_matrix(K, k) @ sub.theta(k) == sub.theta(k - 1) @ boundary_matrix(Kp, k)


def test_chain_operations():
    # [TRIVIAL]
    K = models.tetrahedron_boundary()
    c = Chain(K, 1, {(0, 1): 1, (1, 2): 1, (0, 2): -1})
    assert c.is_cycle()
    assert Chain(K, 1, {(0, 1): 1}).boundary().coeffs == {(0,): -1, (1,): 1}
    phi = Cochain(K, 0, {(1,): 1})
    assert phi.coboundary().evaluate(Chain(K, 1, {(0, 1): 1})) == 1
    assert sorted(c.support().simplices(0)) == [(0,), (1,), (2,)]


def test_orientation():
    # [DERIVED]
    z = orient(models.torus7())
    assert z.is_cycle() and set(map(abs, z.coeffs.values())) == {1}
    assert len(z.coeffs) == 14
    seed = models.tetrahedron_boundary().simplices(2)[1]
    w = orient(models.tetrahedron_boundary(), [seed])
    assert w.coeffs[seed] == 1 and w.is_cycle()
    with pytest.raises(NotPseudomanifold):
        orient(SimplicialComplex([(0, 1, 2), (0, 1, 3), (0, 1, 4)]))


def test_support_dimensions():
    # [TRIVIAL]
    K = models.tetrahedron_boundary()
    L = SimplicialComplex([(0, 1)])
    xi = Chain(K, 2, {(0, 1, 2): 1})
    assert support_intersection_dim(xi, L) == 1
    assert support_intersection_dim(Chain(K, 1, {(2, 3): 1}), L) == -1
    assert support_intersection_dim(Chain(K, 1, {(1, 3): 1}), L) == 0
    point = SimplicialComplex([(3,)])
    assert is_dimensionally_transverse(Chain(K, 1, {(0, 1): 1}), [point])
    assert not is_dimensionally_transverse(Chain(K, 1, {(2, 3): 1}), [point])


def test_random_subdivision_roundtrip():
    # [DERIVED] θ(sd c) = c for random integer chains on the torus
    K = models.torus7()
    _, sub = barycentric_subdivide(K)
    rng = random.Random(7)
    for _ in range(20):
        k = rng.randint(0, 2)
        c = Chain(K, k, {s: rng.randint(-3, 3) for s in rng.sample(K.simplices(k), 4)})
        c = Chain(K, k, {s: v for s, v in c.coeffs.items() if v})
        assert sub.approximate(sub.apply(c)).coeffs == c.coeffs
