"""Poincaré duality on strata, intersection with components and transfers."""

import numpy as np
import pytest

from conftest import model
from weightlab.duality import (
    cap_level,
    cap_operator,
    cup_intersection_number,
    gysin_square_check,
    intersection_number,
    is_realization_transverse,
    pd_chain,
    pd_identity_check,
    pd_isomorphism_check,
    pd_sign,
    perp_level_differential,
    transfer,
    transverse_model,
)
from weightlab.errors import NotOriented
from weightlab.homology import homology_all
from weightlab.ncd import level
from weightlab.simplicial import Cochain

WITH_X = ["torus_point", "sphere_point", "sphere_two_points", "sphere_empty_divisor",
          "s2xs2_smooth", "s2xs2_two_lines", "three_spheres", "three_spheres_path"]


def strata(M):
    return [((), M.X)] + [x for p in range(1, M.max_level + 1) for x in level(M, p)]


def test_pd_sign():
    # [TRIVIAL] ε_i = (-1)^{i(i+1)/2}
    assert [pd_sign(i) for i in range(6)] == [1, -1, -1, 1, 1, -1]


@pytest.mark.parametrize("name", WITH_X)
def test_pd_chain_identity_every_stratum(name):
    # [DERIVED] ∂∘pd = pd∘δ exactly and pd is an isomorphism on homology
    M = model(name)
    for sid, _ in strata(M):
        TM = transverse_model(M, sid)
        assert pd_identity_check(TM)
        rep = pd_isomorphism_check(TM)
        assert rep.passed, rep.details
        hom = homology_all(TM.S)
        for k, row in rep.details.items():
            assert (row["rank"], tuple(row["torsion"])) == hom.get(k, (0, ()))


@pytest.mark.parametrize("name", [n for n in WITH_X if model(n).components])
def test_gysin_squares(name):
    # [DERIVED] PD∘i* = ∩∘PD on homology for every (stratum, component)
    M = model(name)
    for sid, _ in strata(M):
        for a in M.index_set:
            if a not in sid:
                rep = gysin_square_check(M, sid, a)
                assert rep.passed, (sid, a, rep.details)


@pytest.mark.parametrize("name", ["three_spheres", "s2xs2_two_lines", "three_spheres_path", "torus_point"])
def test_cap_operator_identities(name):
    # [DERIVED] ∩² = 0 and ∂∩ + ∩∂ = 0 on the transverse levels
    M = model(name)
    checked = 0
    for p in range(0, M.max_level):
        for k in range(3, 2 * (M.n - p) + 1):
            anti = perp_level_differential(M, p + 1, k - 2) @ cap_level(M, p, k) \
                + cap_level(M, p, k - 1) @ perp_level_differential(M, p, k)
            assert anti.is_zero()
            checked += 1
            if k >= 4:
                assert (cap_level(M, p + 1, k - 2) @ cap_level(M, p, k)).is_zero()
    assert checked or M.n == 1


def test_cap_operator_is_restriction():
    # [TRIVIAL] the constant 0-cocycle restricts to the constant cocycle
    M = model("torus_point")
    cap = cap_operator(M, (), 0, 2)
    one = {j: 1 for j in range(M.X.n(0))}
    assert cap.apply(one) == {0: 1}


def test_transfer_torus_to_point():
    # [DERIVED] [X] ↦ +[pt] under H_2(X) → H_0(Y)
    M = model("torus_point")
    t = transfer(M, (), 0, 2)
    assert t.matrix.tolist() == [[1]]
    assert transfer(M, (), 0, 1).matrix.shape == (0, 2)


def test_intersection_numbers_three_spheres():
    # [DERIVED] Y_a·Y_b = 1 for a ≠ b; the cup pairing reproduces the
    # self-intersection data supplied with the file
    M = model("three_spheres")
    Q = np.array([[cup_intersection_number(M, a, b) for b in range(3)] for a in range(3)], dtype=object)
    assert Q.tolist() == [[0, 1, 1], [1, 0, 1], [1, 1, 2]]
    assert [Q[i, i] for i in range(3)] == list(M.flags["self_intersections"])
    for a in range(3):
        for b in range(3):
            if a != b:
                assert intersection_number(M, a, b) == Q[a, b]


def test_realizations_are_transverse():
    # [DERIVED] pd of every cocycle generator avoids the deep strata in excess dimension
    M = model("three_spheres")
    TM = transverse_model(M, ())
    for i in range(TM.d + 1):
        for g in TM.homology.group(TM.d - i).generators:
            phi = Cochain.from_vector(TM.S, i, dict(g))
            assert is_realization_transverse(M, (), phi)
            xi = pd_chain(phi, TM)
            assert TM.pd_inverse(xi) == phi


def test_divisor_only_has_no_ambient_model():
    # [TRIVIAL]
    with pytest.raises(NotOriented):
        transverse_model(model("two_spheres_two_points"), ())
