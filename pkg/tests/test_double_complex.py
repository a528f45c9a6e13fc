"""Double complexes of the five pairs and their total complexes."""

import pytest

from conftest import model, model_pairs, pair_complex
from weightlab.double_complex import (
    DoubleComplex,
    build_X,
    deleted_star_complement,
    oracle_homology,
    synthetic_nondegenerate,
    total,
)
from weightlab.errors import AnticommutationViolated
from weightlab.homology import homology_all
from weightlab.linalg import SparseMatrix


def _nonzero(h: dict) -> dict:
    return {k: v for k, v in h.items() if v != (0, ())}


@pytest.mark.parametrize("name,pair", model_pairs())
def test_axioms_and_total_differential(name, pair):
    # [DERIVED] ∂² = 0, δ² = 0, ∂δ + δ∂ = 0 blockwise and D² = 0 on Tot
    A = pair_complex(name, pair)
    rep = A.check_axioms()
    assert rep["ok"], rep
    T = total(A)
    for k in T.degrees:
        assert (T.D(k) @ T.D(k + 1)).is_zero()


@pytest.mark.parametrize("name,pair", model_pairs(exclude=("dU",)))
def test_total_homology_matches_space(name, pair):
    # [DERIVED] H(Tot A) ≅ H(space) over Z, ranks and torsion
    A = pair_complex(name, pair)
    assert _nonzero(homology_all(A.tot.chain_complex())) == _nonzero(oracle_homology(model(name), pair))


def test_known_total_homology():
    # [DERIVED] torus minus a point is a wedge of two circles; the ∂U of a
    # point on a surface is a circle; the three spheres form S²∨S²∨S²∨S¹
    h = lambda name, pair: _nonzero(homology_all(pair_complex(name, pair).tot.chain_complex()))
    assert h("torus_point", "XmY") == {0: (1, ()), 1: (2, ())}
    assert h("torus_point", "dU") == {0: (1, ()), 1: (1, ())}
    assert h("sphere_point", "dU") == {0: (1, ()), 1: (1, ())}
    assert h("three_spheres", "Y") == {0: (1, ()), 1: (1, ()), 2: (3, ())}
    assert h("torus_point", "XY") == {1: (2, ()), 2: (1, ())}


def test_deleted_star_complement_is_open_complement():
    # [DERIVED] deleting a point's star from the torus leaves a punctured torus
    M = model("torus_point")
    C = deleted_star_complement(M)
    assert _nonzero(homology_all(C)) == {0: (1, ()), 1: (2, ())}


def test_single_column_X():
    # [TRIVIAL]
    A = build_X(model("torus_point"))
    assert A.s_range == (0, 0)
    assert _nonzero(homology_all(A.tot.chain_complex())) == {0: (1, ()), 1: (2, ()), 2: (1, ())}


def test_bases_and_bidegrees():
    # [TRIVIAL] placement of the columns
    AY = pair_complex("three_spheres", "Y")
    assert AY.s_range == (0, 1)
    assert all(lab[0] == "chain" for lab in AY.bases[(1, 0)])
    AR = pair_complex("three_spheres", "X_XmY")
    assert AR.s_range == (-1, 0)
    assert all(t >= 2 for _, t in AR.bases)
    AU = pair_complex("three_spheres", "dU")
    tags = {lab[0] for v in AU.bases.values() for lab in v}
    assert tags == {"U", "L"}


def test_total_vector_split_roundtrip():
    # [TRIVIAL]
    A = pair_complex("torus_point", "dU")
    T = A.tot
    parts = {(0, 1): {0: 2}, (-1, 2): {1: -1}}
    parts = {st: v for st, v in parts.items() if A.dim(*st) > max(v)}
    vec = T.vector(parts)
    assert T.split(1, vec) == parts
    assert T.filtration(1) == sorted(T.filtration(1))


def test_truncations_and_shift():
    # [TRIVIAL]
    A = pair_complex("three_spheres", "Y")
    low, high = A.truncate("le", 0), A.truncate("ge", 1)
    assert low.s_range == (0, 0) and high.s_range == (1, 1)
    assert sum(A.dim(*st) for st in A.bidegrees) == \
        sum(low.dim(*st) for st in low.bidegrees) + sum(high.dim(*st) for st in high.bidegrees)
    B = A.shift(2, -1)
    assert B.s_range == (2, 3) and B.check_axioms()["ok"]
    with pytest.raises(ValueError):
        A.truncate("lt", 0)


def test_broken_complex_is_rejected():
    # [TRIVIAL] commuting instead of anticommuting squares
    one = SparseMatrix.identity(1)
    bases = {(1, 1): ["a"], (1, 0): ["b"], (0, 1): ["c"], (0, 0): ["d"]}
    A = DoubleComplex(bases, {(1, 1): one, (0, 1): one}, {(1, 1): one, (1, 0): one})
    assert not A.check_axioms()["ok"]
    with pytest.raises(AnticommutationViolated):
        total(A)


def test_synthetic_complex():
    # [TRIVIAL]
    A = synthetic_nondegenerate()
    assert A.check_axioms()["ok"]
    assert _nonzero(homology_all(total(A).chain_complex())) == {}


def test_empty_divisor_pairs():
    # [TRIVIAL] a model without components gives empty Y-type complexes
    assert not model("sphere_empty_divisor").components
    assert pair_complex("sphere_empty_divisor", "Y").is_zero()
    assert pair_complex("sphere_empty_divisor", "dU").is_zero()
