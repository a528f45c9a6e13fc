"""Column-reduction kernel and sparse linear algebra."""

from fractions import Fraction

import numpy as np
import pytest

from oracles import dense_rank
from weightlab import _pykernel, kernel
from weightlab.linalg import Reduction, SparseMatrix, nullspace, rank, solve, vec_add


def random_int_matrix(rng, m, n, density=0.3, lo=-3, hi=3):
    A = rng.integers(lo, hi + 1, size=(m, n))
    A[rng.random((m, n)) > density] = 0
    return A


def to_kernel_cols(A):
    cols = []
    for j in range(A.shape[1]):
        rows = [int(i) for i in np.nonzero(A[:, j])[0]]
        cols.append((rows, [int(A[i, j]) for i in rows]))
    return cols


def _dense(cols, m):
    out = np.zeros((m, len(cols)), dtype=object)
    for j, (rows, vals) in enumerate(cols):
        for i, v in zip(rows, vals):
            out[i, j] = v
    return out


@pytest.mark.parametrize("seed", range(20))
def test_python_kernel_invariants(seed):
    # [DERIVED] R = D V, distinct lows, V upper triangular with nonzero diagonal
    rng = np.random.default_rng(seed)
    A = random_int_matrix(rng, 12, 15)
    R, V, lows = _pykernel.reduce_columns(to_kernel_cols(A), True)
    Rd, Vd = _dense(R, 12), _dense(V, 15)
    assert (A.astype(object).dot(Vd) == Rd).all()
    nz = [l for l in lows if l >= 0]
    assert len(nz) == len(set(nz))
    for j in range(15):
        assert Vd[j, j] != 0 and not any(Vd[i, j] for i in range(j + 1, 15))
    assert len(nz) == dense_rank(A)


@pytest.mark.skipif(kernel.BACKEND != "cython", reason="compiled kernel not built")
@pytest.mark.parametrize("seed", range(20))
def test_compiled_kernel_matches_python(seed):
    # [DERIVED] the two backends produce identical reductions
    rng = np.random.default_rng(100 + seed)
    A = random_int_matrix(rng, 20, 25, density=0.25)
    cols = to_kernel_cols(A)
    assert kernel._ckernel.reduce_columns(cols, True) == _pykernel.reduce_columns(cols, True)
    assert kernel._ckernel.reduce_columns(cols, False)[2] == _pykernel.reduce_columns(cols, False)[2]


@pytest.mark.skipif(kernel.BACKEND != "cython", reason="compiled kernel not built")
def test_compiled_kernel_overflow_falls_back():
    # [TRIVIAL] entries beyond int64 are handled by the Python fallback
    big = 2 ** 70
    cols = [([0, 1], [big, 1]), ([0, 1], [1, big])]
    with pytest.raises(OverflowError):
        kernel._ckernel.reduce_columns(cols, True)
    assert kernel.reduce_columns(cols, True) == _pykernel.reduce_columns(cols, True)


def test_sparse_matrix_algebra():
    # [TRIVIAL]
    A = SparseMatrix.from_dense([[1, 0, 2], [0, -1, 0]])
    B = SparseMatrix.from_dense([[1, 0], [0, 1], [1, 1]])
    assert (A @ B).to_lists() == [[3, 2], [0, -1]]
    assert A.transpose().shape == (3, 2)
    assert (A - A).is_zero()
    assert A.apply({0: 1, 2: 1}) == {0: 3}
    assert SparseMatrix.identity(3).to_lists() == np.eye(3, dtype=int).tolist()
    blk = SparseMatrix.block([2, 1], [3, 2], {(0, 0): A, (1, 1): SparseMatrix.from_dense([[5, 6]])})
    assert blk.to_lists() == [[1, 0, 2, 0, 0], [0, -1, 0, 0, 0], [0, 0, 0, 5, 6]]
    assert A.submatrix([1], [1, 2]).to_lists() == [[-1, 0]]


@pytest.mark.parametrize("seed", range(10))
def test_rank_solve_nullspace(seed):
    # [DERIVED] against dense Fraction elimination
    rng = np.random.default_rng(200 + seed)
    A = random_int_matrix(rng, 8, 10, density=0.4)
    M = SparseMatrix.from_dense(A.tolist())
    assert rank(M) == dense_rank(A)
    for v in nullspace(M):
        assert not M.apply(v)
    assert len(nullspace(M)) == 10 - dense_rank(A)
    x = {j: int(rng.integers(-2, 3)) for j in range(10)}
    b = M.apply(x)
    y = solve(M, b)
    assert y is not None and M.apply(y) == b
    # a vector outside the column space has no solution
    if dense_rank(A) < 8:
        for i in range(8):
            e = {i: 1}
            if dense_rank(np.column_stack([A, np.eye(8, dtype=int)[:, i]])) > dense_rank(A):
                assert solve(M, e) is None
                break


def test_reduction_with_fractions():
    # [TRIVIAL] rational entries are scaled into the integer kernel
    M = SparseMatrix.from_dense([[Fraction(1, 2), 1], [0, Fraction(1, 3)]])
    red = Reduction(M)
    assert red.rank == 2
    x = red.solve({0: 1, 1: 1})
    assert M.apply(x) == {0: 1, 1: 1}
    assert vec_add({0: 1}, {0: -1}) == {}
