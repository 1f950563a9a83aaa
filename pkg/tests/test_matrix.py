import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fastrank.errors import DimensionError, SingularMatrixError
from fastrank.ff import DEFAULT_FIELD, PrimeField, as_rng
from fastrank.instances import rank_deficient_dense
from fastrank.matrix import (SparseMatrix, det, gauss_rank, inverse, is_identity, rank_normal_form,
                             woodbury_factors, woodbury_update)
from oracles import fraction_free_rank

F = DEFAULT_FIELD
seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 9)


def _lowrank(seed, m, n, field=F):
    rng = as_rng(seed)
    r = int(rng.integers(0, min(m, n) + 1))
    return rank_deficient_dense(m, n, r, rng, field)


def test_duplicate_triplets_are_summed(F7):
    A = SparseMatrix.from_triplets(1, 1, [(0, 0, 1), (0, 0, 1)], F7)
    assert A.nnz == 2
    assert A.to_dense().tolist() == [[2]]
    assert A.coalesce().nnz == 1


def test_empty_triplets_give_zero_matrix():
    A = SparseMatrix.from_triplets(3, 4)
    assert A.to_dense().shape == (3, 4)
    assert not A.to_dense().any()


def test_bad_triplets_rejected():
    with pytest.raises(DimensionError):
        SparseMatrix.from_triplets(2, 2, [(2, 0, 1)])


@given(seeds, dims, dims)
def test_dense_sparse_roundtrip(seed, m, n):
    D = F.sample(as_rng(seed), (m, n))
    D[D % 3 == 0] = 0
    assert np.array_equal(SparseMatrix.from_dense(D).to_dense(), D)


def test_normalize_strips_zero_lines():
    A = SparseMatrix.from_triplets(4, 5, [(1, 3, 2), (3, 0, 5)])
    B, rmap, cmap = A.normalize()
    assert B.shape == (2, 2)
    assert rmap.tolist() == [1, 3] and cmap.tolist() == [0, 3]
    assert gauss_rank(B.to_dense()).rank == 2


def test_select_and_transpose():
    D = F.asarray(np.arange(12).reshape(3, 4))
    A = SparseMatrix.from_dense(D)
    assert np.array_equal(A.T.to_dense(), D.T)
    assert np.array_equal(A.select_cols([3, 1]).to_dense(), D[:, [3, 1]])
    assert np.array_equal(A.select_rows([2]).to_dense(), D[[2]])


def test_gauss_rank_examples():
    prof = gauss_rank(F.eye(3))
    assert (prof.rank, prof.col_profile.tolist(), prof.row_profile.tolist()) == (3, [0, 1, 2], [0, 1, 2])
    prof = gauss_rank(F.asarray([[1, 2], [2, 4]]))
    assert (prof.rank, prof.col_profile.tolist(), prof.row_profile.tolist()) == (1, [0], [0])
    assert gauss_rank(F.zeros((0, 3))).rank == 0


def test_gauss_rank_vs_fraction_free_8x12():
    for seed in range(20):
        D = _lowrank(seed, 8, 12)
        assert gauss_rank(D).rank == fraction_free_rank(D.tolist(), F.p)


@given(seeds, dims, dims)
def test_rank_profiles(seed, m, n):
    D = _lowrank(seed, m, n)
    prof = gauss_rank(D)
    assert prof.rank == gauss_rank(D.T).rank == fraction_free_rank(D.tolist(), F.p)
    assert list(prof.col_profile) == sorted(prof.col_profile)
    # profile columns are independent and span the column space
    assert gauss_rank(D[:, prof.col_profile]).rank == prof.rank
    sub = D[np.ix_(prof.row_profile, prof.col_profile)]
    assert det(sub) != 0 or prof.rank == 0


@given(seeds, dims, dims)
def test_col_profile_is_lexicographically_first(seed, m, n):
    D = _lowrank(seed, m, n, PrimeField(5))
    G = PrimeField(5)
    prof = gauss_rank(D, G)
    greedy, cur = [], 0
    for j in range(n):
        r = gauss_rank(D[:, greedy + [j]], G).rank
        if r > cur:
            greedy.append(j)
            cur = r
    assert prof.col_profile.tolist() == greedy


def test_rank_normal_form_examples():
    X, Y, r = rank_normal_form(F.asarray([[1, 0], [0, 0]]))
    assert r == 1 and is_identity(X) and is_identity(Y)
    B = F.asarray([[0, 1], [1, 0]])
    X, Y, r = rank_normal_form(B)
    assert r == 2 and is_identity(F.matmul(F.matmul(X, B), Y))


@given(seeds, dims)
def test_rank_normal_form_property(seed, m):
    B = _lowrank(seed, m, m)
    X, Y, r = rank_normal_form(B)
    D = F.zeros((m, m))
    D[np.arange(r), np.arange(r)] = 1
    assert np.array_equal(F.matmul(F.matmul(X, B), Y), D)
    assert det(X) != 0 and det(Y) != 0
    assert r == gauss_rank(B).rank


def test_inverse_examples(F7):
    assert is_identity(inverse(F.eye(4)))
    assert inverse(F7.asarray([[2, 0], [0, 3]]), F7).tolist() == [[4, 0], [0, 5]]
    with pytest.raises(SingularMatrixError):
        inverse(F.asarray([[1, 2], [2, 4]]))


def test_inverse_random_10x10():
    for seed in range(10):
        B = F.sample(as_rng(seed), (10, 10))
        assert is_identity(F.matmul(B, inverse(B)))


def test_det_matches_product_rule():
    rng = as_rng(9)
    A, B = F.sample(rng, (5, 5)), F.sample(rng, (5, 5))
    assert det(F.matmul(A, B)) == det(A) * det(B) % F.p
    assert det(F.asarray([[0, 1], [1, 0]])) == F.p - 1


def test_woodbury_examples():
    n = 4
    e1 = F.zeros((n, 1))
    e1[0, 0] = 1
    got = woodbury_update(F.eye(n), e1, e1)
    want = F.eye(n)
    want[0, 0] = F.inv(2)
    assert np.array_equal(got, want)
    Minv = inverse(F.sample(as_rng(1), (n, n)))
    assert np.array_equal(woodbury_update(Minv, F.zeros((n, 2)), F.sample(as_rng(2), (n, 2))), Minv)


def test_woodbury_singular_capacitance():
    n = 3
    U = F.zeros((n, 1))
    U[0, 0] = F.p - 1
    V = F.zeros((n, 1))
    V[0, 0] = 1  # I + U V^T kills e_1
    with pytest.raises(SingularMatrixError):
        woodbury_update(F.eye(n), U, V)


@given(seeds, st.integers(1, 12), st.integers(1, 3))
def test_woodbury_multiply_back(seed, n, k):
    rng = as_rng(seed)
    M = F.sample(rng, (n, n))
    U, V = F.sample(rng, (n, k)), F.sample(rng, (n, k))
    try:
        Minv = inverse(M)
        L, R = woodbury_factors(Minv, U, V)
    except SingularMatrixError:
        return
    new = F.add(Minv, F.matmul(L, R))
    assert is_identity(F.matmul(F.add(M, F.matmul(U, V.T)), new))
