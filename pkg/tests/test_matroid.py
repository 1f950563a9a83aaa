from itertools import combinations

import numpy as np
import pytest

from fastrank.errors import DimensionError
from fastrank.ff import DEFAULT_FIELD, as_rng
from fastrank.instances import rank_deficient_dense
from fastrank.matroid import (disjoint_bases, max_disjoint_bases, parity_compress, partition_into_bases,
                              union_stack, verify_partition)
from fastrank.rank import dense_rank
from oracles import count_disjoint_bases

F = DEFAULT_FIELD


def k4_incidence():
    """Signed incidence vectors of K4's edges, dropping vertex 3's row."""
    edges = list(combinations(range(4), 2))
    D = F.zeros((3, len(edges)))
    for j, (u, v) in enumerate(edges):
        if u < 3:
            D[u, j] = 1
        if v < 3:
            D[v, j] = F.p - 1
    return D


def dup_identity(b, copies):
    return np.concatenate([F.eye(b)] * copies, axis=1)


def test_parity_compress_noop_and_shape():
    D = F.sample(as_rng(0), (10, 8))
    assert parity_compress(D, 1) is D or np.array_equal(parity_compress(D, 1), D)
    big = rank_deficient_dense(200, 12, 5, as_rng(1))
    out = parity_compress(big, 2, as_rng(2))
    assert out.shape == (44, 12)
    with pytest.raises(DimensionError):
        parity_compress(F.zeros((3, 5)), 1)


def test_parity_compress_keeps_independent_pairs():
    bad = 0
    for s in range(300):
        rng = as_rng(s)
        k = 3
        D = rank_deficient_dense(150, 40, 12, rng)
        out = parity_compress(D, k, rng)
        cols = list(range(2 * k))
        bad += dense_rank(out[:, cols]) != dense_rank(D[:, cols])
        bad += dense_rank(out) < min(dense_rank(D), 2 * k)
    assert bad <= 3


def test_union_stack_examples():
    D = F.sample(as_rng(1), (3, 5))
    B = union_stack(D, 1, 1)
    assert dense_rank(B) == dense_rank(D)
    ok = sum(dense_rank(union_stack(dup_identity(2, 2), 2, s)) == 4 for s in range(100))
    assert ok >= 99
    D[:, 2] = 0
    assert not union_stack(D, 3, 2)[:, 2].any()


def test_union_stack_rank_bound():
    for s in range(30):
        rng = as_rng(s)
        D = rank_deficient_dense(4, 7, 3, rng)
        b = dense_rank(D)
        for k in (1, 2, 3):
            assert dense_rank(union_stack(D, k, rng)) <= min(k * b, 7)


def test_disjoint_examples():
    A = dup_identity(2, 2)
    parts = disjoint_bases(A, 2, 0)
    assert parts is not None and verify_partition(A, parts, 2)
    assert sorted(sorted(p) for p in parts) in ([[0, 1], [2, 3]], [[0, 3], [1, 2]])
    assert disjoint_bases(A, 3, 0) is None


def test_k4_has_two_spanning_trees():
    D = k4_incidence()
    assert dense_rank(D) == 3
    parts = disjoint_bases(D, 2, 0)
    assert parts is not None and verify_partition(D, parts, 3)
    assert disjoint_bases(D, 3, 0) is None
    assert count_disjoint_bases(list(range(6)), lambda c: dense_rank(D[:, c])) == 2
    assert max_disjoint_bases(D, 0)[0] == 2


def test_max_examples():
    opt, parts = max_disjoint_bases(dup_identity(3, 3), 0)
    assert opt == 3 and verify_partition(dup_identity(3, 3), parts, 3)
    assert max_disjoint_bases(F.eye(4), 0)[0] == 1
    with pytest.raises(ValueError):
        max_disjoint_bases(F.zeros((2, 3)), 0)


def test_rank_zero_gives_empty_bases():
    assert disjoint_bases(F.zeros((2, 3)), 2, 0) == [[], []]


def test_partition_direct():
    D = dup_identity(2, 3)
    parts = partition_into_bases(D, list(range(6)), 3, 2)
    assert verify_partition(D, parts, 2)
    assert not verify_partition(D, [[0, 2], [1, 3]], 2)
    assert not verify_partition(D, [[0, 1], [1, 3]], 2)


def test_random_vs_exhaustive():
    bad = 0
    for s in range(60):
        rng = as_rng((7, s))
        n = int(rng.integers(2, 11))
        b = int(rng.integers(1, 4))
        D = rank_deficient_dense(b, n, b, rng)
        # sprinkle dependencies so packing numbers vary
        for j in rng.choice(n, size=n // 3, replace=False):
            D[:, j] = D[:, int(rng.integers(n))] if rng.random() < 0.5 else 0
        if dense_rank(D) == 0:
            continue
        want = count_disjoint_bases(list(range(n)), lambda c: dense_rank(D[:, c]))
        got, parts = max_disjoint_bases(D, rng)
        bad += got != want or not verify_partition(D, parts, dense_rank(D))
    assert bad == 0
