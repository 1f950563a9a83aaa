import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fastrank.errors import DimensionError
from fastrank.ff import DEFAULT_FIELD, PrimeField, as_rng
from fastrank.polyeval import (degree, horner, interpolate, multipoint_eval, poly_add, power_table,
                               vandermonde_inverse)

F = DEFAULT_FIELD
seeds = st.integers(0, 2**32 - 1)


def test_eval_examples(F7):
    assert multipoint_eval([1, 0, 1], [2, 3], F7).tolist() == [5, 3]
    assert multipoint_eval([9], [0, 5, 123], F).tolist() == [9, 9, 9]


def test_eval_degree_50_vs_horner():
    rng = as_rng(0)
    f = F.sample(rng, 51)
    pts = F.sample(rng, 30)
    assert multipoint_eval(f, pts).tolist() == [horner(f, x) for x in pts]


def test_batched_eval_rows():
    rng = as_rng(1)
    C = F.sample(rng, (4, 7))
    pts = F.sample(rng, 5)
    out = multipoint_eval(C, pts)
    assert out.shape == (4, 5)
    assert all(out[i].tolist() == [horner(C[i], x) for x in pts] for i in range(4))


def test_interpolate_examples(F7):
    assert interpolate([(1, 2), (2, 3)], F=F7).tolist() == [1, 1]
    assert interpolate([(5, 9)]).tolist() == [9]


def test_duplicate_points_rejected():
    with pytest.raises(DimensionError):
        interpolate([(1, 2), (1, 3)])
    with pytest.raises(DimensionError):
        vandermonde_inverse([4, 4])


@given(seeds, st.integers(1, 25))
def test_roundtrip(seed, n):
    rng = as_rng(seed)
    f = F.sample(rng, n)
    pts = np.unique(F.sample(rng, n))
    if len(pts) < n:
        return
    assert np.array_equal(interpolate(pts, multipoint_eval(f, pts)), f)


@given(seeds, st.integers(1, 12))
def test_vandermonde_inverse(seed, n):
    pts = F.powers(int(F.sample_nonzero(as_rng(seed), None)), n, start=1)
    if len(set(pts.tolist())) < n:
        return
    W = power_table(pts, n).T  # W[i, d] = pts_i ** d
    assert np.array_equal(F.matmul(vandermonde_inverse(pts), W), F.eye(n))


@given(seeds, st.integers(1, 20), st.integers(1, 20))
def test_linearity(seed, a, b):
    rng = as_rng(seed)
    f, g = F.sample(rng, a), F.sample(rng, b)
    pts = F.sample(rng, 6)
    assert np.array_equal(multipoint_eval(poly_add(f, g), pts), F.add(multipoint_eval(f, pts), multipoint_eval(g, pts)))


def test_degree_and_trailing_zeros():
    assert degree([1, 2, 0, 0]) == 1
    assert degree([0]) == -1
    G = PrimeField(13)
    assert multipoint_eval([3, 1, 0, 0], [2], G).tolist() == [5]
