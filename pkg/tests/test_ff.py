import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fastrank.errors import NotInvertibleError
from fastrank.ff import DEFAULT_FIELD, MERSENNE61, PrimeField, as_rng, substream

P = MERSENNE61
elems = st.integers(0, P - 1)
# second large prime to exercise the object-dtype path
BIG = PrimeField(2**62 - 57)
SMALL = PrimeField(1_000_003)


def test_small_field_examples(F7):
    assert F7.add(3, 5) == 1
    assert F7.mul(6, 6) == 1
    assert F7.inv(3) == 5
    assert F7.inv(1) == 1
    assert F7.inv(6) == 6


def test_inverse_of_minus_one():
    assert DEFAULT_FIELD.inv(P - 1) == P - 1


def test_zero_has_no_inverse(F7):
    with pytest.raises(NotInvertibleError):
        F7.inv(0)
    with pytest.raises(ZeroDivisionError):
        DEFAULT_FIELD.inv(P)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        PrimeField(15)
    with pytest.raises(ValueError):
        PrimeField(2)


def test_mul_zero_absorbs():
    F = DEFAULT_FIELD
    x = F.sample(as_rng(0), 1000)
    assert not F.mul(F.zeros(1000), x).any()


@pytest.mark.parametrize("F", [DEFAULT_FIELD, BIG, SMALL], ids=["m61", "object", "small"])
@given(a=st.integers(0, 2**64), b=st.integers(0, 2**64), c=st.integers(0, 2**64))
def test_field_axioms(F, a, b, c):
    a, b, c = (x % F.p for x in (a, b, c))
    A = F.asarray(np.array([a], dtype=object))
    Bv = F.asarray(np.array([b], dtype=object))
    C = F.asarray(np.array([c], dtype=object))
    assert int(F.add(A, Bv)[0]) == (a + b) % F.p
    assert int(F.sub(A, Bv)[0]) == (a - b) % F.p
    assert int(F.mul(A, Bv)[0]) == a * b % F.p
    assert int(F.neg(A)[0]) == -a % F.p
    assert np.array_equal(F.mul(F.mul(A, Bv), C), F.mul(A, F.mul(Bv, C)))
    assert np.array_equal(F.mul(A, F.add(Bv, C)), F.add(F.mul(A, Bv), F.mul(A, C)))
    if a:
        assert F.mul(a, F.inv(a)) == 1


def test_vectorised_mul_matches_python_ints():
    rng = as_rng(1)
    F = DEFAULT_FIELD
    a = F.sample(rng, 10_000)
    b = F.sample(rng, 10_000)
    got = F.mul(a, b)
    want = [int(x) * int(y) % P for x, y in zip(a, b)]
    assert [int(x) for x in got] == want


@pytest.mark.parametrize("F", [DEFAULT_FIELD, BIG, SMALL, PrimeField(7)], ids=["m61", "object", "small", "seven"])
@pytest.mark.parametrize("shape", [(3, 4, 5), (40, 70, 30), (2, 3000, 2), (1, 1, 1)])
def test_matmul_exact(F, shape):
    m, k, n = shape
    rng = as_rng(sum(shape))
    A = F.sample(rng, (m, k))
    B = F.sample(rng, (k, n))
    want = (A.astype(object) @ B.astype(object)) % F.p
    assert np.array_equal(F.matmul(A, B).astype(object), want)


def test_matmul_extreme_entries():
    F = DEFAULT_FIELD
    A = np.full((5, 4100), P - 1, dtype=np.uint64)
    B = np.full((4100, 3), P - 1, dtype=np.uint64)
    assert (F.matmul(A, B) == 4100 % P).all()


def test_scatter_add_sums_duplicates(F7):
    D = F7.scatter_add((1, 1), [0, 0], [0, 0], [1, 1])
    assert D.tolist() == [[2]]
    big = DEFAULT_FIELD.scatter_add((1, 1), [0] * 5, [0] * 5, [P - 1] * 5)
    assert int(big[0, 0]) == (5 * (P - 1)) % P


def test_asarray_reduces_negatives_and_big_ints():
    F = DEFAULT_FIELD
    assert F.asarray([-1]).tolist() == [P - 1]
    assert F.asarray(np.array([2**70], dtype=object)).tolist() == [2**70 % P]


def test_powers_and_vpow():
    F = PrimeField(101)
    assert F.powers(3, 4, start=2).tolist() == [9, 27, 81, 243 % 101]
    base = np.array([2, 3, 5], dtype=np.uint64)
    assert F.vpow(base, 10).tolist() == [pow(b, 10, 101) for b in (2, 3, 5)]


def test_sampling_determinism():
    F = DEFAULT_FIELD
    assert np.array_equal(F.sample(as_rng(42), 10), F.sample(as_rng(42), 10))
    assert F.sample(as_rng(42), None) == F.sample(as_rng(42), None)
    assert not np.array_equal(F.sample(as_rng(42), 10), F.sample(as_rng(43), 10))


def test_substreams_are_named_and_reproducible():
    a = substream(5, "rank", "trial", 0).integers(0, 2**62, 4)
    b = substream(5, "rank", "trial", 0).integers(0, 2**62, 4)
    c = substream(5, "rank", "trial", 1).integers(0, 2**62, 4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_sample_mean_near_half_p():
    x = DEFAULT_FIELD.sample(as_rng(3), 100_000).astype(np.float64)
    assert abs(x.mean() / P - 0.5) < 0.01


def test_sample_nonzero_never_zero():
    F = DEFAULT_FIELD
    assert F.sample_nonzero(as_rng(4), 1_000_000).all()
    tiny = PrimeField(3)
    assert tiny.sample_nonzero(as_rng(4), 100_000).all()


def test_n4_assumption():
    assert DEFAULT_FIELD.supports_dimension(2**15)
    assert not PrimeField(101).supports_dimension(10)
