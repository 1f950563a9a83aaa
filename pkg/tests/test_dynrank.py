from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.stateful import RuleBasedStateMachine, initialize, invariant, precondition, rule

from fastrank.dynrank import DynamicRank, DynRankConfig, Orientation, parse_script, run_script
from fastrank.errors import DimensionError, ParseError
from fastrank.ff import DEFAULT_FIELD, PrimeField, as_rng
from fastrank.instances import rank_deficient_dense
from fastrank.polyeval import power_table
from fastrank.rank import dense_rank
from oracles import vandermonde_minor_degree

F = DEFAULT_FIELD


def lowrank(rng, m, n, r=None):
    r = int(rng.integers(0, min(m, n) + 1)) if r is None else r
    return rank_deficient_dense(m, n, r, rng)


def check(st_):
    st_.check_invariants()
    assert st_.rank == dense_rank(st_.matrix)


def test_init_examples():
    assert DynamicRank(F.eye(2), 0).rank == 2
    assert DynamicRank(F.zeros((2, 3)), 0).rank == 0
    assert DynamicRank(F.eye(3), 0).rank_query() == 3


def test_init_matches_elimination():
    rng = as_rng(0)
    for _ in range(100):
        m, n = rng.integers(1, 12, 2)
        A = lowrank(rng, m, n)
        st_ = DynamicRank(A, rng)
        st_.check_invariants()
        assert st_.rank == dense_rank(A)


def test_rank_one_examples():
    st_ = DynamicRank(F.eye(2), 1)
    st_.rank_one_update(F.zeros(2), F.asarray([3, 4]))
    assert st_.rank == 2 and np.array_equal(st_.matrix, F.eye(2))
    st_.rank_one_update(F.asarray([0, -1]), F.asarray([0, 1]))
    assert st_.rank == 1
    st_.rank_one_update(F.asarray([-1, 0]), F.asarray([1, 0]))
    assert st_.rank == 0 and not st_.matrix.any()
    check(st_)


def test_zeroing_by_updates():
    rng = as_rng(3)
    A = lowrank(rng, 5, 7, 4)
    st_ = DynamicRank(A, rng)
    for i in range(5):
        e = F.zeros(5)
        e[i] = F.p - 1
        st_.rank_one_update(e, st_.matrix[i])
    assert st_.rank == 0
    check(st_)


def test_add_examples():
    st_ = DynamicRank(F.eye(2), 2)
    st_.add_row(F.zeros(2))
    assert st_.rank == 2 and st_.shape == (3, 2)
    check(st_)
    st_ = DynamicRank(F.asarray([[1, 2, 3], [4, 5, 6]]), 2)
    st_.add_col(F.asarray([2, 5]))
    assert st_.rank == 2
    check(st_)


def test_delete_examples():
    st_ = DynamicRank(F.asarray([[1, 0, 2], [3, 0, 6]]), 4)
    st_.delete_col(1)
    assert st_.shape == (2, 2) and st_.rank == 1
    check(st_)
    st_ = DynamicRank(F.asarray([[0, 0, 0], [1, 2, 3], [0, 0, 0]]), 4)
    st_.delete_row(1)
    assert st_.rank == 0 and st_.shape == (2, 3)
    check(st_)


def test_insert_positions():
    A = F.sample(as_rng(5), (3, 4))
    st_ = DynamicRank(A, 5)
    st_.add_col(F.asarray([7, 8, 9]), pos=1)
    st_.add_row(F.asarray([1, 2, 3, 4, 5]), pos=0)
    want = np.insert(A, 1, F.asarray([7, 8, 9]), axis=1)
    want = np.insert(want, 0, F.asarray([1, 2, 3, 4, 5]), axis=0)
    assert np.array_equal(st_.matrix, want)
    check(st_)


def test_errors():
    st_ = DynamicRank(F.eye(3), 0)
    with pytest.raises(DimensionError):
        st_.rank_one_update(F.zeros(2), F.zeros(3))
    with pytest.raises(IndexError):
        st_.delete_row(3)
    with pytest.raises(DimensionError):
        st_.add_row(F.zeros(2))
    st_ = DynamicRank(F.zeros((2, 3)), 0)
    with pytest.raises(DimensionError):
        st_.flip_representation()


def test_flip_roundtrip():
    rng = as_rng(6)
    for n in (1, 2, 5, 9):
        st_ = DynamicRank(lowrank(rng, n, n), rng)
        r = st_.rank
        st_.flip_representation()
        assert st_.orientation is Orientation.ROWS
        check(st_)
        st_.flip_representation()
        assert st_.rank == r
        check(st_)
    st_ = DynamicRank(F.eye(6), 1)
    st_.flip_representation()
    assert st_.rank == 6


def test_grow_rows_across_square():
    rng = as_rng(7)
    st_ = DynamicRank(lowrank(rng, 5, 8, 3), rng)
    seen = set()
    for _ in range(5):
        st_.add_row(F.sample(rng, 8))
        seen.add(st_.orientation)
        check(st_)
    assert st_.shape == (10, 8)
    assert seen == {Orientation.COLS, Orientation.ROWS}


def test_random_update_script_20x30():
    rng = as_rng(8)
    st_ = DynamicRank(lowrank(rng, 20, 30, 10), rng)
    for step in range(500):
        u = F.sample(rng, 20)
        v = F.sample(rng, 30)
        if step % 3 == 0:  # occasionally cancel a row to push the rank down
            i = int(rng.integers(20))
            u = F.zeros(20)
            u[i] = F.p - 1
            v = st_.matrix[i]
        st_.rank_one_update(u, v)
        assert st_.rank == dense_rank(st_.matrix)
    st_.check_invariants()


class DynRankMachine(RuleBasedStateMachine):
    """Random op sequences under small shapes; the oracle is fresh elimination."""

    @initialize(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 6), n=st.integers(1, 6))
    def setup(self, seed, m, n):
        self.rng = as_rng(seed)
        self.A = lowrank(self.rng, m, n)
        self.st = DynamicRank(self.A, self.rng, config=DynRankConfig(expected_updates=64))

    def _sparse_vec(self, n):
        v = F.sample(self.rng, n)
        v[self.rng.random(n) < 0.4] = 0
        return v

    @rule()
    def rank_one(self):
        m, n = self.A.shape
        u, v = self._sparse_vec(m), self._sparse_vec(n)
        self.st.rank_one_update(u, v)
        self.A = F.add(self.A, F.mul(u[:, None], v[None, :]))

    @rule()
    def cancel_row(self):
        m, n = self.A.shape
        i = int(self.rng.integers(m))
        u = F.zeros(m)
        u[i] = F.p - 1
        self.st.rank_one_update(u, self.A[i])
        self.A[i] = 0

    @precondition(lambda self: self.A.shape[0] < 8)
    @rule(dup=st.booleans())
    def add_row(self, dup):
        m, n = self.A.shape
        row = self.A[int(self.rng.integers(m))] if dup else self._sparse_vec(n)
        pos = int(self.rng.integers(m + 1))
        self.st.add_row(row, pos)
        self.A = np.insert(self.A, pos, row, axis=0)

    @precondition(lambda self: self.A.shape[1] < 8)
    @rule()
    def add_col(self):
        m, n = self.A.shape
        col = self._sparse_vec(m)
        pos = int(self.rng.integers(n + 1))
        self.st.add_col(col, pos)
        self.A = np.insert(self.A, pos, col, axis=1)

    @precondition(lambda self: self.A.shape[0] > 1)
    @rule()
    def delete_row(self):
        i = int(self.rng.integers(self.A.shape[0]))
        self.st.delete_row(i)
        self.A = np.delete(self.A, i, axis=0)

    @precondition(lambda self: self.A.shape[1] > 1)
    @rule()
    def delete_col(self):
        j = int(self.rng.integers(self.A.shape[1]))
        self.st.delete_col(j)
        self.A = np.delete(self.A, j, axis=1)

    @precondition(lambda self: self.A.shape[0] == self.A.shape[1])
    @rule()
    def flip(self):
        self.st.flip_representation()

    @invariant()
    def consistent(self):
        if not hasattr(self, "st"):
            return
        assert np.array_equal(self.st.matrix, self.A)
        self.st.check_invariants()
        assert self.st.rank == dense_rank(self.A)
        pts = self.st.points
        assert len(set(pts.tolist())) == len(pts)


TestDynRankMachine = DynRankMachine.TestCase
TestDynRankMachine.settings = settings(max_examples=40, stateful_step_count=40, deadline=None)


@pytest.mark.parametrize("m,n", [(m, n) for n in range(1, 9) for m in range(1, min(n, 4) + 1)])
def test_vandermonde_minor_degree(m, n):
    for I in combinations(range(1, n + 1), m):
        assert vandermonde_minor_degree(I, m) == sum(i * k for k, i in enumerate(I, 1))


def test_vandermonde_minor_example():
    import sympy

    x = sympy.Symbol("x")
    M = sympy.Matrix([[x ** (i * j) for j in (1, 2)] for i in (1, 3)])
    assert sympy.expand(M.det()) == x**7 - x**5


def test_sketch_preserves_rank():
    rng = as_rng(10)
    bad = 0
    for _ in range(200):
        m, n = int(rng.integers(1, 21)), int(rng.integers(1, 41))
        A = lowrank(rng, m, n)
        g = int(F.sample_nonzero(rng))
        pts = F.powers(g, n, start=1)
        V = power_table(pts, min(m, n), F, start=1).T
        bad += dense_rank(F.matmul(A, V)) != dense_rank(A)
    assert bad <= 2


def test_small_field_generator_check():
    with pytest.raises(DimensionError):
        DynamicRank(PrimeField(7).eye(2), 0, PrimeField(7))


def test_script_roundtrip():
    lines = ["# start", "QUERY", "R1 1 0 | -1 0", "QUERY", "ADDROW 0 5", "ADDCOL 1 1 1", "QUERY",
             "DELROW 0", "DELCOL 2", "QUERY"]
    st_ = DynamicRank(F.eye(2), 0)
    assert run_script(st_, lines, check=True) == [2, 1, 2, 1]
    assert [op for _, op, _ in parse_script(lines)] == ["QUERY", "R1", "QUERY", "ADDROW", "ADDCOL", "QUERY",
                                                       "DELROW", "DELCOL", "QUERY"]


@pytest.mark.parametrize("bad", ["R1 1 0", "FOO 1", "DELROW", "DELROW 1 2", "QUERY 3", "ADDROW x"])
def test_script_errors(bad):
    with pytest.raises(ParseError):
        list(parse_script([bad]))


def test_script_dimension_error_has_line_number():
    with pytest.raises(ParseError, match="line 2"):
        run_script(DynamicRank(F.eye(2), 0), ["QUERY", "ADDROW 1 2 3"])
