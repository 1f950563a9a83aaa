"""Dynamic all-pairs edge connectivity in simple directed graphs.

With random x values, the edge-indexed matrix

    M[i, j] = x_ij  if head(e_i) == tail(e_j),   M[i, i] = -1,   0 otherwise

is invertible, and lambda(s, t) is the rank of M^{-1} restricted to rows of
edges leaving s and columns of edges entering t.  Edge insertion borders M
with -1 and applies a rank-2 correction; deletion zeroes the edge's row and
column with a rank-2 correction and then drops the bordered line.  Both
keep M^{-1} current through the Woodbury identity, and each tracked pair's
DynamicRank receives the correction as two rank-one updates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .dynrank import DynamicRank, DynRankConfig
from .errors import DimensionError, ParseError, SingularMatrixError
from .ff import DEFAULT_FIELD, PrimeField, as_rng
from .matrix import inverse, is_identity, woodbury_factors

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConnConfig:
    eager: bool = False  # materialize every pair state up front instead of on first query
    check: bool = False  # verify M Minv = I and every pair state after each update
    max_resample: int = 8
    expected_updates: int = 256


class _Pair:
    __slots__ = ("rows", "cols", "dyn")

    def __init__(self, rows, cols, dyn):
        self.rows = rows  # edge ids, in the row order of dyn
        self.cols = cols
        self.dyn = dyn


class ConnectivityState:
    def __init__(self, n: int, edges=(), rng=None, F: PrimeField = DEFAULT_FIELD,
                 config: ConnConfig = ConnConfig()):
        if n < 0:
            raise DimensionError("vertex count must be non-negative")
        self.n = int(n)
        self.F = F
        self.config = config
        self.rng = as_rng(rng)
        self.edges: list = []
        self._index: dict = {}
        self._out = [[] for _ in range(self.n)]
        self._in = [[] for _ in range(self.n)]
        for u, v in edges:
            self._check_new(u, v)
            self._register(int(u), int(v))
        self._pairs: dict = {}
        self._build()
        if config.eager:
            for s in range(self.n):
                for t in range(self.n):
                    if s != t:
                        self._pair(s, t)

    @classmethod
    def build(cls, n, edges, rng=None, F: PrimeField = DEFAULT_FIELD, config: ConnConfig = ConnConfig()):
        return cls(n, edges, rng, F, config)

    # -- graph bookkeeping ----------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u, v) -> bool:
        return (int(u), int(v)) in self._index

    def _check_vertex(self, x):
        if not 0 <= int(x) < self.n:
            raise DimensionError(f"vertex {x} out of range")

    def _check_new(self, u, v):
        self._check_vertex(u)
        self._check_vertex(v)
        if int(u) == int(v):
            raise DimensionError(f"self-loop at {u}")
        if self.has_edge(u, v):
            raise DimensionError(f"duplicate edge ({u}, {v})")

    def _register(self, u, v):
        self._index[(u, v)] = len(self.edges)
        self.edges.append((u, v))
        self._out[u].append(len(self.edges) - 1)
        self._in[v].append(len(self.edges) - 1)

    def _entries_of(self, k):
        """Row and column of M for edge k against edges 0..k-1, off-diagonal only."""
        u, v = self.edges[k]
        row_idx = [j for j in self._out[v] if j < k]  # e_k followed by e_j
        col_idx = [i for i in self._in[u] if i < k]  # e_i followed by e_k
        return row_idx, col_idx

    # -- matrix construction --------------------------------------------------

    def _stencil(self):
        F = self.F
        E = len(self.edges)
        M = F.neg(F.eye(E))
        for i, (_, h) in enumerate(self.edges):
            js = self._out[h]
            if js:
                M[i, js] = F.sample_nonzero(self.rng, len(js))
        return M

    def _build(self):
        for attempt in range(self.config.max_resample):
            M = self._stencil()
            try:
                self.Minv = inverse(M, self.F)
            except SingularMatrixError:
                log.warning("edge matrix singular, resampling (attempt %d)", attempt + 1)
                continue
            self.M = M
            return
        raise SingularMatrixError("edge matrix stayed singular after resampling")

    # -- pair states ----------------------------------------------------------

    def _pair(self, s, t):
        key = (s, t)
        st = self._pairs.get(key)
        if st is None and self._out[s] and self._in[t]:
            rows, cols = list(self._out[s]), list(self._in[t])
            sub = self.Minv[np.ix_(rows, cols)]
            dyn = DynamicRank(sub, self.rng, self.F, DynRankConfig(expected_updates=self.config.expected_updates))
            st = self._pairs[key] = _Pair(rows, cols, dyn)
        return st

    def tracked_pairs(self):
        return sorted(self._pairs)

    # -- queries --------------------------------------------------------------

    def edge_connectivity(self, s: int, t: int) -> int:
        self._check_vertex(s)
        self._check_vertex(t)
        if s == t:
            raise DimensionError("connectivity needs s != t")
        st = self._pair(int(s), int(t))
        return 0 if st is None else st.dyn.rank_query()

    def all_pairs(self) -> np.ndarray:
        """n x n table of lambda(s, t); the diagonal is -1."""
        out = np.full((self.n, self.n), -1, dtype=np.int64)
        for s in range(self.n):
            for t in range(self.n):
                if s != t:
                    out[s, t] = self.edge_connectivity(s, t)
        return out

    # -- updates --------------------------------------------------------------

    def _apply_correction(self, L, R):
        """Minv += L R and push the same change into every tracked pair."""
        F = self.F
        self.Minv = F.add(self.Minv, F.matmul(L, R))
        for st in self._pairs.values():
            for c in range(L.shape[1]):
                u = L[st.rows, c]
                v = R[c, st.cols]
                if u.any() and v.any():
                    st.dyn.rank_one_update(u, v)

    def add_edge(self, u: int, v: int):
        self._check_new(u, v)
        u, v = int(u), int(v)
        F = self.F
        E = len(self.edges)
        self._register(u, v)
        k = E
        row_idx, col_idx = self._entries_of(k)
        # bordered matrix diag(M, -1) and its inverse diag(Minv, -1)
        Mb = F.zeros((E + 1, E + 1))
        Mb[:E, :E] = self.M
        Mb[E, E] = F.p - 1
        Ib = F.zeros((E + 1, E + 1))
        Ib[:E, :E] = self.Minv
        Ib[E, E] = F.p - 1
        self.M, self.Minv = Mb, Ib
        # pair states grow before the correction; their new line is the bordered one
        for (s, t), st in self._pairs.items():
            if s == u:
                st.dyn.add_row(F.zeros(len(st.cols)))
                st.rows.append(k)
            if t == v:
                col = F.zeros(len(st.rows))
                if s == u:
                    col[-1] = F.p - 1
                st.dyn.add_col(col)
                st.cols.append(k)
        for attempt in range(self.config.max_resample):
            r = F.zeros(E + 1)
            c = F.zeros(E + 1)
            if row_idx:
                r[row_idx] = F.sample_nonzero(self.rng, len(row_idx))
            if col_idx:
                c[col_idx] = F.sample_nonzero(self.rng, len(col_idx))
            U = np.stack([_unit(F, E + 1, k), c], axis=1)
            V = np.stack([r, _unit(F, E + 1, k)], axis=1)
            try:
                L, R = woodbury_factors(self.Minv, U, V, F)
            except SingularMatrixError:
                log.warning("bordered edge matrix singular, resampling new entries")
                continue
            break
        else:
            raise SingularMatrixError("bordered edge matrix stayed singular after resampling")
        self.M[k, :] = F.add(self.M[k, :], r)
        self.M[:, k] = F.add(self.M[:, k], c)
        self._apply_correction(L, R)
        if self.config.eager:
            for x in range(self.n):
                if x != u:
                    self._pair(u, x)
                if x != v:
                    self._pair(x, v)
        self._after_update()

    def delete_edge(self, u: int, v: int):
        u, v = int(u), int(v)
        self._check_vertex(u)
        self._check_vertex(v)
        if not self.has_edge(u, v):
            raise DimensionError(f"edge ({u}, {v}) not present")
        F = self.F
        d = self._index[(u, v)]
        k = len(self.edges) - 1
        if d != k:
            self._swap(d, k)
        r = F.neg(self.M[k, :])
        c = F.neg(self.M[:, k])
        r[k] = 0
        c[k] = 0
        U = np.stack([_unit(F, k + 1, k), c], axis=1)
        V = np.stack([r, _unit(F, k + 1, k)], axis=1)
        # the zeroed matrix is diag(M_rest, -1), always invertible
        L, R = woodbury_factors(self.Minv, U, V, F)
        self._apply_correction(L, R)
        self.M = np.ascontiguousarray(self.M[:k, :k])
        self.Minv = np.ascontiguousarray(self.Minv[:k, :k])
        for key in list(self._pairs):
            st = self._pairs[key]
            if k in st.rows:
                if len(st.rows) == 1:
                    del self._pairs[key]
                    continue
                st.dyn.delete_row(st.rows.index(k))
                st.rows.remove(k)
            if k in st.cols:
                if len(st.cols) == 1:
                    del self._pairs[key]
                    continue
                st.dyn.delete_col(st.cols.index(k))
                st.cols.remove(k)
        del self._index[(u, v)]
        self.edges.pop()
        self._out[u].remove(k)
        self._in[v].remove(k)
        self._after_update()

    def _swap(self, a, b):
        """Exchange edge ids a and b everywhere (a similarity permutation)."""
        for X in (self.M, self.Minv):
            X[[a, b], :] = X[[b, a], :]
            X[:, [a, b]] = X[:, [b, a]]
        ea, eb = self.edges[a], self.edges[b]
        self.edges[a], self.edges[b] = eb, ea
        self._index[ea], self._index[eb] = b, a
        swap = {a: b, b: a}
        for lst in (self._out[ea[0]], self._in[ea[1]], self._out[eb[0]], self._in[eb[1]]):
            lst[:] = [swap.get(x, x) for x in lst]
        for st in self._pairs.values():
            st.rows[:] = [swap.get(x, x) for x in st.rows]
            st.cols[:] = [swap.get(x, x) for x in st.cols]

    def _after_update(self):
        if self.config.check:
            self.check_invariants()

    # -- checks ---------------------------------------------------------------

    def check_invariants(self, deep: bool = True):
        F = self.F
        E = len(self.edges)
        if self.M.shape != (E, E) or self.Minv.shape != (E, E):
            raise AssertionError("matrix shape out of sync with edge list")
        if not is_identity(F.matmul(self.M, self.Minv), F):
            raise AssertionError("M Minv != I")
        for i, (_, h) in enumerate(self.edges):
            succ = set(self._out[h])
            for j in range(E):
                x = int(self.M[i, j])
                if i == j:
                    ok = x == F.p - 1
                elif j in succ:
                    ok = x != 0
                else:
                    ok = x == 0
                if not ok:
                    raise AssertionError(f"M[{i}, {j}] breaks the edge stencil")
        if not deep:
            return
        for (s, t), st in self._pairs.items():
            if sorted(st.rows) != sorted(self._out[s]) or sorted(st.cols) != sorted(self._in[t]):
                raise AssertionError(f"pair ({s}, {t}) tracks the wrong edges")
            want = self.Minv[np.ix_(st.rows, st.cols)]
            if not np.array_equal(st.dyn.matrix, want):
                raise AssertionError(f"pair ({s}, {t}) drifted from the inverse submatrix")


def _unit(F: PrimeField, n, i):
    e = F.zeros(n)
    e[i] = 1
    return e


# -- script driver ---------------------------------------------------------------


def parse_script(lines):
    """Yield ``(lineno, op, args)`` from ADD/DEL/QUERY/QUERYALL lines."""
    arity = {"ADD": 2, "DEL": 2, "QUERY": 2, "QUERYALL": 0}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        op = head.upper()
        if op not in arity:
            raise ParseError(f"line {lineno}: unknown op {head!r}")
        if len(rest) != arity[op]:
            raise ParseError(f"line {lineno}: {op} takes {arity[op]} arguments")
        try:
            args = tuple(int(t) for t in rest)
        except ValueError:
            raise ParseError(f"line {lineno}: expected integers") from None
        yield lineno, op, args


def format_table(table) -> str:
    return "\n".join(" ".join("-" if x < 0 else str(int(x)) for x in row) for row in table)


def run_script(state: ConnectivityState, lines):
    """Apply a script; returns one entry per query (an int or an n x n table)."""
    out = []
    for lineno, op, args in parse_script(lines):
        try:
            if op == "ADD":
                state.add_edge(*args)
            elif op == "DEL":
                state.delete_edge(*args)
            elif op == "QUERY":
                out.append(state.edge_connectivity(*args))
            else:
                out.append(state.all_pairs())
        except DimensionError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return out
