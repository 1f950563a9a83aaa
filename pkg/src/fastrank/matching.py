"""Algebraic matching through the Tutte matrix.

A random substitution of the Tutte matrix has rank 2 * opt with high
probability, so the matching number comes from a bounded rank computation.
Extraction restricts to a small induced subgraph found from independent
columns and rows, then peels edges off by self-reduction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, VerificationError
from .ff import DEFAULT_FIELD, PrimeField, as_rng
from .matrix import SparseMatrix
from .rank import DEFAULT_RETRIES, dense_rank, indep_cols, indep_rows, rank_atmost

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple

    def __post_init__(self):
        seen = set()
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise DimensionError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DimensionError(f"edge ({u}, {v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DimensionError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_edges(cls, n, edges):
        return cls(int(n), tuple(edges))

    def induced(self, vertices):
        """Subgraph on ``vertices`` (relabelled 0..len-1) and the label map."""
        vs = sorted(set(int(v) for v in vertices))
        index = {v: i for i, v in enumerate(vs)}
        sub = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(vs), tuple(sub)), vs

    def without_edge(self, e):
        return Graph(self.n, tuple(x for x in self.edges if x != e))

    def without_vertices(self, vs):
        vs = set(vs)
        return Graph(self.n, tuple(x for x in self.edges if x[0] not in vs and x[1] not in vs))


@dataclass(frozen=True)
class TutteMatrix:
    matrix: np.ndarray
    values: dict

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def sparse(self, F: PrimeField = DEFAULT_FIELD) -> SparseMatrix:
        return SparseMatrix.from_dense(self.matrix, F)


def tutte_matrix(G: Graph, rng=None, F: PrimeField = DEFAULT_FIELD) -> TutteMatrix:
    rng = as_rng(rng)
    M = F.zeros((G.n, G.n))
    vals = F.sample_nonzero(rng, len(G.edges)) if G.edges else F.zeros(0)
    for (u, v), x in zip(G.edges, vals):
        M[u, v] = x
        M[v, u] = F.neg(x)
    return TutteMatrix(M, {e: int(x) for e, x in zip(G.edges, vals)})


def greedy_matching(G: Graph):
    """Maximal matching in edge order; at least half of the optimum."""
    used = set()
    out = []
    for u, v in G.edges:
        if u not in used and v not in used:
            used.update((u, v))
            out.append((u, v))
    return out


def _size_direct(G: Graph, k: int, rng, F) -> int:
    if not G.edges:
        return 0
    A = tutte_matrix(G, rng, F).sparse(F)
    return rank_atmost(A, min(2 * k, G.n), rng).value // 2


def _size_restricted(G: Graph, k: int, rng, F) -> int:
    if not G.edges:
        return 0
    T = tutte_matrix(G, rng, F)
    A = T.sparse(F)
    S = indep_cols(A, min(2 * k, G.n), rng, verify=False)
    R = indep_rows(A.select_cols(S), max(1, len(S)), rng, verify=False)
    W = np.union1d(R, S)
    return min(k, dense_rank(T.matrix[np.ix_(W, W)], F) // 2)


def matching_size(G: Graph, k: int | None = None, rng=None, route: str = "direct",
                  F: PrimeField = DEFAULT_FIELD) -> int:
    """min{opt, k}; with ``k=None`` the cap is seeded from a greedy matching.

    ``route="restrict"`` goes through independent columns and rows and the
    induced Tutte submatrix on their union instead of one bounded rank call.
    """
    rng = as_rng(rng)
    if k is None:
        k = max(1, 2 * len(greedy_matching(G)))
    if k < 1:
        raise DimensionError("k must be positive")
    if route == "direct":
        return _size_direct(G, k, rng, F)
    if route == "restrict":
        return _size_restricted(G, k, rng, F)
    raise ValueError(f"unknown route {route!r}")


def is_matching(G: Graph, M) -> bool:
    edges = set(G.edges)
    seen = set()
    for u, v in M:
        if (min(u, v), max(u, v)) not in edges or u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


def _self_reduce(H: Graph, target: int, rng, F):
    out = []
    for e in H.edges:
        if target == 0:
            break
        if e not in H.edges:
            continue
        trial = H.without_edge(e)
        if _size_direct(trial, target, rng, F) >= target:
            H = trial
        else:
            out.append(e)
            H = H.without_vertices(e)
            target -= 1
    return out


def find_matching(G: Graph, k: int | None = None, rng=None, retries: int = DEFAULT_RETRIES,
                  F: PrimeField = DEFAULT_FIELD):
    """A matching of size min{opt, k} as a sorted list of edges."""
    rng = as_rng(rng)
    if k is None:
        k = max(1, 2 * len(greedy_matching(G)))
    for attempt in range(max(1, retries)):
        t = matching_size(G, k, rng, F=F)
        if t == 0:
            return []
        T = tutte_matrix(G, rng, F)
        A = T.sparse(F)
        S = indep_cols(A, min(2 * t, G.n), rng, verify=False)
        R = indep_rows(A.select_cols(S), max(1, len(S)), rng, verify=False)
        H, labels = G.induced(np.union1d(R, S).tolist())
        local = _self_reduce(H, t, rng, F)
        M = sorted((labels[u], labels[v]) for u, v in local)
        if len(M) == t and is_matching(G, M):
            return M
        log.info("matching extraction rejected on attempt %d", attempt + 1)
    raise VerificationError("could not extract a verified matching")


def subset_matching_size(G: Graph, S, rng=None, F: PrimeField = DEFAULT_FIELD) -> int:
    """Largest number of vertices of S covered by a single matching."""
    S = sorted(set(int(s) for s in S))
    if not S or not G.edges:
        return 0
    if not all(0 <= s < G.n for s in S):
        raise DimensionError("subset vertex out of range")
    A = tutte_matrix(G, rng, F).sparse(F).select_rows(S)
    return rank_atmost(A, len(S), rng).value
