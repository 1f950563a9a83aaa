"""Seeded random instance generators shared by tests and experiment scripts."""

from __future__ import annotations

import numpy as np

from .ff import DEFAULT_FIELD, PrimeField, as_rng
from .matrix import SparseMatrix


def planted_rank_sparse(m: int, n: int, r: int, density: float, rng=None,
                        F: PrimeField = DEFAULT_FIELD, mix: int = 3) -> SparseMatrix:
    """Sparse m x n matrix of rank at most r (exactly r with high probability).

    A = L R where L is m x r with about ``density`` nonzeros per entry and
    each column of R mixes up to ``mix`` columns of L.
    """
    rng = as_rng(rng)
    r = max(0, min(r, m, n))
    if r == 0:
        return SparseMatrix.from_triplets(m, n, (), F)
    mask = rng.random((m, r)) < density
    # every factor column needs support, and distinct rows keep L full rank
    lead = rng.permutation(m)[:r]
    mask[lead, np.arange(r)] = True
    L = F.zeros((m, r))
    L[mask] = F.sample_nonzero(rng, int(mask.sum()))
    R = F.zeros((r, n))
    owner = np.concatenate([rng.permutation(r), rng.integers(0, r, n - r)]) if n >= r else rng.integers(0, r, n)
    owner = owner[rng.permutation(n)]
    R[owner, np.arange(n)] = F.sample_nonzero(rng, n)
    extra = rng.integers(0, mix, n)
    for j in np.flatnonzero(extra):
        rows = rng.integers(0, r, extra[j])
        R[rows, j] = F.sample(rng, len(rows))
    # sparse product: each nonzero R[k, j] contributes the support of L[:, k]
    Li, Lk = np.nonzero(L)
    Rk, Rj = np.nonzero(R)
    by_col = np.argsort(Lk, kind="stable")
    Li, Lk = Li[by_col], Lk[by_col]
    start = np.searchsorted(Lk, np.arange(r + 1))
    counts = np.diff(start)[Rk]
    pick = np.concatenate([np.arange(start[k], start[k + 1]) for k in Rk]) if len(Rk) else np.zeros(0, np.int64)
    rows = Li[pick]
    cols = np.repeat(Rj, counts)
    vals = F.mul(L[rows, Lk[pick]], np.repeat(R[Rk, Rj], counts))
    return SparseMatrix(m, n, rows.astype(np.int64), cols.astype(np.int64), vals, F).coalesce()


def random_sparse(m: int, n: int, density: float, rng=None, F: PrimeField = DEFAULT_FIELD) -> SparseMatrix:
    rng = as_rng(rng)
    mask = rng.random((m, n)) < density
    r, c = np.nonzero(mask)
    return SparseMatrix.from_arrays(m, n, r, c, F.sample_nonzero(rng, len(r)), F)


def rank_deficient_dense(m: int, n: int, r: int, rng=None, F: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    rng = as_rng(rng)
    return F.matmul(F.sample(rng, (m, r)), F.sample(rng, (r, n)))


def random_graph(n: int, p: float, rng=None):
    """Erdos-Renyi edge list on n vertices."""
    rng = as_rng(rng)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return [(int(a), int(b)) for a, b in zip(iu[keep], ju[keep])]


def random_digraph(n: int, m: int, rng=None):
    """Simple digraph with min(m, n(n-1)) distinct edges."""
    rng = as_rng(rng)
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    idx = rng.permutation(len(pairs))[: min(m, len(pairs))]
    return [pairs[i] for i in sorted(idx)]
