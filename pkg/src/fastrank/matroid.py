"""Compression preprocessing for linear matroid problems and matroid union.

``union_stack`` stacks k randomly column-scaled copies of A; if A contains
k disjoint bases the stack has rank kb with high probability, so its
independent columns pick out kb ground elements that split into k bases.
The split itself is found with matroid-partition augmenting paths over an
elimination-based independence oracle, and every answer is re-verified
on the original matrix.
"""

from __future__ import annotations

import logging
from collections import deque

import numpy as np

from .errors import DimensionError
from .ff import DEFAULT_FIELD, PrimeField, as_rng
from .magical import EXPANSION, compress_rows
from .matrix import SparseMatrix, _echelon
from .rank import DEFAULT_RETRIES, as_sparse, dense_rank, indep_cols
from .rank import rank as sparse_rank

log = logging.getLogger(__name__)


def _dense(A, F: PrimeField):
    if isinstance(A, SparseMatrix):
        return A.to_dense()
    return F.asarray(A)


def parity_compress(A, k: int, rng=None, F: PrimeField = DEFAULT_FIELD, c: int = EXPANSION) -> np.ndarray:
    """Row-compress an r x 2n paired matrix to O(k) rows; columns and pairing untouched."""
    D = _dense(A, F)
    if D.ndim != 2 or D.shape[1] % 2:
        raise DimensionError("paired matrix needs an even number of columns")
    if k < 1:
        raise DimensionError("k must be positive")
    if D.shape[0] <= c * 2 * k:
        return D
    B, _ = compress_rows(SparseMatrix.from_dense(D, F), 2 * k, as_rng(rng), c)
    return B.to_dense()


def union_stack(A, k: int, rng=None, F: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    """kr x n matrix; block i holds A with column j scaled by a random x_ij != 0."""
    D = _dense(A, F)
    if k < 1:
        raise DimensionError("k must be positive")
    r, n = D.shape
    x = F.sample_nonzero(as_rng(rng), (k, n))
    return np.concatenate([F.mul(D, x[i][None, :]) for i in range(k)], axis=0)


class _Oracle:
    """Independence tests on columns of a fixed dense matrix."""

    def __init__(self, D, F: PrimeField):
        self.D = D
        self.F = F

    def independent(self, cols) -> bool:
        cols = list(cols)
        return not cols or dense_rank(self.D[:, cols], self.F) == len(cols)

    def exchange(self, basis, y):
        """``None`` if basis + y is independent, else the elements of the circuit."""
        F = self.F
        if not basis:
            return None if self.D[:, y].any() else []
        M = np.concatenate([self.D[:, basis], self.D[:, [y]]], axis=1)
        M = np.array(M, copy=True)
        piv = _echelon(M, F, reduced=True)
        if len(piv) > len(basis):
            return None
        coeff = M[: len(basis), len(basis)]
        return [basis[t] for t in np.flatnonzero(coeff)]


def partition_into_bases(D, ground, k: int, b: int, F: PrimeField = DEFAULT_FIELD):
    """Split ``ground`` into k independent sets of size b, or ``None``.

    Shortest augmenting paths in the exchange graph keep every part
    independent after each augmentation.
    """
    oracle = _Oracle(D, F)
    parts = [[] for _ in range(k)]
    where = {}
    for x in ground:
        # parent[z] = (y, i): z sits in part i and y may take its place there
        parent = {x: None}
        queue = deque([x])
        end = None
        while queue and end is None:
            y = queue.popleft()
            for i in range(k):
                if where.get(y) == i:
                    continue
                circuit = oracle.exchange(parts[i], y)
                if circuit is None:
                    if len(parts[i]) < b:
                        end = (y, i)
                        break
                    continue
                for z in circuit:
                    if z not in parent:
                        parent[z] = (y, i)
                        queue.append(z)
        if end is None:
            return None
        cur, part = end
        while True:
            old = where.get(cur)
            if old is not None:
                parts[old].remove(cur)
            parts[part].append(cur)
            where[cur] = part
            if parent[cur] is None:
                break
            cur, part = parent[cur]
        if not all(oracle.independent(p) for p in parts):
            raise AssertionError("augmentation broke independence")
    if any(len(p) != b for p in parts):
        return None
    return [sorted(p) for p in parts]


def verify_partition(D, parts, b: int, F: PrimeField = DEFAULT_FIELD) -> bool:
    flat = [c for p in parts for c in p]
    if len(flat) != len(set(flat)):
        return False
    return all(len(p) == b and (b == 0 or dense_rank(D[:, list(p)], F) == b) for p in parts)


def disjoint_bases(A, k: int, rng=None, retries: int = DEFAULT_RETRIES, F: PrimeField = DEFAULT_FIELD,
                   c: int = EXPANSION):
    """k pairwise disjoint bases of the column matroid of A, or ``None``."""
    if k < 1:
        raise DimensionError("k must be positive")
    rng = as_rng(rng)
    S = as_sparse(A, F)
    F = S.field
    D = S.to_dense()
    n = S.ncols
    b = sparse_rank(S, rng, verify=True, retries=retries).value
    if b == 0:
        return [[] for _ in range(k)]
    if k * b > n:
        return None
    for attempt in range(max(1, retries)):
        Ap = S
        if S.nrows > c * b:
            Ap, _ = compress_rows(S, b, rng, c)
        Ad = Ap.to_dense()
        B = union_stack(Ad, k, rng, F)
        cols = indep_cols(SparseMatrix.from_dense(B, F), k * b, rng, verify=False)
        if len(cols) < k * b:
            continue
        parts = partition_into_bases(Ad, [int(x) for x in cols], k, b, F)
        if parts is not None and verify_partition(D, parts, b, F):
            return parts
        log.info("basis partition attempt %d failed", attempt + 1)
    return None


def max_disjoint_bases(A, rng=None, retries: int = DEFAULT_RETRIES, F: PrimeField = DEFAULT_FIELD):
    """(opt, partition) by doubling k and then binary search."""
    rng = as_rng(rng)
    S = as_sparse(A, F)
    b = sparse_rank(S, rng, verify=True, retries=retries).value
    if b == 0:
        raise ValueError("a rank-zero matrix contains arbitrarily many (empty) bases")
    best_k, best = 0, None
    k = 1
    fail = None
    while k * b <= S.ncols:
        parts = disjoint_bases(S, k, rng, retries, F)
        if parts is None:
            fail = k
            break
        best_k, best = k, parts
        k *= 2
    if fail is None:
        fail = S.ncols // b + 1
    lo, hi = best_k, fail
    while hi - lo > 1:
        mid = (lo + hi) // 2
        parts = disjoint_bases(S, mid, rng, retries, F)
        if parts is None:
            hi = mid
        else:
            lo, best = mid, parts
    return lo, best
