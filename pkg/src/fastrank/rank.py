"""Static rank algorithms built on magical-graph compression.

``rank_atmost`` compresses both sides down to O(k) and eliminates;
``rank`` doubles k; ``indep_cols`` repeatedly shrinks the candidate column
set to the graph neighbourhood of a compressed column profile.  The
applications (rank-one decomposition, null space, low-rank product) sit on
top and are certified by multiplying back.
"""

from __future__ import annotations

import logging
import math
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, SingularMatrixError, VerificationError
from .ff import DEFAULT_FIELD, PrimeField, as_rng
from .magical import EXPANSION, compress_cols, compress_rows
from .matrix import SparseMatrix, _echelon, gauss_rank, inverse

log = logging.getLogger(__name__)

DEFAULT_RETRIES = 3


class RankResult(NamedTuple):
    value: int
    certified: bool = False

    def __int__(self):
        return self.value


class RankOneDecomposition(NamedTuple):
    B: np.ndarray
    C: np.ndarray
    S: np.ndarray
    T: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.T)


def as_sparse(A, F: PrimeField = DEFAULT_FIELD) -> SparseMatrix:
    return A if isinstance(A, SparseMatrix) else SparseMatrix.from_dense(A, F)


def dense_rank(D, F: PrimeField = DEFAULT_FIELD) -> int:
    """Rank by a single row echelon pass (no profiles)."""
    D = np.array(D, dtype=F.dtype, copy=True)
    if D.size == 0:
        return 0
    if D.shape[0] > D.shape[1]:
        D = np.ascontiguousarray(D.T)
    return len(_echelon(D, F))


def cube_root_ceil(n: int) -> int:
    return max(1, math.ceil(round(n ** (1 / 3), 9)))


def _clamp_k(k: int, m: int, n: int, shape=None) -> int:
    # warn only when k exceeds the caller's shape, not the normalized one
    if k < 1:
        raise DimensionError("k must be positive")
    if shape is not None and k > min(shape):
        log.warning("k=%d exceeds min(m, n)=%d; clamping", k, min(shape))
    return min(k, m, n)


def rank_atmost(A, k: int, rng=None, c: int = EXPANSION) -> RankResult:
    """min{rank(A), k} with one-sided error: the value never exceeds the truth."""
    A = as_sparse(A)
    B, _, _ = A.normalize()
    if B.nrows > B.ncols:
        B = B.T
    m, n = B.shape
    if m == 0:
        return RankResult(0)
    k = _clamp_k(k, m, n, A.shape)
    kk = max(k, cube_root_ceil(n))
    rng = as_rng(rng)
    C, _ = compress_cols(B, kk, rng, c)
    C, _ = compress_rows(C, kk, rng, c)
    return RankResult(min(dense_rank(C.to_dense(), A.field), k))


def _rank_once(B: SparseMatrix, rng, c) -> int:
    m, n = B.shape
    full = min(m, n)
    k = min(cube_root_ceil(max(m, n)), full)
    while True:
        v = rank_atmost(B, k, rng, c).value
        if v < k or k >= full:
            return v
        k = min(2 * k, full)


def rank(A, rng=None, verify: bool = False, retries: int = DEFAULT_RETRIES, c: int = EXPANSION) -> RankResult:
    """rank(A) by doubling k.

    With ``verify`` the value is certified through a rank-one decomposition
    that multiplies back to A exactly; a certificate failure reruns with
    fresh randomness, and exhausting ``retries`` raises VerificationError.
    """
    A = as_sparse(A)
    rng = as_rng(rng)
    B, _, _ = A.normalize()
    if not verify:
        return RankResult(_rank_once(B, rng, c) if B.nrows else 0)
    dec = rank_one_decompose(A, rng, retries=retries, c=c)
    return RankResult(dec.rank, True)


def _indep_cols_once(A: SparseMatrix, k: int, rng, c: int) -> np.ndarray:
    F = A.field
    N, row_map, col_map = A.normalize()
    m, n = N.shape
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    k = _clamp_k(k, m, n, A.shape)
    kk = max(k, cube_root_ceil(n))
    Ap = N
    if m > c * kk:
        Ap, _ = compress_rows(N, kk, rng, c)
    cand = np.arange(n)
    while len(cand) > c * kk:
        sub = Ap.select_cols(cand)
        Bc, op = compress_cols(sub, kk, rng, c)
        S = gauss_rank(Bc.to_dense(), F).col_profile
        nxt = cand[op.preimage(S)]
        if len(nxt) >= len(cand):
            break
        cand = nxt
    prof = gauss_rank(Ap.select_cols(cand).to_dense(), F).col_profile[:k]
    return np.sort(col_map[cand[prof]])


def indep_cols(A, k: int, rng=None, verify: bool = True, retries: int = DEFAULT_RETRIES,
               c: int = EXPANSION) -> np.ndarray:
    """Indices of min{rank(A), k} linearly independent columns of A.

    The returned columns are always independent (compression only adds row
    combinations); the randomness can only make the set too small.  With
    ``verify`` the answer is re-eliminated on the original columns.
    """
    A = as_sparse(A)
    rng = as_rng(rng)
    for attempt in range(max(1, retries)):
        cols = _indep_cols_once(A, k, rng, c)
        if not verify or gauss_rank(A.select_cols(cols).to_dense(), A.field).rank == len(cols):
            return cols
        log.info("indep_cols certification failed on attempt %d", attempt + 1)
    raise VerificationError("indep_cols could not certify an independent set")


def indep_rows(A, k: int, rng=None, verify: bool = True, retries: int = DEFAULT_RETRIES,
               c: int = EXPANSION) -> np.ndarray:
    return indep_cols(as_sparse(A).T, k, rng, verify, retries, c)


def _decompose_once(A: SparseMatrix, rng, c):
    F = A.field
    m, n = A.shape
    N, _, _ = A.normalize()
    r = _rank_once(N, rng, c) if N.nrows else 0
    if r == 0:
        empty = np.zeros(0, dtype=np.int64)
        return RankOneDecomposition(F.zeros((m, 0)), F.zeros((0, n)), empty, empty)
    T = _indep_cols_once(A, r, rng, c)
    if len(T) < r:
        return None
    AT = A.select_cols(T)
    S = _indep_cols_once(AT.T, r, rng, c)
    if len(S) < r:
        return None
    D = A.to_dense()
    try:
        C = F.matmul(inverse(D[np.ix_(S, T)], F), D[S, :])
    except SingularMatrixError:
        return None
    return RankOneDecomposition(np.ascontiguousarray(D[:, T]), C, S, T)


def rank_one_decompose(A, rng=None, verify: bool = True, retries: int = DEFAULT_RETRIES,
                       c: int = EXPANSION) -> RankOneDecomposition:
    """A = B C with B = A[:, T] (m x r) and C[:, T] = I_r."""
    A = as_sparse(A)
    F = A.field
    rng = as_rng(rng)
    D = A.to_dense() if verify else None
    for attempt in range(max(1, retries)):
        dec = _decompose_once(A, rng, c)
        if dec is not None and (not verify or (F.matmul(dec.B, dec.C) == D).all()):
            return dec
        log.info("rank-one decomposition rejected on attempt %d", attempt + 1)
    raise VerificationError("rank-one decomposition failed to multiply back after retries")


def nullspace_basis(A, rng=None, verify: bool = True, retries: int = DEFAULT_RETRIES) -> np.ndarray:
    """Rows of the result form a basis of {b : A b = 0}; shape (n - r, n)."""
    A = as_sparse(A)
    F = A.field
    dec = rank_one_decompose(A, rng, verify, retries)
    n = A.ncols
    free = np.setdiff1d(np.arange(n), dec.T)
    basis = F.zeros((len(free), n))
    if len(free):
        basis[np.arange(len(free)), free] = 1
        if dec.rank:
            basis[:, dec.T] = F.neg(dec.C[:, free].T)
    return basis


def lowrank_mul(A, B, rng=None, verify: bool = True, retries: int = DEFAULT_RETRIES,
                F: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    """A @ B through A = A1 A2, costing O(n^2 r) for r = rank(A)."""
    A = F.asarray(A)
    B = F.asarray(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise DimensionError("lowrank_mul shape mismatch")
    dec = rank_one_decompose(SparseMatrix.from_dense(A, F), rng, verify, retries)
    return F.matmul(dec.B, F.matmul(dec.C, B))
