"""Sparse and dense matrices over F_p and the dense elimination kernels.

Dense matrices are plain numpy arrays with the field's dtype; every routine
that touches them takes the field as ``F``.  :class:`SparseMatrix` is an
unordered triplet list that tolerates duplicate positions: the logical entry
at ``(i, j)`` is the sum of all triplets there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, SingularMatrixError
from .ff import DEFAULT_FIELD, PrimeField


@dataclass(frozen=True)
class SparseMatrix:
    nrows: int
    ncols: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    field: PrimeField = field(default=DEFAULT_FIELD, repr=False)

    def __post_init__(self):
        if len(self.rows) != len(self.cols) or len(self.rows) != len(self.vals):
            raise DimensionError("triplet arrays must have equal length")
        if len(self.rows) and (self.rows.min() < 0 or self.rows.max() >= self.nrows
                               or self.cols.min() < 0 or self.cols.max() >= self.ncols):
            raise DimensionError("triplet index out of bounds")

    @classmethod
    def from_triplets(cls, nrows, ncols, triplets=(), F: PrimeField = DEFAULT_FIELD):
        trip = list(triplets)
        rows = np.array([t[0] for t in trip], dtype=np.int64)
        cols = np.array([t[1] for t in trip], dtype=np.int64)
        vals = F.asarray([int(t[2]) for t in trip]) if trip else F.zeros(0)
        return cls(int(nrows), int(ncols), rows, cols, vals, F)

    @classmethod
    def from_arrays(cls, nrows, ncols, rows, cols, vals, F: PrimeField = DEFAULT_FIELD):
        return cls(int(nrows), int(ncols), np.asarray(rows, dtype=np.int64),
                   np.asarray(cols, dtype=np.int64), F.asarray(vals), F)

    @classmethod
    def from_dense(cls, D, F: PrimeField = DEFAULT_FIELD):
        D = F.asarray(D)
        if D.ndim != 2:
            raise DimensionError("dense matrix must be 2-D")
        r, c = np.nonzero(D != 0)
        return cls(D.shape[0], D.shape[1], r.astype(np.int64), c.astype(np.int64), D[r, c], F)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        """Triplet count |A| (duplicates counted separately)."""
        return len(self.vals)

    def to_dense(self) -> np.ndarray:
        return self.field.scatter_add(self.shape, self.rows, self.cols, self.vals)

    @property
    def T(self) -> SparseMatrix:
        return SparseMatrix(self.ncols, self.nrows, self.cols, self.rows, self.vals, self.field)

    def coalesce(self) -> SparseMatrix:
        """Sum duplicate positions and drop explicit zeros."""
        if self.nnz == 0:
            return self
        keys = self.rows * self.ncols + self.cols
        uniq, inverse = np.unique(keys, return_inverse=True)
        summed = self.field.scatter_add((1, len(uniq)), np.zeros_like(inverse), inverse, self.vals)[0]
        keep = summed != 0
        uniq = uniq[keep]
        return SparseMatrix(self.nrows, self.ncols, uniq // self.ncols, uniq % self.ncols,
                            summed[keep], self.field)

    def select_cols(self, idx) -> SparseMatrix:
        """Submatrix on columns ``idx`` (new column ``t`` is old column ``idx[t]``)."""
        idx = np.asarray(idx, dtype=np.int64)
        remap = np.full(self.ncols, -1, dtype=np.int64)
        remap[idx] = np.arange(len(idx))
        new = remap[self.cols]
        keep = new >= 0
        return SparseMatrix(self.nrows, len(idx), self.rows[keep], new[keep], self.vals[keep], self.field)

    def select_rows(self, idx) -> SparseMatrix:
        return self.T.select_cols(idx).T

    def normalize(self):
        """Drop all-zero rows and columns.

        Returns ``(B, row_map, col_map)`` where row ``i`` of ``B`` is row
        ``row_map[i]`` of ``self``.  Rank is unchanged.
        """
        C = self.coalesce()
        row_map = np.unique(C.rows)
        col_map = np.unique(C.cols)
        rr = np.searchsorted(row_map, C.rows)
        cc = np.searchsorted(col_map, C.cols)
        return SparseMatrix(len(row_map), len(col_map), rr, cc, C.vals, self.field), row_map, col_map


class RankProfile(NamedTuple):
    rank: int
    col_profile: np.ndarray
    row_profile: np.ndarray


class RankNormalForm(NamedTuple):
    X: np.ndarray
    Y: np.ndarray
    rank: int


def _echelon(M, F: PrimeField, reduced=False, ncols=None):
    """In-place row reduction of ``M``; returns the pivot columns.

    Pivots are searched only among the first ``ncols`` columns, so an
    augmented block to the right is transformed along with them.
    """
    m = M.shape[0]
    ncols = M.shape[1] if ncols is None else ncols
    pivots = []
    r = 0
    for j in range(ncols):
        if r == m:
            break
        nz = np.flatnonzero(M[r:, j])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        lead = M[r, j]
        if lead != 1:
            M[r, j:] = F.mul(M[r, j:], F.inv(lead))
        target = np.flatnonzero(M[:, j]) if reduced else r + 1 + np.flatnonzero(M[r + 1:, j])
        if reduced:
            target = target[target != r]
        if target.size:
            M[target, j:] = F.sub(M[target, j:], F.mul(M[target, j][:, None], M[r, j:][None, :]))
        pivots.append(j)
        r += 1
    return pivots


def gauss_rank(B, F: PrimeField = DEFAULT_FIELD) -> RankProfile:
    """Rank of a dense matrix plus its column and row rank profiles.

    The column profile is the lexicographically first maximal set of
    independent columns; the row profile likewise for rows.  ``B`` restricted
    to (row_profile, col_profile) is invertible.
    """
    B = np.array(B, dtype=F.dtype, copy=True)
    if B.ndim != 2:
        raise DimensionError("gauss_rank expects a 2-D matrix")
    if B.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return RankProfile(0, empty, empty)
    cols = np.array(_echelon(B.copy(), F), dtype=np.int64)
    # row dependencies of B are exactly those of B[:, cols]
    sub = np.ascontiguousarray(np.array(B[:, cols].T, copy=True))
    rows = np.array(_echelon(sub, F), dtype=np.int64) if len(cols) else np.zeros(0, dtype=np.int64)
    return RankProfile(len(cols), cols, rows)


def rank_normal_form(B, F: PrimeField = DEFAULT_FIELD) -> RankNormalForm:
    """Invertible ``X`` and ``Y`` with ``X @ B @ Y == [[I_r, 0], [0, 0]]``."""
    B = F.asarray(B)
    m, n = B.shape
    aug = np.concatenate([np.array(B, copy=True), F.eye(m)], axis=1)
    pivots = _echelon(aug, F, reduced=True, ncols=n)
    r = len(pivots)
    X = np.ascontiguousarray(aug[:, n:])
    R = aug[:, :n]
    nonpiv = [j for j in range(n) if j not in set(pivots)]
    order = np.array(pivots + nonpiv, dtype=np.int64)
    E = F.eye(n)
    if r and nonpiv:
        E[:r, r:] = F.neg(R[:r, nonpiv])
    Y = F.zeros((n, n))
    Y[order, :] = E
    return RankNormalForm(X, Y, r)


def inverse(B, F: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    B = F.asarray(B)
    n = B.shape[0]
    if B.ndim != 2 or B.shape[1] != n:
        raise DimensionError("inverse needs a square matrix")
    aug = np.concatenate([np.array(B, copy=True), F.eye(n)], axis=1)
    pivots = _echelon(aug, F, reduced=True, ncols=n)
    if len(pivots) < n:
        raise SingularMatrixError("matrix is singular")
    return np.ascontiguousarray(aug[:, n:])


def det(B, F: PrimeField = DEFAULT_FIELD) -> int:
    M = np.array(F.asarray(B), copy=True)
    n = M.shape[0]
    result = 1
    for j in range(n):
        nz = np.flatnonzero(M[j:, j])
        if nz.size == 0:
            return 0
        piv = j + nz[0]
        if piv != j:
            M[[j, piv]] = M[[piv, j]]
            result = -result
        lead = int(M[j, j])
        result = result * lead % F.p
        below = j + 1 + np.flatnonzero(M[j + 1:, j])
        if below.size:
            f = F.mul(M[below, j], F.inv(lead))
            M[below, j:] = F.sub(M[below, j:], F.mul(f[:, None], M[j, j:][None, :]))
    return result % F.p


def is_identity(M, F: PrimeField = DEFAULT_FIELD) -> bool:
    M = np.asarray(M)
    return M.shape[0] == M.shape[1] and bool((M == F.eye(M.shape[0])).all())


def woodbury_factors(Minv, U, V, F: PrimeField = DEFAULT_FIELD):
    """Factors ``(L, R)`` with ``(M + U V^T)^{-1} = Minv + L @ R``.

    ``L`` is ``n x k`` and ``R`` is ``k x n`` for an update of rank ``k``, so
    the correction costs O(n^2 k) to apply.
    """
    U = F.asarray(U)
    V = F.asarray(V)
    W1 = F.matmul(Minv, U)
    W2 = F.matmul(V.T, Minv)
    cap = F.add(F.eye(U.shape[1]), F.matmul(V.T, W1))
    try:
        cap_inv = inverse(cap, F)
    except SingularMatrixError:
        raise SingularMatrixError("capacitance matrix I + V^T Minv U is singular") from None
    return F.neg(F.matmul(W1, cap_inv)), W2


def woodbury_update(Minv, U, V, F: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    """``(M + U V^T)^{-1}`` from ``Minv = M^{-1}`` in O(n^2) for fixed update rank."""
    L, R = woodbury_factors(Minv, U, V, F)
    return F.add(Minv, F.matmul(L, R))
