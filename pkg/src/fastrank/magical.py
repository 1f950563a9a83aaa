"""Random bipartite "magical" graphs and the sparse compression B = A C.

A magical graph on (X, Y) gives every x two targets in Y.  It is built by
merging two random perfect matchings on a padded copy of X: the padded side
is cut into |Y| consecutive groups and each group collapses to one y.
Compressing the columns of A routes column j to both targets of x_j with
random coefficients, so B has exactly twice as many triplets as A.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError
from .ff import DEFAULT_FIELD, PrimeField, as_rng
from .matrix import SparseMatrix

# expansion constant: compressed width is EXPANSION * k
EXPANSION = 11


@dataclass(frozen=True)
class MagicalGraph:
    x_size: int
    y_size: int
    targets: np.ndarray  # (x_size, 2) target y of each x along both matchings

    @property
    def group_size(self) -> int:
        return -(-self.x_size // self.y_size)

    def degrees_x(self) -> np.ndarray:
        return np.full(self.x_size, 2, dtype=np.int64)

    def degrees_y(self) -> np.ndarray:
        return np.bincount(self.targets.reshape(-1), minlength=self.y_size)

    def edges(self):
        """All 2|X| edges as ``(x, y)``; parallel edges are listed twice."""
        xs = np.repeat(np.arange(self.x_size), 2)
        return list(zip(xs.tolist(), self.targets.reshape(-1).tolist()))

    def neighbors_of(self, ys) -> np.ndarray:
        """Sorted X vertices adjacent to any of ``ys``."""
        mask = np.zeros(self.y_size, dtype=bool)
        mask[np.asarray(ys, dtype=np.int64)] = True
        hit = mask[self.targets[:, 0]] | mask[self.targets[:, 1]]
        return np.flatnonzero(hit)

    def is_matchable(self, S) -> bool:
        """Whether ``S`` (subset of X) can be matched into Y (Kuhn's algorithm)."""
        S = [int(s) for s in S]
        match_y = {}

        def augment(x, seen):
            for y in set(self.targets[x].tolist()):
                if y in seen:
                    continue
                seen.add(y)
                if y not in match_y or augment(match_y[y], seen):
                    match_y[y] = x
                    return True
            return False

        return all(augment(x, set()) for x in S)


def gen_magical(x_size: int, y_size: int, rng=None) -> MagicalGraph:
    if y_size < 1 or x_size < y_size:
        raise DimensionError(f"need x_size >= y_size >= 1, got ({x_size}, {y_size})")
    rng = as_rng(rng)
    group = -(-x_size // y_size)
    padded = group * y_size
    first = rng.permutation(padded)[:x_size]
    second = rng.permutation(padded)[:x_size]
    targets = np.stack([first // group, second // group], axis=1).astype(np.int64)
    return MagicalGraph(x_size, y_size, targets)


@dataclass(frozen=True)
class CompressionOperator:
    """Column map of a compression; ``graph is None`` marks the identity."""

    source_cols: int
    target_cols: int
    graph: MagicalGraph | None = None
    coeffs: np.ndarray | None = field(default=None, repr=False)

    @property
    def is_identity(self) -> bool:
        return self.graph is None

    def apply(self, A: SparseMatrix) -> SparseMatrix:
        if A.ncols != self.source_cols:
            raise DimensionError("operator does not match the matrix width")
        if self.is_identity:
            return A
        F = A.field
        t = self.graph.targets[A.cols]
        c = self.coeffs[A.cols]
        rows = np.repeat(A.rows, 2)
        cols = t.reshape(-1)
        vals = F.mul(np.repeat(A.vals, 2), c.reshape(-1))
        return SparseMatrix(A.nrows, self.target_cols, rows, cols, vals, F)

    def to_dense(self, F: PrimeField = DEFAULT_FIELD) -> np.ndarray:
        """The n x t matrix C with B = A C."""
        if self.is_identity:
            return F.eye(self.source_cols)
        xs = np.repeat(np.arange(self.source_cols), 2)
        return F.scatter_add((self.source_cols, self.target_cols), xs,
                             self.graph.targets.reshape(-1), self.coeffs.reshape(-1))

    def preimage(self, ys) -> np.ndarray:
        """Source columns feeding the given target columns."""
        if self.is_identity:
            return np.unique(np.asarray(ys, dtype=np.int64))
        return self.graph.neighbors_of(ys)


def compress_cols(A: SparseMatrix, k: int, rng=None, c: int = EXPANSION):
    """Compress the columns of ``A`` down to ``c*k`` while keeping min(rank, k).

    Returns ``(B, op)``; when ``A`` already has at most ``c*k`` columns the
    matrix comes back unchanged with an identity operator.
    """
    if k < 1:
        raise DimensionError("k must be positive")
    n = A.ncols
    width = c * k
    if n <= width:
        return A, CompressionOperator(n, n)
    rng = as_rng(rng)
    graph = gen_magical(n, width, rng)
    coeffs = A.field.sample(rng, (n, 2))
    op = CompressionOperator(n, width, graph, coeffs)
    return op.apply(A), op


def compress_rows(A: SparseMatrix, k: int, rng=None, c: int = EXPANSION):
    B, op = compress_cols(A.T, k, rng, c)
    return B.T, op
