"""Polynomial evaluation and interpolation over F_p.

Coefficient vectors are indexed by power (``coeffs[d]`` multiplies ``x**d``).
Evaluation is batched: a 2-D coefficient array is a stack of polynomials and
all of them are evaluated at all points with one exact matrix product.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError
from .ff import DEFAULT_FIELD, PrimeField


def power_table(points, degree: int, F: PrimeField = DEFAULT_FIELD, start: int = 0) -> np.ndarray:
    """``W[d, i] = points[i] ** (start + d)`` for ``d < degree``."""
    pts = F.asarray(points).reshape(-1)
    W = F.zeros((degree, len(pts)))
    if degree == 0:
        return W
    cur = F.vpow(pts, start) if start else F.asarray(np.ones(len(pts), dtype=np.int64))
    for d in range(degree):
        W[d] = cur
        if d + 1 < degree:
            cur = F.mul(cur, pts)
    return W


def multipoint_eval(coeffs, points, F: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    """Values of the polynomial(s) at every point.

    ``coeffs`` of shape ``(d,)`` gives shape ``(len(points),)``; shape
    ``(k, d)`` gives ``(k, len(points))``.
    """
    c = F.asarray(coeffs)
    W = power_table(points, c.shape[-1], F)
    return F.matmul(c, W)


def horner(coeffs, x, F: PrimeField = DEFAULT_FIELD) -> int:
    """Scalar evaluation with Python ints, used as a reference."""
    acc = 0
    for c in reversed([int(v) for v in np.asarray(coeffs).reshape(-1)]):
        acc = (acc * int(x) + c) % F.p
    return acc


def _master_poly(xs, F: PrimeField):
    # prod (x - x_i), coefficients low to high, as Python ints
    out = [1]
    for xi in xs:
        nxt = [0] * (len(out) + 1)
        for d, c in enumerate(out):
            nxt[d + 1] = (nxt[d + 1] + c) % F.p
            nxt[d] = (nxt[d] - c * xi) % F.p
        out = nxt
    return out


def vandermonde_inverse(points, F: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    """Inverse of ``V0[i, d] = points[i] ** d`` in O(n^2) field operations.

    Column ``i`` holds the coefficients of the Lagrange basis polynomial for
    ``points[i]``.
    """
    xs = [int(v) for v in F.asarray(points).reshape(-1)]
    n = len(xs)
    if len(set(xs)) != n:
        raise DimensionError("interpolation points must be pairwise distinct")
    if n == 0:
        return F.zeros((0, 0))
    master = _master_poly(xs, F)
    xv = F.asarray(xs)
    # synthetic division of master by (x - x_i) for all i at once
    Qt = F.zeros((n, n))
    cur = F.asarray(np.ones(n, dtype=np.int64))
    Qt[n - 1] = cur
    for d in range(n - 1, 0, -1):
        cur = F.add(F.mul(cur, xv), F.element(master[d]))
        Qt[d - 1] = cur
    # q_i(x_i) = prod_{j != i} (x_i - x_j)
    denom = multipoint_eval(Qt.T, xs, F)
    denom = F.asarray([denom[i, i] for i in range(n)])
    scale = F.asarray([F.inv(d) for d in denom])
    return F.mul(Qt, scale[None, :])


def interpolate(points, values=None, F: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    """Coefficients of the unique polynomial of degree < n through the data.

    Accepts either a list of ``(x, y)`` pairs or separate ``points`` and
    ``values``.  ``values`` may be 2-D of shape ``(n, k)`` to interpolate k
    polynomials on the same nodes; the result then has shape ``(n, k)``.
    """
    if values is None:
        pairs = list(points)
        points = [p[0] for p in pairs]
        values = [p[1] for p in pairs]
    Vinv = vandermonde_inverse(points, F)
    return F.matmul(Vinv, F.asarray(values))


def poly_add(f, g, F: PrimeField = DEFAULT_FIELD) -> np.ndarray:
    f = F.asarray(f)
    g = F.asarray(g)
    n = max(len(f), len(g))
    a = F.zeros(n)
    b = F.zeros(n)
    a[: len(f)] = f
    b[: len(g)] = g
    return F.add(a, b)


def degree(coeffs) -> int:
    """Index of the highest nonzero coefficient, -1 for the zero polynomial."""
    nz = np.flatnonzero(np.asarray(coeffs) != 0)
    return int(nz[-1]) if nz.size else -1
