"""Exact arithmetic in a prime field F_p, scalar and vectorised.

Field elements live in numpy arrays.  Three storage strategies are used
depending on the modulus:

* ``p = 2**61 - 1`` (the default): ``uint64`` with Mersenne reduction and an
  exact float64 limb-split matrix product that can run through BLAS.
* ``p < 2**32``: ``uint64`` with plain ``%`` (products fit in 64 bits).
* any other prime below ``2**63``: ``object`` arrays of Python ints.

All three give identical results; only speed differs.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import NotInvertibleError

MERSENNE61 = (1 << 61) - 1

_U = np.uint64
_M61 = _U(MERSENNE61)
_MASK21 = _U((1 << 21) - 1)
_MASK30 = _U((1 << 30) - 1)
_MASK31 = _U((1 << 31) - 1)
_MASK32 = _U((1 << 32) - 1)

# float64 limb products stay exact while the inner dimension is at most this
_LIMB_CHUNK = 2048
# below this many multiply-adds, exact Python-int matmul beats limb splitting
_SMALL_MATMUL = 4096


def _mul_m61(a, b):
    a_hi, a_lo = a >> _U(31), a & _MASK31
    b_hi, b_lo = b >> _U(31), b & _MASK31
    hh = a_hi * b_hi
    mid = a_hi * b_lo + a_lo * b_hi
    ll = a_lo * b_lo
    s = (hh << _U(1)) + (mid >> _U(30)) + ((mid & _MASK30) << _U(31)) + (ll & _M61) + (ll >> _U(61))
    s = (s & _M61) + (s >> _U(61))
    return s - np.where(s >= _M61, _M61, _U(0))


def _is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p.

    Scalars may be Python ints or numpy scalars; array methods accept any
    array already reduced into ``[0, p)`` with the field's ``dtype``.
    """

    p: int = MERSENNE61
    kind: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = int(self.p)
        object.__setattr__(self, "p", p)
        if p != MERSENNE61 and (p < 3 or p >= 1 << 63 or not _is_prime(p)):
            raise ValueError(f"modulus must be an odd prime below 2**63, got {p}")
        if p == MERSENNE61:
            kind = "m61"
        elif p < 1 << 32:
            kind = "small"
        else:
            kind = "object"
        object.__setattr__(self, "kind", kind)

    @cached_property
    def dtype(self):
        return np.dtype(object) if self.kind == "object" else np.dtype(np.uint64)

    def supports_dimension(self, n: int) -> bool:
        """True when ``p >= n**4``, the field size the probability bounds assume."""
        return self.p >= n**4

    # -- conversion ---------------------------------------------------------

    def asarray(self, x) -> np.ndarray:
        """Reduce arbitrary integers (negatives included) into the field."""
        arr = np.asarray(x)
        if arr.dtype.kind == "u":
            out = arr.astype(_U) % _U(self.p)
        elif arr.dtype.kind in "ib":
            out = (arr.astype(np.int64) % np.int64(self.p)).astype(_U)
        else:
            out = np.vectorize(lambda v: int(v) % self.p, otypes=[object])(arr) if arr.size else arr.astype(object)
            return out if self.kind == "object" else out.astype(_U)
        return out.astype(object) if self.kind == "object" else out

    def zeros(self, shape) -> np.ndarray:
        z = np.zeros(shape, dtype=self.dtype)
        if self.kind == "object":
            z[...] = 0
        return z

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        out[np.arange(n), np.arange(n)] = 1
        return out

    def element(self, x) -> int:
        return int(x) % self.p

    # -- arithmetic (scalars or arrays) -------------------------------------

    def add(self, a, b):
        if self.kind == "m61":
            s = np.asarray(a, dtype=_U) + np.asarray(b, dtype=_U)
            return s - np.where(s >= _M61, _M61, _U(0))
        return (a + b) % self.p

    def sub(self, a, b):
        if self.kind == "object":
            return (a - b) % self.p
        a = np.asarray(a, dtype=_U)
        b = np.asarray(b, dtype=_U)
        pp = _U(self.p)
        return (a + np.where(a >= b, _U(0), pp)) - b

    def neg(self, a):
        if self.kind == "object":
            return (-a) % self.p
        a = np.asarray(a, dtype=_U)
        return np.where(a == 0, a, _U(self.p) - a)

    def mul(self, a, b):
        if self.kind == "m61":
            if np.ndim(a) == 0 and np.ndim(b) == 0:
                return _U(int(a) * int(b) % MERSENNE61)
            a = np.asarray(a, dtype=_U)
            b = np.asarray(b, dtype=_U)
            if a.size <= 64 and b.size <= 64:
                return (a.astype(object) * b.astype(object) % MERSENNE61).astype(_U)
            return _mul_m61(a, b)
        if self.kind == "small":
            return (np.asarray(a, dtype=_U) * np.asarray(b, dtype=_U)) % _U(self.p)
        return (a * b) % self.p

    def inv(self, a) -> int:
        a = int(a) % self.p
        if a == 0:
            raise NotInvertibleError("zero has no multiplicative inverse")
        return pow(a, -1, self.p)

    def pow(self, a, e: int) -> int:
        return pow(int(a), int(e), self.p)

    def powers(self, x, count: int, start: int = 1) -> np.ndarray:
        """``[x**start, x**(start+1), ..., x**(start+count-1)]``."""
        out = self.zeros(count)
        if count == 0:
            return out
        cur = pow(int(x), start, self.p)
        xi = int(x) % self.p
        for i in range(count):
            out[i] = cur
            cur = cur * xi % self.p
        return out

    def vpow(self, base: np.ndarray, e: int) -> np.ndarray:
        """Elementwise ``base**e`` by square-and-multiply."""
        result = self.zeros(np.shape(base))
        result[...] = 1
        b = np.array(base, dtype=self.dtype, copy=True)
        while e:
            if e & 1:
                result = self.mul(result, b)
            e >>= 1
            if e:
                b = self.mul(b, b)
        return result

    def matmul(self, A, B) -> np.ndarray:
        """Exact ``A @ B`` over F_p (1-D operands follow numpy's rules)."""
        A = np.asarray(A, dtype=self.dtype)
        B = np.asarray(B, dtype=self.dtype)
        if self.kind == "object":
            return np.matmul(A, B) % self.p
        k = A.shape[-1]
        if k != B.shape[0]:
            raise ValueError(f"matmul shape mismatch {A.shape} @ {B.shape}")
        if k == 0:
            return self.zeros(A.shape[:-1] + B.shape[1:])
        if A.size * (B.shape[-1] if B.ndim > 1 else 1) <= _SMALL_MATMUL:
            return np.asarray(np.matmul(A.astype(object), B.astype(object)) % self.p).astype(_U)
        acc = None
        for lo in range(0, k, _LIMB_CHUNK):
            hi = min(k, lo + _LIMB_CHUNK)
            part = self._matmul_chunk(A[..., lo:hi], B[lo:hi])
            acc = part if acc is None else self.add(acc, part)
        return acc

    def _matmul_chunk(self, A, B):
        if self.kind == "m61":
            la = [(A & _MASK21).astype(np.float64), ((A >> _U(21)) & _MASK21).astype(np.float64),
                  (A >> _U(42)).astype(np.float64)]
            lb = [(B & _MASK21).astype(np.float64), ((B >> _U(21)) & _MASK21).astype(np.float64),
                  (B >> _U(42)).astype(np.float64)]
            parts = [None] * 5
            for i in range(3):
                for j in range(3):
                    prod = np.matmul(la[i], lb[j]).astype(_U)
                    d = i + j
                    parts[d] = prod if parts[d] is None else parts[d] + prod
            # weights 2**(21 d) mod p
            total = parts[0] % _M61
            for d, w in ((1, 1 << 21), (2, 1 << 42), (3, 4), (4, 1 << 23)):
                total = self.add(total, _mul_m61(parts[d], _U(w)))
            return total
        pp = _U(self.p)
        a0, a1 = (A & _U(0xFFFF)).astype(np.float64), (A >> _U(16)).astype(np.float64)
        b0, b1 = (B & _U(0xFFFF)).astype(np.float64), (B >> _U(16)).astype(np.float64)
        c0 = np.matmul(a0, b0).astype(_U) % pp
        c1 = (np.matmul(a0, b1).astype(_U) + np.matmul(a1, b0).astype(_U)) % pp
        c2 = np.matmul(a1, b1).astype(_U) % pp
        w1, w2 = _U((1 << 16) % self.p), _U((1 << 32) % self.p)
        return (c0 + (c1 * w1) % pp + (c2 * w2) % pp) % pp

    def scatter_add(self, shape, rows, cols, vals) -> np.ndarray:
        """Dense matrix with ``vals`` summed (mod p) at the given positions."""
        rows = np.asarray(rows, dtype=np.intp)
        cols = np.asarray(cols, dtype=np.intp)
        if self.kind == "object":
            out = self.zeros(shape)
            np.add.at(out, (rows, cols), np.asarray(vals, dtype=object))
            return out % self.p
        vals = np.asarray(vals, dtype=_U)
        lo = np.zeros(shape, dtype=_U)
        hi = np.zeros(shape, dtype=_U)
        np.add.at(lo, (rows, cols), vals & _MASK32)
        np.add.at(hi, (rows, cols), vals >> _U(32))
        pp = _U(self.p)
        hi = self.mul(hi % pp, _U((1 << 32) % self.p))
        return self.add(hi, lo % pp)

    # -- sampling -----------------------------------------------------------

    def sample(self, rng: np.random.Generator, size=None):
        """Uniform element(s) of F_p."""
        return self._draw(rng, 0, size)

    def sample_nonzero(self, rng: np.random.Generator, size=None):
        """Uniform element(s) of F_p minus zero."""
        return self._draw(rng, 1, size)

    def _draw(self, rng, low, size):
        vals = rng.integers(low, self.p, size=size, dtype=np.uint64)
        if size is None:
            return int(vals)
        return vals.astype(object) if self.kind == "object" else vals


DEFAULT_FIELD = PrimeField()


def as_rng(rng=None) -> np.random.Generator:
    """Accept a Generator, an integer seed, or None."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def substream(seed: int, *names) -> np.random.Generator:
    """Deterministic generator for a named stage under a root seed."""
    key = tuple(zlib.crc32(str(n).encode()) for n in names)
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=key))
