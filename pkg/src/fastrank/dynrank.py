"""Dynamic rank under rank-one updates and row/column insertion and deletion.

The structure keeps a core matrix T of shape s x N with s <= N (T = A when
m <= n, T = A^T otherwise), a Vandermonde sketch V (N x s) with
V[i, j] = point_i ** (j + 1), the square sketch B = T V, and invertible X, Y
with X B Y = diag(I_r, 0).  The inverses P = X^{-1} and Q = Y^{-1} are kept
alongside so that deletions can truncate X and Y without losing
invertibility.  Every update is reduced to a rank-one change of
diag(I_r, 0) and folded into X and Y with O(s) elementary operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionError, ParseError
from .ff import DEFAULT_FIELD, PrimeField, as_rng
from .matrix import inverse, rank_normal_form
from .polyeval import interpolate, multipoint_eval, power_table, vandermonde_inverse


class Orientation(str, Enum):
    COLS = "cols"  # B = A V
    ROWS = "rows"  # B = V A, stored as A^T V


@dataclass(frozen=True)
class DynRankConfig:
    expected_updates: int = 1024
    # g must have multiplicative order above this; default 4 (m + n + updates)
    order_ceiling: int | None = None
    max_resample: int = 32


class DynamicRank:
    def __init__(self, A, rng=None, F: PrimeField = DEFAULT_FIELD, config: DynRankConfig = DynRankConfig()):
        A = F.asarray(A)
        if A.ndim != 2:
            raise DimensionError("expected a 2-D matrix")
        self.F = F
        self.config = config
        m, n = A.shape
        self.orientation = Orientation.COLS if m <= n else Orientation.ROWS
        T = A if self.orientation is Orientation.COLS else A.T
        self._T = np.array(T, copy=True)
        s, N = self._T.shape
        self._ceiling = config.order_ceiling or 4 * (m + n + config.expected_updates)
        self.g = self._draw_generator(as_rng(rng))
        self._exps = list(range(1, N + 1))
        self._pts = F.powers(self.g, N, start=1)
        self._in_use = {int(x) for x in self._pts}
        self._V = power_table(self._pts, s, F, start=1).T.copy()
        # row i of T is the polynomial sum_l T[i, l] y**(l+1), evaluated at g**1..g**s
        coeffs = np.concatenate([F.zeros((s, 1)), self._T], axis=1)
        self._B = multipoint_eval(coeffs, F.powers(self.g, s, start=1), F) if s else F.zeros((0, 0))
        self._refactor()

    # -- public queries -------------------------------------------------------

    @property
    def shape(self):
        s, N = self._T.shape
        return (s, N) if self.orientation is Orientation.COLS else (N, s)

    @property
    def rank(self) -> int:
        return self._r

    def rank_query(self) -> int:
        return self._r

    @property
    def matrix(self) -> np.ndarray:
        T = self._T if self.orientation is Orientation.COLS else self._T.T
        return np.array(T, copy=True)

    @property
    def points(self) -> np.ndarray:
        return self._pts.copy()

    # -- public updates -------------------------------------------------------

    def rank_one_update(self, u, v):
        """A <- A + u v^T."""
        F = self.F
        m, n = self.shape
        u = F.asarray(u).reshape(-1)
        v = F.asarray(v).reshape(-1)
        if len(u) != m or len(v) != n:
            raise DimensionError(f"update vectors must have lengths {m} and {n}")
        if self.orientation is Orientation.COLS:
            self._core_rank_one(u, v)
        else:
            self._core_rank_one(v, u)

    def add_row(self, row, pos: int | None = None):
        m, n = self.shape
        row = self._vec(row, n)
        pos = m if pos is None else self._pos(pos, m + 1)
        if self.orientation is Orientation.COLS:
            if m == n:
                self.flip_representation()
                self._add_long(row, pos)
            else:
                self._add_short(row, pos)
        else:
            self._add_long(row, pos)
        self._settle()

    def add_col(self, col, pos: int | None = None):
        m, n = self.shape
        col = self._vec(col, m)
        pos = n if pos is None else self._pos(pos, n + 1)
        if self.orientation is Orientation.ROWS:
            if m == n:
                self.flip_representation()
                self._add_long(col, pos)
            else:
                self._add_short(col, pos)
        else:
            self._add_long(col, pos)
        self._settle()

    def delete_row(self, i: int):
        m, n = self.shape
        i = self._index(i, m)
        if self.orientation is Orientation.COLS:
            self._delete_short(i)
        elif m == n:
            self.flip_representation()
            self._delete_short(i)
        else:
            self._delete_long(i)
        self._settle()

    def delete_col(self, j: int):
        m, n = self.shape
        j = self._index(j, n)
        if self.orientation is Orientation.ROWS:
            self._delete_short(j)
        elif m == n:
            self.flip_representation()
            self._delete_short(j)
        else:
            self._delete_long(j)
        self._settle()

    def flip_representation(self):
        """Switch between B = A V and B = V A; requires a square matrix."""
        F = self.F
        s, N = self._T.shape
        if s != N:
            raise DimensionError("representation can only be flipped on a square matrix")
        new_pts = F.powers(self.g, s, start=1)
        T_new = np.ascontiguousarray(self._T.T)
        if s:
            zero_col = F.zeros((s, 1))
            # B' = T^T V' by evaluating each row at the new points
            B_new = multipoint_eval(np.concatenate([zero_col, T_new], axis=1), new_pts, F)
            # X' = (V Y)^T, an evaluation of the columns of Y at the old points
            X_new = multipoint_eval(np.concatenate([zero_col, self._Y.T], axis=1), self._pts, F)
            # Y' = V'^{-1} X^T: V' z = w means z is q(y) = h(y) / y through (pt, w / pt)
            inv_new = F.asarray([F.inv(x) for x in new_pts])
            Y_new = interpolate(new_pts, F.mul(self._X.T, inv_new[:, None]), F)
            inv_old = F.asarray([F.inv(x) for x in self._pts])
            V_inv = F.mul(vandermonde_inverse(self._pts, F), inv_old[None, :])
            P_new = np.ascontiguousarray(F.matmul(self._Q, V_inv).T)
            V_new = power_table(new_pts, s, F, start=1).T.copy()
            Q_new = F.matmul(self._P.T, V_new)
        else:
            B_new = X_new = Y_new = P_new = Q_new = V_new = F.zeros((0, 0))
        self._T, self._B, self._V = T_new, B_new, V_new
        self._X, self._Y, self._P, self._Q = X_new, Y_new, P_new, Q_new
        self._pts = new_pts
        self._exps = list(range(1, s + 1))
        self._in_use = {int(x) for x in new_pts}
        self.orientation = Orientation.ROWS if self.orientation is Orientation.COLS else Orientation.COLS

    # -- invariants -------------------------------------------------------------

    def check_invariants(self) -> None:
        """Raise AssertionError unless every structural invariant holds."""
        F = self.F
        s, N = self._T.shape
        assert s <= N, "core must be short and wide"
        assert len(self._pts) == N == len(self._exps)
        assert len({int(x) for x in self._pts}) == N, "evaluation points collide"
        assert (self._V == power_table(self._pts, s, F, start=1).T).all(), "V is not Vandermonde"
        assert (self._B == F.matmul(self._T, self._V)).all(), "B differs from the sketch"
        I = F.eye(s)
        assert (F.matmul(self._X, self._P) == I).all(), "X is not invertible (X P != I)"
        assert (F.matmul(self._Y, self._Q) == I).all(), "Y is not invertible (Y Q != I)"
        D = F.zeros((s, s))
        D[np.arange(self._r), np.arange(self._r)] = 1
        assert (F.matmul(F.matmul(self._X, self._B), self._Y) == D).all(), "X B Y is not in normal form"

    # -- internals: argument handling ---------------------------------------------

    def _vec(self, x, n):
        x = self.F.asarray(x).reshape(-1)
        if len(x) != n:
            raise DimensionError(f"expected a vector of length {n}, got {len(x)}")
        return x

    @staticmethod
    def _index(i, n):
        i = int(i)
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range for size {n}")
        return i

    @staticmethod
    def _pos(p, n):
        p = int(p)
        if not 0 <= p < n:
            raise IndexError(f"insert position {p} out of range")
        return p

    def _draw_generator(self, rng) -> int:
        F = self.F
        for _ in range(self.config.max_resample):
            g = F.sample_nonzero(rng)
            # order above the ceiling makes g**1 .. g**ceiling pairwise distinct
            if 1 not in {int(x) for x in F.powers(g, self._ceiling, start=1)}:
                return g
        raise DimensionError("field too small for the requested number of distinct points")

    def _new_exponent(self) -> int:
        used = set(self._exps)
        e = 1
        while e in used or F_pow(self.F, self.g, e) in self._in_use:
            e += 1
        return e

    def _settle(self):
        m, n = self.shape
        if self.orientation is Orientation.ROWS and m <= n:
            self.flip_representation()

    def _refactor(self):
        F = self.F
        X, Y, r = rank_normal_form(self._B, F)
        self._X, self._Y, self._r = X, Y, r
        self._P = inverse(X, F)
        self._Q = inverse(Y, F)

    # -- internals: elementary operations keeping X P = I and Y Q = I -------------

    def _row_gauss(self, i, f):
        # X[j] -= f_j X[i] for all j (f_i = 0)
        F = self.F
        self._X = F.sub(self._X, F.mul(f[:, None], self._X[i][None, :]))
        self._P[:, i] = F.add(self._P[:, i], F.matmul(self._P, f))

    def _row_combine(self, i, a):
        # X[i] -= a^T X (a_i = 0)
        F = self.F
        self._X[i] = F.sub(self._X[i], F.matmul(a, self._X))
        self._P = F.add(self._P, F.mul(self._P[:, i][:, None], a[None, :]))

    def _row_scale(self, i, alpha):
        F = self.F
        self._X[i] = F.mul(self._X[i], alpha)
        self._P[:, i] = F.mul(self._P[:, i], F.inv(alpha))

    def _col_gauss(self, l, h):
        # Y[:, c] -= h_c Y[:, l] for all c (h_l = 0)
        F = self.F
        self._Y = F.sub(self._Y, F.mul(self._Y[:, l][:, None], h[None, :]))
        self._Q[l] = F.add(self._Q[l], F.matmul(h, self._Q))

    def _col_combine(self, l, a):
        # Y[:, l] -= Y a (a_l = 0)
        F = self.F
        self._Y[:, l] = F.sub(self._Y[:, l], F.matmul(self._Y, a))
        self._Q = F.add(self._Q, F.mul(a[:, None], self._Q[l][None, :]))

    def _col_scale(self, l, alpha):
        F = self.F
        self._Y[:, l] = F.mul(self._Y[:, l], alpha)
        self._Q[l] = F.mul(self._Q[l], F.inv(alpha))

    def _swap_rows(self, i, j):
        if i != j:
            self._X[[i, j]] = self._X[[j, i]]
            self._P[:, [i, j]] = self._P[:, [j, i]]

    def _swap_cols(self, i, j):
        if i != j:
            self._Y[:, [i, j]] = self._Y[:, [j, i]]
            self._Q[[i, j]] = self._Q[[j, i]]

    # -- internals: the rank-one reduction ------------------------------------------

    def _reduce(self, u, v):
        """Bring diag(I_r, 0) + u v^T back to normal form, updating X and Y."""
        F = self.F
        r = self._r
        if not u.any() or not v.any():
            return
        tail_u = np.flatnonzero(u[r:])
        if tail_u.size:
            i = r + int(tail_u[0])
            ui = int(u[i])
            f = F.mul(u, F.inv(ui))
            f[i] = 0
            if f.any():
                self._row_gauss(i, f)
            w = F.mul(v, ui)
            a = F.zeros(len(w))
            a[:r] = w[:r]
            if a.any():
                self._row_combine(i, a)
            w[:r] = 0
            nz = np.flatnonzero(w)
            if nz.size == 0:
                return
            l = int(nz[0])
            wl_inv = F.inv(w[l])
            h = F.mul(w, wl_inv)
            h[l] = 0
            if h.any():
                self._col_gauss(l, h)
            self._col_scale(l, wl_inv)
            self._swap_rows(i, r)
            self._swap_cols(l, r)
            self._r = r + 1
            return
        tail_v = np.flatnonzero(v[r:])
        if tail_v.size:
            l = r + int(tail_v[0])
            vl = int(v[l])
            h = F.mul(v, F.inv(vl))
            h[l] = 0
            if h.any():
                self._col_gauss(l, h)
            self._col_combine(l, F.mul(u, vl))
            return
        gamma = (1 + int(F.matmul(v, u))) % F.p
        if gamma:
            g_inv = F.inv(gamma)
            vX = F.matmul(v, self._X)
            self._X = F.sub(self._X, F.mul(F.mul(u, g_inv)[:, None], vX[None, :]))
            Pu = F.matmul(self._P, u)
            self._P = F.add(self._P, F.mul(Pu[:, None], v[None, :]))
            return
        # gamma = 0: I_r + u v^T loses one rank
        i = int(np.flatnonzero(u)[0])
        ui = int(u[i])
        f = F.mul(u, F.inv(ui))
        f[i] = 0
        if f.any():
            self._row_gauss(i, f)
        a = F.mul(v, ui)
        a[i] = 0
        if a.any():
            self._row_combine(i, a)
        if f.any():
            self._col_combine(i, F.neg(f))
        self._swap_rows(i, r - 1)
        self._swap_cols(i, r - 1)
        self._r = r - 1

    def _absorb(self, a, b):
        """B <- B + a b^T with the normal form repaired."""
        F = self.F
        self._B = F.add(self._B, F.mul(a[:, None], b[None, :]))
        self._reduce(F.matmul(self._X, a), F.matmul(self._Y.T, b))

    def _core_rank_one(self, u, v):
        F = self.F
        if not u.any() or not v.any():
            return
        self._T = F.add(self._T, F.mul(u[:, None], v[None, :]))
        self._absorb(u, F.matmul(v, self._V))

    # -- internals: growing and shrinking the core ------------------------------------

    def _add_long(self, x, pos):
        """Insert a column of T (length s) at ``pos``."""
        F = self.F
        s = self._T.shape[0]
        e = self._new_exponent()
        pt = F_pow(F, self.g, e)
        self._exps.insert(pos, e)
        self._pts = np.insert(self._pts, pos, F.asarray([pt])).astype(F.dtype)
        self._in_use.add(pt)
        self._V = np.insert(self._V, pos, F.powers(pt, s, start=1), axis=0).astype(F.dtype)
        self._T = np.insert(self._T, pos, F.zeros(s), axis=1).astype(F.dtype)
        if x.any():
            self._T[:, pos] = x
            self._absorb(x, self._V[pos])

    def _delete_long(self, j):
        F = self.F
        x = self._T[:, j].copy()
        if x.any():
            self._T[:, j] = 0
            self._absorb(F.neg(x), self._V[j])
        self._in_use.discard(int(self._pts[j]))
        del self._exps[j]
        self._pts = np.delete(self._pts, j)
        self._V = np.delete(self._V, j, axis=0)
        self._T = np.delete(self._T, j, axis=1)

    def _add_short(self, y, pos):
        """Insert a row of T (length N) at ``pos``; requires s < N."""
        F = self.F
        s, N = self._T.shape
        assert s < N
        new_col = F.vpow(self._pts, s + 1)
        self._V = np.concatenate([self._V, new_col[:, None]], axis=1)
        self._T = np.insert(self._T, pos, F.zeros(N), axis=0).astype(F.dtype)
        B = np.insert(self._B, pos, F.zeros(s), axis=0).astype(F.dtype)
        self._B = np.concatenate([B, F.zeros((s + 1, 1))], axis=1)
        src = list(range(pos)) + [s] + list(range(pos, s))
        X = _bordered(F, self._X)
        P = _bordered(F, self._P)
        self._X = np.ascontiguousarray(X[:, src])
        self._P = np.ascontiguousarray(P[src, :])
        self._Y = _bordered(F, self._Y)
        self._Q = _bordered(F, self._Q)
        c = F.matmul(self._T, new_col)
        if c.any():
            self._absorb(c, _unit(F, s + 1, s))
        if y.any():
            self._core_rank_one(_unit(F, s + 1, pos), y)

    def _delete_short(self, i):
        F = self.F
        s = self._T.shape[0]
        y = self._T[i].copy()
        if y.any():
            self._core_rank_one(_unit(F, s, i), F.neg(y))
        # move line i to the end
        src = [k for k in range(s) if k != i] + [i]
        self._T = np.ascontiguousarray(self._T[src])
        self._B = np.ascontiguousarray(self._B[src])
        self._X = np.ascontiguousarray(self._X[:, src])
        self._P = np.ascontiguousarray(self._P[src])
        z = s - 1
        last = self._B[:, z].copy()
        if last.any():
            self._absorb(F.neg(last), _unit(F, s, z))
        r = self._r
        # make P[z] = e_z with row operations on X rows >= r
        c = r + int(np.flatnonzero(self._P[z, r:])[0])
        self._row_scale(c, int(self._P[z, c]))
        h = self._P[z].copy()
        h[:r] = 0
        h[c] = 0
        if h.any():
            self._row_combine(c, F.neg(h))
        self._swap_rows(c, z)
        # make Q[:, z] = e_z with column operations on Y columns >= r
        c = r + int(np.flatnonzero(self._Q[r:, z])[0])
        self._col_scale(c, int(self._Q[c, z]))
        a = F.neg(self._Q[:, z])
        a[:r] = 0
        a[c] = 0
        if a.any():
            self._col_combine(c, a)
        self._swap_cols(c, z)
        self._X = np.ascontiguousarray(self._X[:z, :z])
        self._P = np.ascontiguousarray(self._P[:z, :z])
        self._Y = np.ascontiguousarray(self._Y[:z, :z])
        self._Q = np.ascontiguousarray(self._Q[:z, :z])
        self._B = np.ascontiguousarray(self._B[:z, :z])
        self._T = np.ascontiguousarray(self._T[:z])
        self._V = np.ascontiguousarray(self._V[:, :z])


def F_pow(F: PrimeField, g, e) -> int:
    return pow(int(g), int(e), F.p)


def _unit(F: PrimeField, n, i):
    e = F.zeros(n)
    e[i] = 1
    return e


def _bordered(F: PrimeField, M):
    n = M.shape[0]
    out = F.zeros((n + 1, n + 1))
    out[:n, :n] = M
    out[n, n] = 1
    return out


# -- script driver ---------------------------------------------------------------


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"line {lineno}: expected integers") from None


def parse_script(lines):
    """Yield ``(lineno, op, args)`` tuples from a dynamic-rank script."""
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split(None, 1)
        op = head.upper()
        body = rest[0] if rest else ""
        if op == "R1":
            if "|" not in body:
                raise ParseError(f"line {lineno}: R1 needs 'u values | v values'")
            left, right = body.split("|", 1)
            yield lineno, op, (_ints(left.split(), lineno), _ints(right.split(), lineno))
        elif op in ("ADDROW", "ADDCOL"):
            yield lineno, op, (_ints(body.split(), lineno),)
        elif op in ("DELROW", "DELCOL"):
            vals = _ints(body.split(), lineno)
            if len(vals) != 1:
                raise ParseError(f"line {lineno}: {op} takes one index")
            yield lineno, op, (vals[0],)
        elif op == "QUERY":
            if body:
                raise ParseError(f"line {lineno}: QUERY takes no arguments")
            yield lineno, op, ()
        else:
            raise ParseError(f"line {lineno}: unknown op {head!r}")


def run_script(state: DynamicRank, lines, check: bool = False):
    """Apply a script; returns the ranks printed by QUERY lines."""
    out = []
    for lineno, op, args in parse_script(lines):
        try:
            if op == "R1":
                state.rank_one_update(*args)
            elif op == "ADDROW":
                state.add_row(args[0])
            elif op == "ADDCOL":
                state.add_col(args[0])
            elif op == "DELROW":
                state.delete_row(args[0])
            elif op == "DELCOL":
                state.delete_col(args[0])
            else:
                out.append(state.rank)
        except (DimensionError, IndexError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        if check:
            state.check_invariants()
    return out
