"""Long random dynamic-rank scripts that cross m = n, checked against elimination."""

import argparse
import time

import numpy as np

from fastrank.dynrank import DynamicRank, DynRankConfig
from fastrank.ff import DEFAULT_FIELD as F
from fastrank.ff import substream
from fastrank.instances import rank_deficient_dense
from fastrank.rank import dense_rank


def run(seed, ops, cap, every, period):
    rng = substream(seed, "soak-dyn")
    m, n = int(rng.integers(5, cap // 2)), int(rng.integers(cap // 2, cap))
    A = rank_deficient_dense(m, n, int(rng.integers(1, m + 1)), rng)
    st = DynamicRank(A, rng, config=DynRankConfig(expected_updates=ops))
    wide, flips, bad = True, 0, 0
    side = np.sign(m - n)
    for op in range(ops):
        m, n = A.shape
        if op % period == 0:
            wide = not wide
        if rng.random() < 0.4:
            u, v = F.sample(rng, m), F.sample(rng, n)
            u[rng.random(m) < 0.5] = 0
            st.rank_one_update(u, v)
            A = F.add(A, F.mul(u[:, None], v[None, :]))
        elif wide:
            if n < cap and rng.random() < 0.6:
                col, pos = F.sample(rng, m), int(rng.integers(n + 1))
                st.add_col(col, pos)
                A = np.insert(A, pos, col, axis=1)
            elif m > 1:
                i = int(rng.integers(m))
                st.delete_row(i)
                A = np.delete(A, i, axis=0)
        else:
            if m < cap and rng.random() < 0.6:
                row, pos = F.sample(rng, n), int(rng.integers(m + 1))
                st.add_row(row, pos)
                A = np.insert(A, pos, row, axis=0)
            elif n > 1:
                j = int(rng.integers(n))
                st.delete_col(j)
                A = np.delete(A, j, axis=1)
        s = np.sign(A.shape[0] - A.shape[1])
        if s and side and s != side:
            flips += 1
        side = s or side
        bad += st.rank != dense_rank(A)
        if op % every == 0:
            st.check_invariants()
    return bad, flips


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scripts", type=int, default=10)
    ap.add_argument("--ops", type=int, default=500)
    ap.add_argument("--cap", type=int, default=40, help="largest dimension allowed")
    ap.add_argument("--check-every", type=int, default=10)
    ap.add_argument("--period", type=int, default=125, help="ops between shape-direction toggles")
    args = ap.parse_args()
    t0 = time.perf_counter()
    for s in range(args.scripts):
        bad, flips = run(s, args.ops, args.cap, args.check_every, args.period)
        print(f"script {s:3d}  mismatches={bad}  m=n crossings={flips}")
    print(f"elapsed {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
