"""Wall time of rank() against triplet count for a fixed planted rank."""

import argparse
import time

import numpy as np

from fastrank.ff import substream
from fastrank.instances import planted_rank_sparse
from fastrank.rank import rank


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rank", type=int, default=16)
    ap.add_argument("--exponents", type=int, nargs="+", default=[10, 12, 14])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes, times = [], []
    for e in args.exponents:
        n = 2**e
        rng = substream(args.seed, "scale", e)
        A = planted_rank_sparse(n, n, args.rank, 5.0 / n, rng, mix=2)
        best = float("inf")
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            v = rank(A, rng).value
            best = min(best, time.perf_counter() - t0)
        sizes.append(A.nnz)
        times.append(best)
        print(f"n={n:6d} |A|={A.nnz:8d} rank={v:3d} time={best * 1e3:8.1f} ms")
    if len(sizes) > 1:
        slope = np.polyfit(np.log(sizes), np.log(times), 1)[0]
        print(f"fitted exponent in |A|: {slope:.2f}")


if __name__ == "__main__":
    main()
