"""Empirical probability that a fixed k-subset of X fails to match into Y.

Sweeps the expansion constant c (|Y| = c k) so the decay with k is visible
at small c, where failures actually happen.
"""

import argparse

from fastrank.ff import substream
from fastrank.magical import gen_magical


def rate(k, c, ratio, trials, seed):
    y = c * k
    fails = 0
    for t in range(trials):
        rng = substream(seed, "magical", c, k, ratio, t)
        G = gen_magical(ratio * y, y, rng)
        fails += not G.is_matchable(rng.choice(ratio * y, size=k, replace=False))
    return fails / trials


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", type=int, nargs="+", default=[4, 8, 16])
    ap.add_argument("--cs", type=int, nargs="+", default=[1, 2, 3, 11])
    ap.add_argument("--ratio", type=int, default=10, help="|X| / |Y|")
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print("c    " + "  ".join(f"k={k:<6d}" for k in args.ks))
    for c in args.cs:
        row = [rate(k, c, args.ratio, args.trials, args.seed) for k in args.ks]
        print(f"{c:<4d} " + "  ".join(f"{r:<8.4f}" for r in row))


if __name__ == "__main__":
    main()
