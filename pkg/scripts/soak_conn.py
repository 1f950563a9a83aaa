"""Random add/delete scripts on small digraphs checked against max-flow."""

import argparse
import time

import numpy as np

from fastrank.conn import ConnConfig, ConnectivityState
from fastrank.ff import substream
from fastrank.instances import random_digraph


def maxflow(n, edges, s, t):
    residual = {}
    for u, v in edges:
        residual[(u, v)] = 1
        residual.setdefault((v, u), 0)
    adj = {u: [v for (a, v) in residual if a == u] for u in range(n)}
    flow = 0
    while True:
        parent, queue = {s: None}, [s]
        for u in queue:
            for v in adj[u]:
                if v not in parent and residual[(u, v)]:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            return flow
        v = t
        while parent[v] is not None:
            residual[(parent[v], v)] -= 1
            residual[(v, parent[v])] += 1
            v = parent[v]
        flow += 1


def run(seed, ops, n_max, check):
    rng = substream(seed, "soak-conn")
    n = int(rng.integers(2, n_max + 1))
    st = ConnectivityState(n, random_digraph(n, int(rng.integers(0, n * (n - 1) // 2 + 1)), rng), rng,
                           config=ConnConfig(check=check))
    allp = [(u, v) for u in range(n) for v in range(n) if u != v]
    bad = 0
    for _ in range(ops):
        cur = set(st.edges)
        if cur and (rng.random() < 0.45 or len(cur) == len(allp)):
            st.delete_edge(*sorted(cur)[int(rng.integers(len(cur)))])
        else:
            free = [e for e in allp if e not in cur]
            st.add_edge(*free[int(rng.integers(len(free)))])
        want = np.array([[-1 if s == t else maxflow(n, st.edges, s, t) for t in range(n)] for s in range(n)])
        bad += not np.array_equal(st.all_pairs(), want)
    return n, bad


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scripts", type=int, default=20)
    ap.add_argument("--ops", type=int, default=100)
    ap.add_argument("--max-vertices", type=int, default=8)
    ap.add_argument("--no-check", action="store_true", help="skip the per-update invariant check")
    args = ap.parse_args()
    t0 = time.perf_counter()
    clean = 0
    for s in range(args.scripts):
        n, bad = run(s, args.ops, args.max_vertices, not args.no_check)
        clean += bad == 0
        print(f"script {s:3d}  n={n}  mismatches={bad}")
    print(f"{clean}/{args.scripts} clean in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
