"""Command-line front end.

Every subcommand draws its randomness from named substreams of one root
seed, so identical inputs, flags and seed give identical output.  Exit codes:
0 success, 1 bad input, 2 a certified result could not be produced.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import conn as conn_mod
from . import dynrank as dyn_mod
from .errors import FastRankError, ParseError, VerificationError
from .ff import MERSENNE61, PrimeField, substream
from .fileio import read_edge_list, read_index_set, read_matrix_market, write_matrix_market
from .matching import Graph, find_matching, matching_size, subset_matching_size
from .matroid import disjoint_bases, max_disjoint_bases
from .rank import indep_cols, lowrank_mul, nullspace_basis, rank, rank_atmost, rank_one_decompose
from .superc import sc_rank

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CliConfig:
    seed: int = 0
    prime: int = MERSENNE61
    retries: int = 3
    verify: bool = True
    trials: int = 1
    json: bool = False

    def __post_init__(self):
        if self.seed < 0 or self.seed >= 1 << 64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.retries < 1 or self.trials < 1:
            raise ValueError("retries and trials must be positive")
        PrimeField(self.prime)  # primality check

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.prime)

    def rng(self, *names):
        return substream(self.seed, *names)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw, 0)
    except ValueError:
        raise ParseError(f"environment variable {name} must be an integer") from None


_GLOBAL_DEFAULTS = {"seed": None, "prime": None, "retries": 3, "verify": True, "trials": 1, "json": False,
                    "verbose": False}


def _add_globals(p, d):
    p.add_argument("--seed", type=int, default=d["seed"], help="root seed (env FASTRANK_SEED)")
    p.add_argument("--prime", type=int, default=d["prime"], help="field modulus (env FASTRANK_PRIME)")
    p.add_argument("--retries", type=int, default=d["retries"])
    p.add_argument("--verify", action=argparse.BooleanOptionalAction, default=d["verify"])
    p.add_argument("--trials", type=int, default=d["trials"], help="repeat scalar commands on independent substreams")
    p.add_argument("--json", action="store_true", default=d["json"], help="emit one JSON object instead of text")
    p.add_argument("-v", "--verbose", action="store_true", default=d["verbose"])


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fastrank", description="Randomized exact rank toolkit over a prime field.")
    _add_globals(p, _GLOBAL_DEFAULTS)
    # repeated on every subcommand so flags may follow it; SUPPRESS keeps the top-level value
    common = _Parser(add_help=False)
    _add_globals(common, {k: argparse.SUPPRESS for k in _GLOBAL_DEFAULTS})
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    def mtx(name, help_):
        sp = add(name, help=help_)
        sp.add_argument("matrix")
        return sp

    mtx("rank", "rank of a Matrix Market matrix")
    mtx("rank-atmost", "min(rank, k)").add_argument("-k", type=int, required=True)
    mtx("indep-cols", "indices of min(rank, k) independent columns").add_argument("-k", type=int, required=True)
    mtx("nullspace", "basis of the right null space")
    d = mtx("decompose", "A = B C with B a column subset of A")
    d.add_argument("--out", help="write PREFIX_B.mtx and PREFIX_C.mtx")
    lm = mtx("lowrank-mul", "A @ B through the rank-one decomposition of A")
    lm.add_argument("other")
    lm.add_argument("--out", help="write the product here instead of stdout")
    mtx("dynrank", "run a dynamic rank script").add_argument("--script", required=True)
    mtx("sc-rank", "rank through superconcentrator compression")
    m = add("matching", help="maximum matching size of an undirected graph")
    m.add_argument("graph")
    m.add_argument("-k", type=int)
    m.add_argument("--extract", action="store_true")
    sm = add("subset-matching", help="vertices of a set covered by one matching")
    sm.add_argument("graph")
    sm.add_argument("--set", required=True, dest="subset")
    db = mtx("disjoint-bases", "disjoint column bases (maximum number without -k)")
    db.add_argument("-k", type=int)
    c = add("conn", help="dynamic edge connectivity script on a digraph")
    c.add_argument("graph")
    c.add_argument("--script", required=True)
    return p


def _read_lines(path):
    with open(path) as fh:
        return fh.read().splitlines()


def _fmt_vec(xs) -> str:
    return " ".join(str(int(x)) for x in xs)


def _graph(path, directed=False):
    n, edges = read_edge_list(path)
    if directed:
        return n, edges
    try:
        return Graph.from_edges(n, edges)
    except FastRankError as exc:
        raise ParseError(str(exc)) from None


def _scalar(cfg: CliConfig, stream: str, label: str, fn):
    """Run ``fn(rng)`` once per trial and report the majority value."""
    vals = [fn(cfg.rng(stream, "trial", t)) for t in range(cfg.trials)]
    best, count = Counter(vals).most_common(1)[0]
    text = [f"{label} {best}"]
    out = {label: best}
    if cfg.trials > 1:
        text.append(f"agree {count}/{cfg.trials}")
        out["trials"] = vals
    return text, out


def _run(args, cfg: CliConfig):
    F = cfg.field
    cmd = args.cmd
    load = lambda path: read_matrix_market(path, F)  # noqa: E731
    text, data = [], {}
    if cmd == "rank":
        A = load(args.matrix)
        text, data = _scalar(cfg, cmd, "rank", lambda g: rank(A, g, cfg.verify, cfg.retries).value)
    elif cmd == "rank-atmost":
        A = load(args.matrix)
        text, data = _scalar(cfg, cmd, "rank_atmost", lambda g: rank_atmost(A, args.k, g).value)
    elif cmd == "sc-rank":
        A = load(args.matrix)
        text, data = _scalar(cfg, cmd, "rank", lambda g: sc_rank(A, g).value)
    elif cmd == "indep-cols":
        A = load(args.matrix)
        cols = indep_cols(A, args.k, cfg.rng(cmd), cfg.verify, cfg.retries)
        text = [f"count {len(cols)}", "cols " + _fmt_vec(cols)]
        data = {"cols": [int(x) for x in cols]}
    elif cmd == "nullspace":
        A = load(args.matrix)
        N = nullspace_basis(A, cfg.rng(cmd), cfg.verify, cfg.retries)
        text = [f"nullity {N.shape[0]}"] + [_fmt_vec(row) for row in N]
        data = {"nullity": int(N.shape[0]), "basis": [[int(x) for x in row] for row in N]}
    elif cmd == "decompose":
        A = load(args.matrix)
        dec = rank_one_decompose(A, cfg.rng(cmd), cfg.verify, cfg.retries)
        text = [f"rank {dec.rank}", "rows " + _fmt_vec(dec.S), "cols " + _fmt_vec(dec.T)]
        data = {"rank": dec.rank, "rows": [int(x) for x in dec.S], "cols": [int(x) for x in dec.T]}
        if args.out:
            write_matrix_market(dec.B, f"{args.out}_B.mtx", F)
            write_matrix_market(dec.C, f"{args.out}_C.mtx", F)
    elif cmd == "lowrank-mul":
        A, B = load(args.matrix), load(args.other)
        P = lowrank_mul(A.to_dense(), B.to_dense(), cfg.rng(cmd), cfg.verify, cfg.retries, F)
        body = write_matrix_market(P, args.out, F)
        if args.out:
            text = [f"wrote {args.out}"]
        else:
            text = body.rstrip("\n").split("\n")
        data = {"product": [[int(x) for x in row] for row in P]}
    elif cmd == "dynrank":
        A = load(args.matrix)
        state = dyn_mod.DynamicRank(A.to_dense(), cfg.rng(cmd, "state"), F)
        ranks = dyn_mod.run_script(state, _read_lines(args.script))
        text = [str(r) for r in ranks]
        data = {"queries": ranks}
    elif cmd == "matching":
        G = _graph(args.graph)
        size = matching_size(G, args.k, cfg.rng(cmd, "size"), F=F)
        text = [f"matching_size {size}"]
        data = {"matching_size": size}
        if args.extract:
            M = find_matching(G, args.k, cfg.rng(cmd, "extract"), cfg.retries, F)
            text += [f"{u} {v}" for u, v in M]
            data["matching"] = [list(e) for e in M]
    elif cmd == "subset-matching":
        G = _graph(args.graph)
        S = read_index_set(args.subset)
        val = subset_matching_size(G, S, cfg.rng(cmd), F)
        text = [f"covered {val}"]
        data = {"covered": val}
    elif cmd == "disjoint-bases":
        A = load(args.matrix)
        g = cfg.rng(cmd)
        if args.k is None:
            k, parts = max_disjoint_bases(A, g, cfg.retries, F)
        else:
            k, parts = args.k, disjoint_bases(A, args.k, g, cfg.retries, F)
        if parts is None:
            text = ["none"]
            data = {"bases": None}
        else:
            text = [f"bases {k}"] + [_fmt_vec(p) for p in parts]
            data = {"bases": [[int(x) for x in p] for p in parts]}
    elif cmd == "conn":
        n, edges = _graph(args.graph, directed=True)
        try:
            state = conn_mod.ConnectivityState(n, edges, cfg.rng(cmd, "state"), F)
        except FastRankError as exc:
            if isinstance(exc, VerificationError):
                raise
            raise ParseError(str(exc)) from None
        results = conn_mod.run_script(state, _read_lines(args.script))
        for r in results:
            text.append(str(r) if np.ndim(r) == 0 else conn_mod.format_table(r))
        data = {"queries": [r if np.ndim(r) == 0 else r.tolist() for r in results]}
    return text, data


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        seed = args.seed if args.seed is not None else _env_int("FASTRANK_SEED", 0)
        prime = args.prime if args.prime is not None else _env_int("FASTRANK_PRIME", MERSENNE61)
        cfg = CliConfig(seed, prime, args.retries, args.verify, args.trials, args.json)
        text, data = _run(args, cfg)
    except VerificationError as exc:
        print(f"fastrank: verification failed: {exc}", file=sys.stderr)
        return 2
    except (FastRankError, ValueError, OSError) as exc:
        print(f"fastrank: error: {exc}", file=sys.stderr)
        return 1
    if cfg.json:
        print(json.dumps(data, sort_keys=True))
    elif text:
        print("\n".join(text))
    return 0


if __name__ == "__main__":
    sys.exit(main())
