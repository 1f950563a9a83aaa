"""Compression by random linear routing through a superconcentrator DAG.

Each input edge carries one column of A.  Vertices are processed in
topological order and every outgoing edge vector is a random combination of
the incoming edge vectors.  The first k output edges become the columns of
the compressed matrix.  Only the complete bipartite construction is built
in; any acyclic graph with designated inputs and outputs can be supplied.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParseError
from .ff import DEFAULT_FIELD, PrimeField, as_rng
from .rank import RankResult, as_sparse, dense_rank


@dataclass(frozen=True)
class LayeredDag:
    n_vertices: int
    edges: tuple  # (u, v) pairs
    inputs: tuple  # vertex receiving input edge i
    outputs: tuple  # vertex emitting output edge j
    order: tuple = field(default=(), compare=False)

    def __post_init__(self):
        for u, v in self.edges:
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices) or u == v:
                raise DimensionError(f"bad edge ({u}, {v})")
        if any(not 0 <= x < self.n_vertices for x in (*self.inputs, *self.outputs)):
            raise DimensionError("terminal vertex out of range")
        object.__setattr__(self, "order", tuple(_topological(self.n_vertices, self.edges)))

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_outputs(self) -> int:
        return len(self.outputs)

    def in_edges(self):
        """Per vertex: list of incoming edge ids (inputs as ``('in', i)``)."""
        inc = [[] for _ in range(self.n_vertices)]
        for i, x in enumerate(self.inputs):
            inc[x].append(("in", i))
        for e, (u, v) in enumerate(self.edges):
            inc[v].append(("e", e))
        return inc

    def out_edges(self):
        out = [[] for _ in range(self.n_vertices)]
        for e, (u, v) in enumerate(self.edges):
            out[u].append(("e", e))
        for j, x in enumerate(self.outputs):
            out[x].append(("out", j))
        return out


def _topological(n, edges):
    indeg = [0] * n
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        indeg[v] += 1
    queue = deque(i for i in range(n) if indeg[i] == 0)
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if len(order) != n:
        raise DimensionError("graph has a cycle")
    return order


def trivial_superconcentrator(n: int) -> LayeredDag:
    """Complete bipartite DAG: inputs 0..n-1, outputs n..2n-1, all n^2 edges."""
    if n < 1:
        raise DimensionError("n must be positive")
    edges = tuple((i, n + j) for i in range(n) for j in range(n))
    return LayeredDag(2 * n, edges, tuple(range(n)), tuple(range(n, 2 * n)))


def sc_compress(A, k: int, dag: LayeredDag | None = None, rng=None, coeffs=None,
                F: PrimeField | None = None) -> np.ndarray:
    """m x k matrix whose columns are random routings of the columns of A.

    ``coeffs`` optionally maps a vertex to its (in-degree x out-degree)
    coefficient matrix; vertices not listed get uniform random coefficients.
    """
    A = as_sparse(A) if F is None else as_sparse(A, F)
    F = A.field
    m, n = A.shape
    dag = trivial_superconcentrator(n) if dag is None else dag
    if dag.n_inputs != n:
        raise DimensionError(f"dag has {dag.n_inputs} inputs, matrix has {n} columns")
    if k < 0 or k > min(m, dag.n_outputs):
        raise DimensionError("k must satisfy 0 <= k <= min(m, number of outputs)")
    if k == 0:
        return F.zeros((m, 0))
    rng = as_rng(rng)
    coeffs = coeffs or {}
    dense = A.to_dense()
    vec = {}
    for i in range(n):
        vec[("in", i)] = dense[:, i]
    inc, out = dag.in_edges(), dag.out_edges()
    for u in dag.order:
        if not out[u]:
            continue
        if not inc[u]:
            for e in out[u]:
                vec[e] = F.zeros(m)
            continue
        Vin = np.stack([vec[e] for e in inc[u]], axis=1)
        C = coeffs.get(u)
        if C is None:
            C = F.sample(rng, (len(inc[u]), len(out[u])))
        else:
            C = F.asarray(C)
            if C.shape != (len(inc[u]), len(out[u])):
                raise DimensionError(f"coefficient block for vertex {u} has wrong shape")
        Vout = F.matmul(Vin, C)
        for t, e in enumerate(out[u]):
            vec[e] = Vout[:, t]
    return np.stack([vec[("out", j)] for j in range(k)], axis=1)


def sc_rank(A, rng=None) -> RankResult:
    """rank(A) from C = sc(sc(A)^T)^T by doubling the leading block size."""
    A = as_sparse(A)
    F = A.field
    N, _, _ = A.normalize()
    m, n = N.shape
    if m == 0:
        return RankResult(0)
    rng = as_rng(rng)
    K = min(m, n)
    B = sc_compress(N, K, trivial_superconcentrator(n), rng)
    C = sc_compress(np.ascontiguousarray(B.T), K, trivial_superconcentrator(m), rng, F=F).T
    k = min(2, K)
    while True:
        v = dense_rank(C[:k, :k], F)
        if v < k or k >= K:
            return RankResult(v)
        k = min(2 * k, K)


# -- file format ------------------------------------------------------------------


def read_dag(lines) -> LayeredDag:
    """Header ``n_vertices n_inputs n_outputs``, ``u v`` edges, ``in ...`` and ``out ...`` lists."""
    body = [ln.split("#", 1)[0].strip() for ln in lines]
    body = [ln for ln in body if ln]
    if not body:
        raise ParseError("empty dag file")
    try:
        nv, ni, no = (int(t) for t in body[0].split())
    except ValueError:
        raise ParseError("dag header must be 'n_vertices n_inputs n_outputs'") from None
    edges, inputs, outputs = [], None, None
    for ln in body[1:]:
        tok = ln.split()
        try:
            if tok[0] == "in":
                inputs = tuple(int(t) for t in tok[1:])
            elif tok[0] == "out":
                outputs = tuple(int(t) for t in tok[1:])
            elif len(tok) == 2:
                edges.append((int(tok[0]), int(tok[1])))
            else:
                raise ValueError
        except ValueError:
            raise ParseError(f"bad dag line {ln!r}") from None
    if inputs is None or outputs is None or len(inputs) != ni or len(outputs) != no:
        raise ParseError("dag input/output lists missing or of the wrong length")
    try:
        return LayeredDag(nv, tuple(edges), inputs, outputs)
    except DimensionError as exc:
        raise ParseError(str(exc)) from None


def write_dag(dag: LayeredDag) -> str:
    lines = [f"{dag.n_vertices} {dag.n_inputs} {dag.n_outputs}"]
    lines += [f"{u} {v}" for u, v in dag.edges]
    lines.append("in " + " ".join(map(str, dag.inputs)))
    lines.append("out " + " ".join(map(str, dag.outputs)))
    return "\n".join(lines) + "\n"
