"""Readers and writers for Matrix Market files, edge lists and index sets.

Matrix Market entries are parsed as Python integers so values beyond 64
bits reduce exactly; indices are 1-based on disk and 0-based in memory.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .errors import ParseError
from .ff import DEFAULT_FIELD, PrimeField
from .matrix import SparseMatrix


def _lines(src):
    """Lines from a path, an open file, a list of lines, or literal text."""
    if isinstance(src, Path):
        return src.read_text().splitlines()
    if isinstance(src, str):
        if src and "\n" not in src and not src.lstrip().startswith("%%"):
            return Path(src).read_text().splitlines()
        return src.splitlines()
    if isinstance(src, io.IOBase) or hasattr(src, "read"):
        return src.read().splitlines()
    return list(src)


def _int_value(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        f = float(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: bad value {tok!r}") from None
    if f != int(f):
        raise ParseError(f"line {lineno}: non-integral value {tok!r}")
    return int(f)


def read_matrix_market(src, F: PrimeField = DEFAULT_FIELD) -> SparseMatrix:
    """Coordinate or array Matrix Market with integer, real-integral or pattern entries."""
    lines = _lines(src)
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise ParseError("missing %%MatrixMarket header")
    head = lines[0].split()
    if len(head) < 5 or head[1].lower() != "matrix":
        raise ParseError("header must read '%%MatrixMarket matrix <format> <field> <symmetry>'")
    fmt, field, symmetry = (h.lower() for h in head[2:5])
    if fmt not in ("coordinate", "array"):
        raise ParseError(f"unsupported format {fmt!r}")
    if field not in ("integer", "real", "pattern"):
        raise ParseError(f"unsupported field {field!r}")
    if symmetry not in ("general", "symmetric", "skew-symmetric"):
        raise ParseError(f"unsupported symmetry {symmetry!r}")
    body = [(i + 1, ln.strip()) for i, ln in enumerate(lines[1:], 1) if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ParseError("missing size line")
    lineno, size = body[0]
    try:
        dims = [int(t) for t in size.split()]
    except ValueError:
        raise ParseError(f"line {lineno}: bad size line") from None
    trip = []
    if fmt == "coordinate":
        if len(dims) != 3:
            raise ParseError(f"line {lineno}: expected 'rows cols nnz'")
        m, n, nnz = dims
        entries = body[1:]
        if len(entries) != nnz:
            raise ParseError(f"expected {nnz} entries, found {len(entries)}")
        for lineno, ln in entries:
            tok = ln.split()
            want = 2 if field == "pattern" else 3
            if len(tok) != want:
                raise ParseError(f"line {lineno}: expected {want} fields")
            i, j = int(tok[0]) - 1, int(tok[1]) - 1
            if not (0 <= i < m and 0 <= j < n):
                raise ParseError(f"line {lineno}: index out of range")
            v = 1 if field == "pattern" else _int_value(tok[2], lineno)
            trip.append((i, j, v))
    else:
        if len(dims) != 2 or field == "pattern":
            raise ParseError(f"line {lineno}: bad array header")
        m, n = dims
        vals = [_int_value(t, ln_no) for ln_no, ln in body[1:] for t in ln.split()]
        if symmetry != "general":
            raise ParseError("symmetric array format is not supported")
        if len(vals) != m * n:
            raise ParseError(f"expected {m * n} array values, found {len(vals)}")
        for idx, v in enumerate(vals):
            if v:
                trip.append((idx % m, idx // m, v))
    if symmetry != "general":
        sign = -1 if symmetry == "skew-symmetric" else 1
        trip += [(j, i, sign * v) for i, j, v in trip if i != j]
    rows = np.array([t[0] for t in trip], dtype=np.int64)
    cols = np.array([t[1] for t in trip], dtype=np.int64)
    vals = F.asarray(np.array([t[2] % F.p for t in trip], dtype=object)) if trip else F.zeros(0)
    return SparseMatrix(m, n, rows, cols, vals, F).coalesce()


def write_matrix_market(A, dest=None, F: PrimeField = DEFAULT_FIELD) -> str:
    if not isinstance(A, SparseMatrix):
        A = SparseMatrix.from_dense(A, F)
    C = A.coalesce()
    out = ["%%MatrixMarket matrix coordinate integer general",
           f"{C.nrows} {C.ncols} {C.nnz}"]
    out += [f"{i + 1} {j + 1} {int(v)}" for i, j, v in zip(C.rows, C.cols, C.vals)]
    text = "\n".join(out) + "\n"
    if dest is not None:
        Path(dest).write_text(text)
    return text


def read_edge_list(src):
    """``n m`` header then m lines ``u v`` (0-based); returns ``(n, edges)``."""
    body = [(i, ln.split("#", 1)[0].strip()) for i, ln in enumerate(_lines(src), 1)]
    body = [(i, ln) for i, ln in body if ln]
    if not body:
        raise ParseError("empty graph file")
    try:
        n, m = (int(t) for t in body[0][1].split())
    except ValueError:
        raise ParseError("graph header must be 'n m'") from None
    if len(body) - 1 != m:
        raise ParseError(f"expected {m} edges, found {len(body) - 1}")
    edges = []
    for lineno, ln in body[1:]:
        tok = ln.split()
        if len(tok) != 2:
            raise ParseError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer vertex") from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"line {lineno}: vertex out of range")
        edges.append((u, v))
    return n, edges


def write_edge_list(n, edges) -> str:
    return "\n".join([f"{n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]) + "\n"


def read_index_set(src):
    toks = [t for ln in _lines(src) for t in ln.split("#", 1)[0].split()]
    try:
        return sorted(set(int(t) for t in toks))
    except ValueError:
        raise ParseError("index set must contain integers") from None
