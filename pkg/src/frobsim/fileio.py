"""Plain-text graph and matrix files.

Graph file::

    n m
    u v [w]      # m lines, 0-based, weight defaults to 1

Matrix file::

    n
    a00 a01 ...  # n rows of n reals

Lines starting with ``#`` are ignored in both formats.
"""

from __future__ import annotations

import numpy as np

from .errors import ParseError, PreconditionError
from .matrixcore import Graph, as_sym


def _lines(text):
    out = []
    for raw in text.splitlines():
        s = raw.strip()
        if s and not s.startswith("#"):
            out.append(s)
    return out


def parse_graph(text) -> Graph:
    lines = _lines(text)
    if not lines:
        raise ParseError("empty graph file")
    head = lines[0].split()
    try:
        n, m = int(head[0]), int(head[1])
    except (ValueError, IndexError):
        raise ParseError(f"graph header must be 'n m', got {lines[0]!r}") from None
    if len(head) != 2:
        raise ParseError(f"graph header must be 'n m', got {lines[0]!r}")
    if len(lines) - 1 != m:
        raise ParseError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for s in lines[1:]:
        parts = s.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"bad edge line {s!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"bad edge line {s!r}") from None
        edges.append((u, v, w))
    try:
        return Graph(n, tuple(edges))
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def parse_matrix(text) -> np.ndarray:
    lines = _lines(text)
    if not lines:
        raise ParseError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(f"matrix header must be 'n', got {lines[0]!r}") from None
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} matrix rows, found {len(lines) - 1}")
    try:
        rows = [[float(x) for x in s.split()] for s in lines[1:]]
    except ValueError as exc:
        raise ParseError(f"bad matrix entry: {exc}") from None
    if any(len(r) != n for r in rows):
        raise ParseError(f"every matrix row needs {n} entries")
    try:
        return as_sym(rows)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def sniff(text):
    """Return ``"graph"`` or ``"matrix"`` from the header line."""
    lines = _lines(text)
    if not lines:
        raise ParseError("empty input file")
    return "graph" if len(lines[0].split()) == 2 else "matrix"


def parse_any(text):
    return parse_graph(text) if sniff(text) == "graph" else parse_matrix(text)


def read_any(path):
    with open(path, encoding="utf-8") as fh:
        return parse_any(fh.read())


def format_graph(G: Graph) -> str:
    out = [f"{G.n} {G.m}"]
    for u, v, w in G.edges:
        out.append(f"{u} {v}" if w == 1.0 else f"{u} {v} {w!r}")
    return "\n".join(out) + "\n"


def _num(x):
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


def format_matrix(M) -> str:
    M = np.asarray(M, dtype=float)
    out = [str(M.shape[0])]
    out += [" ".join(_num(x) for x in row) for row in M]
    return "\n".join(out) + "\n"


def write_graph(path, G):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(G))


def write_matrix(path, M):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(M))
