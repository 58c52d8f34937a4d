"""Graph similarity between a path and a tree in linear time.

Aligning the path ``0-1-...-(n-1)`` with a tree ``H`` keeps exactly those
path edges whose images form a system of vertex-disjoint paths in ``H``, so
the distance is governed by the largest number of tree edges such a system
can cover.  That number comes from a post-order DP with two values per vertex:

* ``A[v]``: best cover inside the subtree of ``v``;
* ``B[v]``: best cover inside the subtree of ``v`` in which ``v`` is an
  endpoint of its path (so the edge to the parent may extend it).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .exact import SimResult, mismatch_count
from .matrixcore import Graph, path_graph


@dataclass(frozen=True)
class RootedTree:
    n: int
    root: int
    parent: tuple
    children: tuple
    order: tuple  # DFS preorder


def root_tree(H: Graph, root=0) -> RootedTree:
    """Root ``H`` at ``root``; raises if ``H`` is not a tree."""
    n = H.n
    if H.m != n - 1:
        raise PreconditionError(f"not a tree: {H.m} edges on {n} vertices")
    adj = H.neighbors()
    parent = [-2] * n
    parent[root] = -1
    children = [[] for _ in range(n)]
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        for u in reversed(adj[v]):
            if parent[u] == -2:
                parent[u] = v
                children[v].append(u)
                stack.append(u)
    if len(order) != n:
        raise PreconditionError("not a tree: graph is disconnected")
    for c in children:
        c.reverse()
    return RootedTree(n, root, tuple(parent), tuple(tuple(c) for c in children), tuple(order))


def _dp(T: RootedTree):
    A = [0] * T.n
    B = [0] * T.n
    for v in reversed(T.order):
        base = sum(A[c] for c in T.children[v])
        gains = sorted((1 + B[c] - A[c] for c in T.children[v]), reverse=True)
        g1 = gains[0] if gains else 0
        g2 = gains[1] if len(gains) > 1 else 0
        B[v] = base + max(0, g1)
        A[v] = base + max(0, g1, g1 + g2)
    return A, B


def max_path_cover(H: Graph) -> int:
    """Most edges of the tree ``H`` covered by vertex-disjoint paths."""
    T = root_tree(H)
    A, _ = _dp(T)
    return A[T.root]


def _cover_edges(T: RootedTree):
    """Edges of one optimal path system, recovered from the DP tables."""
    A, B = _dp(T)
    edges = []
    stack = [(T.root, "A")]
    while stack:
        v, state = stack.pop()
        kids = T.children[v]
        ranked = sorted(kids, key=lambda c: (-(1 + B[c] - A[c]), c))
        gains = [1 + B[c] - A[c] for c in ranked]
        take = 0
        if gains and gains[0] > 0:
            take = 1
            if state == "A" and len(gains) > 1 and gains[1] > 0:
                take = 2
        used = set(ranked[:take])
        for c in kids:
            if c in used:
                edges.append((v, c))
                stack.append((c, "B"))
            else:
                stack.append((c, "A"))
    return edges


def path_order(T: RootedTree, edges):
    """Concatenate the covered paths (and uncovered vertices) in DFS discovery order."""
    nbr = [[] for _ in range(T.n)]
    for u, v in edges:
        nbr[u].append(v)
        nbr[v].append(u)
    rank = {v: i for i, v in enumerate(T.order)}
    placed = [False] * T.n
    seq = []
    for v in T.order:
        if placed[v]:
            continue
        # collect v's component, then walk it from its earliest-discovered endpoint
        comp, stack = [], [v]
        seen = {v}
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in nbr[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        start = min((x for x in comp if len(nbr[x]) <= 1), key=rank.__getitem__)
        prev, cur = -1, start
        while cur != -1:
            seq.append(cur)
            placed[cur] = True
            nxt = [y for y in nbr[cur] if y != prev]
            prev, cur = cur, (nxt[0] if nxt else -1)
    return seq


def path_tree_distance(n, H: Graph) -> SimResult:
    """Distance between the path ``0-1-...-(n-1)`` and the tree ``H``.

    ``dist_sq = 4 * (n - 1 - max_path_cover(H))``.  The witness maps path
    vertex ``i`` to the ``i``-th vertex of the concatenated cover paths.
    """
    if H.n != n:
        raise PreconditionError(f"path has {n} vertices, tree has {H.n}")
    if not H.is_unweighted:
        raise PreconditionError("path/tree similarity needs an unweighted tree")
    T = root_tree(H)
    edges = _cover_edges(T)
    cover = len(edges)
    seq = path_order(T, edges)
    perm = tuple(seq)
    d2 = 4 * (n - 1 - cover)
    mism = mismatch_count(path_graph(n), H, perm)
    assert 2 * mism == d2, "witness does not realize the DP optimum"
    return SimResult(perm, float(np.sqrt(d2)), float(d2), mism, extra={"cover": cover})


def path_vertex_order(G: Graph):
    """Vertices of a path graph from one end to the other (smaller endpoint first), or None."""
    n = G.n
    if G.m != n - 1:
        return None
    adj = G.neighbors()
    if n == 1:
        return [0]
    if any(len(a) > 2 for a in adj):
        return None
    ends = [v for v in range(n) if len(adj[v]) == 1]
    if len(ends) != 2:
        return None
    order, prev, cur = [], -1, ends[0]
    while cur != -1:
        order.append(cur)
        nxt = [y for y in adj[cur] if y != prev]
        prev, cur = cur, (nxt[0] if nxt else -1)
    return order if len(order) == n else None
