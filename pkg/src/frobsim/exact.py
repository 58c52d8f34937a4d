"""Brute-force oracles: permutation and ordered-partition enumeration.

These are the ground truth for everything else in the package and refuse to
run beyond small sizes rather than silently taking hours.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, islice, permutations

import numpy as np

from .errors import InstanceTooLargeError, PreconditionError
from .matrixcore import Graph, adjacency, as_sym, check_permutation, permute

MAX_MSIM_N = 10
MAX_QVP_N = 12
MAX_QVP_PARTITIONS = 5_000_000
_CHUNK = 20000


@dataclass
class SimResult:
    """Optimal permutation and distance for a pair ``(A, B)``.

    ``perm`` maps row ``i`` of ``A`` to row ``perm[i]`` of ``B``, i.e. the
    distance is ``||permute(A, perm) - B||_F``.  ``mismatches`` is set for
    0/1 inputs only.
    """

    perm: tuple
    dist: float
    dist_sq: float
    mismatches: int | None = None
    objective: float | None = None
    extra: dict = field(default_factory=dict)


def is_zero_one(M):
    M = np.asarray(M)
    return bool(np.all((M == 0) | (M == 1)) and np.all(np.diag(M) == 0))


def sq_distance(A, B, perm):
    """``||permute(A, perm) - B||_F^2`` evaluated entrywise."""
    D = permute(A, perm) - np.asarray(B)
    return float(np.sum(D * D))


def mismatch_count(G: Graph, H: Graph, perm) -> int:
    """Number of vertex pairs whose adjacency differs between ``G`` and ``perm(G)`` in ``H``."""
    if G.n != H.n:
        raise PreconditionError(f"graphs differ in order: {G.n} vs {H.n}")
    if not (G.is_unweighted and H.is_unweighted):
        raise PreconditionError("mismatch counting needs unweighted graphs")
    perm = check_permutation(perm, G.n)
    mapped = {(min(perm[u], perm[v]), max(perm[u], perm[v])) for u, v in G.edge_set()}
    return len(mapped ^ H.edge_set())


def _perm_chunks(n):
    it = permutations(range(n))
    while True:
        block = list(islice(it, _CHUNK))
        if not block:
            return
        yield np.array(block, dtype=np.intp)


def brute_force_msim(A, B, max_n=MAX_MSIM_N) -> SimResult:
    """Global minimum of ``||A^pi - B||_F`` over all ``n!`` permutations.

    Permutations are visited in lexicographic order; among values within
    round-off of the minimum the lexicographically least permutation wins.
    """
    A = as_sym(A, "A")
    B = as_sym(B, "B")
    if A.shape != B.shape:
        raise PreconditionError(f"dimension mismatch: {A.shape} vs {B.shape}")
    n = A.shape[0]
    if n > max_n:
        raise InstanceTooLargeError("brute-force MSim", n, max_n)
    tie = 1e-12 * max(1.0, float(np.sum(A * A) + np.sum(B * B)))
    best_val, best_perm = np.inf, None
    for P in _perm_chunks(n):
        # (A^pi)[pi_i, pi_j] = A[i, j], so compare A[i, j] with B[pi_i, pi_j]
        Bp = B[P[:, :, None], P[:, None, :]]
        vals = np.sum((A[None] - Bp) ** 2, axis=(1, 2))
        i = int(np.argmin(vals))
        if vals[i] < best_val - tie:
            best_val, best_perm = float(vals[i]), tuple(int(x) for x in P[i])
    mism = int(round(best_val / 2)) if is_zero_one(A) and is_zero_one(B) else None
    return SimResult(best_perm, float(np.sqrt(best_val)), best_val, mism)


def brute_force_graph(G: Graph, H: Graph, max_n=MAX_MSIM_N) -> SimResult:
    return brute_force_msim(adjacency(G), adjacency(H), max_n)


def ordered_partitions(n, cards):
    """All ordered partitions of ``range(n)`` with block sizes ``cards``, lexicographically."""
    if sum(cards) != n:
        raise PreconditionError(f"block sizes {tuple(cards)} do not sum to n={n}")

    def rec(rest, sizes):
        if not sizes:
            yield ()
            return
        for block in combinations(rest, sizes[0]):
            chosen = set(block)
            remaining = tuple(i for i in rest if i not in chosen)
            for tail in rec(remaining, sizes[1:]):
                yield (block,) + tail

    yield from rec(tuple(range(n)), tuple(cards))


def count_partitions(cards):
    from math import comb

    total, left = 1, sum(cards)
    for c in cards:
        total *= comb(left, c)
        left -= c
    return total


def brute_force_qvp(q, max_n=MAX_QVP_N):
    """Best ordered partition for a QVP instance by exhaustive enumeration.

    Returns ``(partition, objective)`` where ``partition`` is a tuple of sorted
    index tuples.  Ties (within round-off) go to the lexicographically least
    block sequence, which is also the enumeration order.
    """
    from .qvp import labels_of, objective_batch

    if q.n > max_n:
        raise InstanceTooLargeError("brute-force QVP", q.n, max_n)
    total = count_partitions(q.cards)
    if total > MAX_QVP_PARTITIONS:
        raise InstanceTooLargeError("brute-force QVP partitions", total, MAX_QVP_PARTITIONS)
    it = ordered_partitions(q.n, q.cards)
    best_val, best_part = -np.inf, None
    while True:
        parts = list(islice(it, _CHUNK))
        if not parts:
            break
        labels = np.array([labels_of(P, q.n) for P in parts], dtype=np.intp)
        vals = objective_batch(q, labels)
        top = float(np.max(vals))
        tie = 1e-12 * max(1.0, abs(top), abs(best_val) if best_part else 0.0)
        if top > best_val + tie:
            i = int(np.flatnonzero(vals >= top - tie)[0])
            best_val, best_part = float(vals[i]), parts[i]
    return best_part, best_val
