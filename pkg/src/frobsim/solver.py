"""Exact QVP solver by enumeration of separating hyperplanes, and the MSim pipeline.

Every optimal partition of a QVP instance is mutually linearly separated, and
each separating hyperplane can be moved to pass through ``k`` of the
(symbolically perturbed) points.  The solver therefore guesses one candidate
hyperplane plus orientation per pair of blocks, reads off the region of
every point, brute-forces the few points whose region is ambiguous, and keeps
the best partition that meets the block sizes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .errors import InstanceTooLargeError, PreconditionError
from .exact import MAX_QVP_N, MAX_QVP_PARTITIONS, SimResult, brute_force_qvp, count_partitions, is_zero_one, sq_distance
from .geometry import PointSet, enumerate_candidate_hyperplanes, side_table
from .matrixcore import DEFAULT_CLUSTER_TOL, DEFAULT_RANK_TOL, as_sym, clustering_of
from .qvp import (
    QvpInstance,
    labels_of,
    msim_value,
    objective_batch,
    partition_of,
    partition_to_permutation,
    psd_decompose,
    reduce_msim_to_qvp,
)

DEFAULT_BUDGET = 10**8


@dataclass
class QvpSolution:
    partition: tuple
    objective: float
    branches: int = 0
    candidates: int = 0
    method: str = "hyperplanes"


def branch_count(n, k, p):
    """Number of hyperplane/orientation guesses: ``(2 * C(n, k)) ** C(p, 2)``."""
    pairs = p * (p - 1) // 2
    return (2 * math.comb(n, k)) ** pairs


def fallback_small(q: QvpInstance):
    """Exhaustive search, used when no k-point hyperplane separates anything (``n <= k``)."""
    return brute_force_qvp(q)


def _pick_best(q, labels):
    """Max objective; near-ties go to the lexicographically least block sequence."""
    vals = objective_batch(q, labels)
    top = float(np.max(vals))
    tie = 1e-12 * max(1.0, abs(top))
    close = np.flatnonzero(vals >= top - tie)
    parts = sorted((partition_of(labels[i], q.p), float(vals[i])) for i in close)
    return parts[0]


def _completions(label, cards, p):
    """All ways to place the unassigned points (``-1``) so block sizes match."""
    free = [i for i, l in enumerate(label) if l < 0]
    need = [cards[q] - sum(1 for l in label if l == q) for q in range(p)]
    if any(x < 0 for x in need):
        return
    if not free:
        yield tuple(label)
        return

    def rec(rest, q):
        if q == p - 1:
            yield ((q, rest),)
            return
        for chosen in combinations(rest, need[q]):
            s = set(chosen)
            for tail in rec(tuple(i for i in rest if i not in s), q + 1):
                yield ((q, chosen),) + tail

    for assignment in rec(tuple(free), 0):
        out = list(label)
        for q, idx in assignment:
            for i in idx:
                out[i] = q
        yield tuple(out)


class _Enumerator:
    """Branch classification over a precomputed side table."""

    def __init__(self, q: QvpInstance, table, prune):
        self.q = q
        self.p = q.p
        self.n = q.n
        self.pairs = list(combinations(range(self.p), 2))
        # choice 2h -> hyperplane h with sigma=+1, 2h+1 -> sigma=-1
        self.signed = np.empty((2 * table.shape[0], self.n), dtype=np.int8)
        self.signed[0::2] = table
        self.signed[1::2] = -table
        self.limit = self.p * self.p * q.k if prune else None
        self.cards = np.array(q.cards)

    def keys_for(self, outer):
        """Partial labelings for all branches sharing the outer pair choices."""
        P = len(self.pairs)
        n_inner = min(P, 2)
        c = self.signed.shape[0]
        # per pair: array broadcastable to (c,)*n_inner + (n,)
        views = []
        for idx in range(P):
            if idx < P - n_inner:
                v = self.signed[outer[idx]].reshape((1,) * n_inner + (self.n,))
            else:
                axis = idx - (P - n_inner)
                shape = [1] * n_inner + [self.n]
                shape[axis] = c
                v = self.signed.reshape(shape)
            views.append(v)
        grid = (c,) * n_inner + (self.n,)
        label = np.full(grid, -1, dtype=np.int8)
        hits = np.zeros(grid, dtype=np.int8)
        for q in range(self.p):
            inside = np.ones(grid, dtype=bool)
            for idx, (l, m) in enumerate(self.pairs):
                if l == q:
                    inside &= views[idx] > 0
                elif m == q:
                    inside &= views[idx] < 0
            label[inside] = q
            hits += inside
        # regions demand opposite sides of a shared hyperplane, so they never overlap
        assert hits.max(initial=0) <= 1, "point assigned to two regions"
        label = label.reshape(-1, self.n)
        if self.limit is not None:
            label = label[np.sum(label < 0, axis=1) <= self.limit]
        counts = np.stack([np.sum(label == q, axis=1) for q in range(self.p)], axis=1)
        label = label[np.all(counts <= self.cards, axis=1)]
        if len(label) == 0:
            return set()
        return {row.tobytes() for row in np.unique(label, axis=0)}


def candidate_partitions(q: QvpInstance, prune=True, threads=1):
    """Label vectors of every feasible partition discovered on some branch."""
    n, k, p = q.n, q.k, q.p
    hyps = enumerate_candidate_hyperplanes(n, k)
    table = side_table(PointSet.from_array(q.W), hyps)
    en = _Enumerator(q, table, prune)
    P = len(en.pairs)
    c = en.signed.shape[0]
    outers = list(product(range(c), repeat=max(0, P - 2)))
    keys = set()
    if threads > 1 and len(outers) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            for part in ex.map(en.keys_for, outers):
                keys |= part
    else:
        for outer in outers:
            keys |= en.keys_for(outer)
    found = set()
    for key in keys:
        label = np.frombuffer(key, dtype=np.int8).tolist()
        found.update(_completions(label, q.cards, p))
    return found


def solve_qvp(q: QvpInstance, budget=DEFAULT_BUDGET, prune=True, threads=1,
              fallback=True) -> QvpSolution:
    """Optimal ordered partition of a QVP instance.

    ``prune`` drops branches with more than ``p*p*k`` ambiguous points; it
    never removes the branch that reproduces an optimal partition.  When the
    branch count exceeds ``budget`` and ``fallback`` is set, instances small
    enough for exhaustive search (``n <= 12``) are solved that way instead.
    """
    n, k, p = q.n, q.k, q.p
    if p == 1:
        part = (tuple(range(n)),)
        return QvpSolution(part, float(objective_batch(q, np.zeros((1, n), dtype=np.intp))[0]),
                           method="trivial")
    if k == 0:
        # objective is identically zero; the first partition in lexicographic order wins
        labels = []
        for l, c in enumerate(q.cards):
            labels += [l] * c
        part = partition_of(labels, p)
        return QvpSolution(part, 0.0, method="trivial")
    if n <= k:
        part, val = fallback_small(q)
        return QvpSolution(part, val, method="fallback")
    branches = branch_count(n, k, p)
    if branches > budget:
        # small n but many clusters: exhaustive partitions are the cheaper exact route
        if fallback and n <= MAX_QVP_N and count_partitions(q.cards) <= min(budget, MAX_QVP_PARTITIONS):
            part, val = fallback_small(q)
            return QvpSolution(part, val, method="fallback")
        raise InstanceTooLargeError("hyperplane enumeration", branches, budget)
    found = candidate_partitions(q, prune=prune, threads=threads)
    if not found:
        raise AssertionError("no feasible partition discovered")
    labels = np.array(sorted(found), dtype=np.intp)
    part, val = _pick_best(q, labels)
    return QvpSolution(part, val, branches=branches, candidates=len(found))


def solve_msim(A, B, rank_tol=DEFAULT_RANK_TOL, cluster_tol=DEFAULT_CLUSTER_TOL,
               budget=DEFAULT_BUDGET, orient=True, threads=1, prune=True, fallback=True) -> SimResult:
    """``min_pi ||A^pi - B||_F`` for positive semidefinite ``A`` and ``B``.

    With ``orient`` set, the matrix with the smaller clustering number plays
    the role of ``B`` (the distance is symmetric).  The reported distance is
    evaluated directly on the returned permutation; the partition objective
    and the distance it implies are kept in ``extra``.
    """
    A = as_sym(A, "A")
    B = as_sym(B, "B")
    if A.shape != B.shape:
        raise PreconditionError(f"dimension mismatch: {A.shape} vs {B.shape}")
    Da = psd_decompose(A, "A", rank_tol)
    Db = psd_decompose(B, "B", rank_tol)
    pa = clustering_of(Da, cluster_tol).p
    pb = clustering_of(Db, cluster_tol).p
    swapped = orient and pa < pb
    if swapped:
        q, ctx = reduce_msim_to_qvp(B, A, rank_tol, cluster_tol, decomp_a=Db, decomp_b=Da)
    else:
        q, ctx = reduce_msim_to_qvp(A, B, rank_tol, cluster_tol, decomp_a=Da, decomp_b=Db)
    sol = solve_qvp(q, budget=budget, prune=prune, threads=threads, fallback=fallback)
    perm = partition_to_permutation(sol.partition, ctx)
    if swapped:
        inv = [0] * len(perm)
        for i, j in enumerate(perm):
            inv[j] = i
        perm = tuple(inv)
    d2 = sq_distance(A, B, perm)
    mism = int(round(d2 / 2)) if is_zero_one(A) and is_zero_one(B) else None
    return SimResult(
        perm=perm,
        dist=float(np.sqrt(d2)),
        dist_sq=d2,
        mismatches=mism,
        objective=sol.objective,
        extra={
            "k": q.k,
            "p": q.p,
            "swapped": swapped,
            "dist_from_objective": msim_value(ctx, sol.objective),
            "branches": sol.branches,
            "candidates": sol.candidates,
            "method": sol.method,
            "diagnostics": list(ctx.clusters.diagnostics),
        },
    )
