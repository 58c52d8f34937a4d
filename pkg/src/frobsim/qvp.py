"""Quadratic vector partition instances and the reduction from matrix similarity.

For PSD ``A = U diag(lam) U^T`` and ``B = V diag(gam) V^T`` the quantity
``<A^pi, B>`` only depends on which cluster of identical rows of ``V`` each
row of ``U`` is sent to.  Maximizing it becomes a partition problem over the
rows of ``U`` with block sizes given by the cluster multiplicities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPSDError, PreconditionError
from .matrixcore import (
    DEFAULT_CLUSTER_TOL,
    DEFAULT_RANK_TOL,
    Clustering,
    SpectralDecomp,
    as_sym,
    clustering_of,
    eig_sym,
    spectral_decompose,
    trace_inner,
)


@dataclass(frozen=True)
class QvpInstance:
    """Points ``W`` (n x k), coupling ``K`` (p x p), weights ``lam`` (k,), block sizes ``cards``."""

    W: np.ndarray
    K: np.ndarray
    lam: np.ndarray
    cards: tuple

    def __post_init__(self):
        W = np.asarray(self.W, dtype=float)
        if W.ndim == 1:
            W = W.reshape(-1, 1)
        K = np.atleast_2d(np.asarray(self.K, dtype=float))
        lam = np.atleast_1d(np.asarray(self.lam, dtype=float))
        if W.shape[0] == 0 and lam.size:
            W = W.reshape(0, lam.size)
        cards = tuple(int(c) for c in self.cards)
        if K.shape != (len(cards), len(cards)):
            raise PreconditionError(f"K has shape {K.shape}, expected {(len(cards),) * 2}")
        if lam.shape != (W.shape[1],):
            raise PreconditionError(f"lam has {lam.size} entries for {W.shape[1]}-dimensional points")
        if np.any(lam <= 0):
            raise PreconditionError("lam entries must be positive")
        if any(c < 0 for c in cards) or sum(cards) != W.shape[0]:
            raise PreconditionError(f"block sizes {cards} do not sum to n={W.shape[0]}")
        if np.max(np.abs(K - K.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(K))):
            raise PreconditionError("K is not symmetric")
        K = (K + K.T) / 2
        if eig_sym(K)[0][-1] < -1e-9 * max(1.0, float(np.max(np.abs(K)))):
            raise PreconditionError("K is not positive semidefinite")
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "cards", cards)

    @property
    def n(self):
        return self.W.shape[0]

    @property
    def k(self):
        return self.W.shape[1]

    @property
    def p(self):
        return len(self.cards)


def labels_of(partition, n):
    """Block index of every point, ``-1`` where a point is unassigned."""
    lab = [-1] * n
    for l, block in enumerate(partition):
        for i in block:
            lab[i] = l
    return lab


def partition_of(labels, p):
    labels = list(labels)
    return tuple(tuple(i for i, l in enumerate(labels) if l == q) for q in range(p))


def check_partition(q: QvpInstance, P):
    if len(P) != q.p:
        raise PreconditionError(f"partition has {len(P)} blocks, instance has p={q.p}")
    seen = sorted(i for block in P for i in block)
    if seen != list(range(q.n)):
        raise PreconditionError("blocks must be disjoint and cover all points")
    sizes = tuple(len(b) for b in P)
    if sizes != q.cards:
        raise PreconditionError(f"block sizes {sizes} differ from required {q.cards}")


def qvp_objective(q: QvpInstance, P) -> float:
    """``sum_{l,m} K[l,m] <W^{T_l}, W^{T_m}>_lam`` for an ordered partition."""
    check_partition(q, P)
    S = np.array([q.W[list(b)].sum(axis=0) if b else np.zeros(q.k) for b in P])
    return float(np.sum(q.K * ((S * q.lam) @ S.T)))


def objective_batch(q: QvpInstance, labels) -> np.ndarray:
    """Objective for many complete label vectors at once (rows of ``labels``)."""
    labels = np.asarray(labels, dtype=np.intp)
    onehot = (labels[:, None, :] == np.arange(q.p)[None, :, None]).astype(float)
    S = onehot @ q.W  # (m, p, k)
    G = np.einsum("mpk,k,mqk->mpq", S, q.lam, S)
    return np.einsum("mpq,pq->m", G, q.K)


@dataclass(frozen=True)
class ReductionContext:
    clusters: Clustering
    const_term: float
    decomp_a: SpectralDecomp
    decomp_b: SpectralDecomp


def psd_decompose(M, name, rank_tol=DEFAULT_RANK_TOL):
    """Spectral decomposition that rejects matrices with a significant negative eigenvalue."""
    D = spectral_decompose(M, rank_tol)
    if D.k and D.eigvals[-1] < 0:
        top = float(np.max(np.abs(D.eigvals)))
        raise NotPSDError(name, float(D.eigvals[-1]), rank_tol * top)
    return D


def reduce_msim_to_qvp(A, B, rank_tol=DEFAULT_RANK_TOL, cluster_tol=DEFAULT_CLUSTER_TOL,
                       decomp_a=None, decomp_b=None):
    """Build the partition instance whose optimum gives ``min_pi ||A^pi - B||_F``.

    Points are the rows of the eigenvector matrix of ``A``; blocks correspond
    to the clusters of identical rows in the eigenvector matrix of ``B``.
    """
    A = as_sym(A, "A")
    B = as_sym(B, "B")
    if A.shape != B.shape:
        raise PreconditionError(f"dimension mismatch: {A.shape} vs {B.shape}")
    Da = decomp_a or psd_decompose(A, "A", rank_tol)
    Db = decomp_b or psd_decompose(B, "B", rank_tol)
    cl = clustering_of(Db, cluster_tol)
    Vt = cl.representatives
    K = (Vt * Db.eigvals) @ Vt.T
    q = QvpInstance(W=Da.U, K=K, lam=Da.eigvals, cards=cl.multiplicities)
    const = trace_inner(A, A) + trace_inner(B, B)
    return q, ReductionContext(cl, const, Da, Db)


def partition_to_permutation(P, ctx: ReductionContext):
    """Send the sorted members of block ``l`` onto the sorted members of cluster ``l``."""
    blocks = ctx.clusters.blocks
    if len(P) != len(blocks):
        raise PreconditionError(f"partition has {len(P)} blocks, clustering has {len(blocks)}")
    n = sum(len(b) for b in blocks)
    perm = [-1] * n
    for T, S in zip(P, blocks):
        if len(T) != len(S):
            raise PreconditionError(f"block of size {len(T)} cannot map onto cluster of size {len(S)}")
        for i, j in zip(sorted(T), S):
            perm[i] = j
    if sorted(perm) != list(range(n)):
        raise PreconditionError("partition does not cover all indices")
    return tuple(perm)


def msim_value(ctx: ReductionContext, F_max) -> float:
    """Distance recovered from the optimal partition objective."""
    F_max = float(F_max)
    if not np.isfinite(F_max):
        raise PreconditionError("objective must be finite")
    return float(np.sqrt(max(0.0, ctx.const_term - 2.0 * F_max)))
