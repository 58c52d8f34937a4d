"""Dense symmetric matrices, graphs, spectral decomposition and clustering.

Matrices are plain ``numpy.ndarray`` objects of shape ``(n, n)``; the
:func:`as_sym` helper validates and normalizes them.  Graphs carry an explicit
weighted edge list so that both adjacency and Laplacian forms can be built.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, PreconditionError

DEFAULT_SWEEP_TOL = 1e-12
DEFAULT_RANK_TOL = 1e-9
DEFAULT_CLUSTER_TOL = 1e-7
MAX_SWEEPS = 100


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph on vertices ``0..n-1``.

    ``edges`` holds ``(u, v, w)`` triples with ``u != v``; unordered pairs may
    not repeat.  Unweighted graphs use ``w == 1`` throughout.
    """

    n: int
    edges: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError(f"graph needs at least one vertex, got n={self.n}")
        seen = set()
        norm = []
        for e in self.edges:
            if len(e) == 2:
                u, v, w = e[0], e[1], 1.0
            else:
                u, v, w = e
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise PreconditionError(f"duplicate edge {key}")
            seen.add(key)
            norm.append((u, v, float(w)))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self):
        return len(self.edges)

    @property
    def is_unweighted(self):
        return all(w == 1.0 for _, _, w in self.edges)

    def degrees(self):
        deg = [0] * self.n
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbors(self):
        adj = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for a in adj:
            a.sort()
        return adj

    def edge_set(self):
        return {(min(u, v), max(u, v)) for u, v, _ in self.edges}


def path_graph(n):
    return Graph(n, tuple((i, i + 1, 1) for i in range(n - 1)))


def cycle_graph(n):
    if n < 3:
        raise PreconditionError("a cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n, 1) for i in range(n)))


def complete_graph(n):
    return Graph(n, tuple((i, j, 1) for i in range(n) for j in range(i + 1, n)))


def star_graph(leaves):
    """Star K_{1,leaves} with the center at vertex 0."""
    return Graph(leaves + 1, tuple((0, i, 1) for i in range(1, leaves + 1)))


def complete_bipartite_graph(a, b):
    return Graph(a + b, tuple((i, a + j, 1) for i in range(a) for j in range(b)))


def as_sym(M, name="M", tol=1e-12):
    """Return ``M`` as a float symmetric ndarray, raising if it is not symmetric."""
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise PreconditionError(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A))))
    if np.max(np.abs(A - A.T)) > tol * scale:
        raise PreconditionError(f"{name} is not symmetric")
    return (A + A.T) / 2


def adjacency(G: Graph) -> np.ndarray:
    M = np.zeros((G.n, G.n))
    for u, v, w in G.edges:
        M[u, v] = M[v, u] = w
    return M


def laplacian(G: Graph) -> np.ndarray:
    if any(w < 0 for _, _, w in G.edges):
        warnings.warn("Laplacian of a graph with negative weights is not PSD", stacklevel=2)
    A = adjacency(G)
    return np.diag(A.sum(axis=1)) - A


def frobenius_norm(M) -> float:
    M = np.asarray(M, dtype=float)
    return float(np.sqrt(np.sum(M * M)))


def trace_inner(A, B) -> float:
    """Trace inner product ``tr(A^T B)``."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise PreconditionError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return float(np.sum(A * B))


def check_permutation(perm, n=None):
    perm = np.asarray(perm, dtype=int)
    if perm.ndim != 1 or (n is not None and len(perm) != n):
        raise PreconditionError(f"permutation must have length {n}")
    if sorted(perm.tolist()) != list(range(len(perm))):
        raise PreconditionError(f"not a permutation of 0..{len(perm) - 1}: {perm.tolist()}")
    return perm


def permute(M, perm) -> np.ndarray:
    """Relabel rows and columns: ``result[perm[i], perm[j]] == M[i, j]``."""
    M = np.asarray(M)
    perm = check_permutation(perm, M.shape[0])
    R = np.empty_like(M)
    R[np.ix_(perm, perm)] = M
    return R


def _off_norm(A):
    # summed directly; subtracting the diagonal mass from the total cancels badly
    off = A - np.diag(np.diag(A))
    return float(np.sqrt(np.sum(off * off)))


def eig_sym(M, sweep_tol=DEFAULT_SWEEP_TOL, max_sweeps=MAX_SWEEPS):
    """Full eigensystem of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigvals, Q)`` with eigenvalues in descending order and
    ``M ~= Q @ diag(eigvals) @ Q.T``.  Each column of ``Q`` is signed so that
    its largest-magnitude entry (first one on ties) is positive.
    """
    if sweep_tol <= 0:
        raise PreconditionError("sweep_tol must be positive")
    A = as_sym(M).copy()
    n = A.shape[0]
    Q = np.eye(n)
    target = sweep_tol * frobenius_norm(A)
    for sweep in range(max_sweeps + 1):
        off = _off_norm(A)
        if off <= target:
            break
        if sweep == max_sweeps:
            raise ConvergenceError(max_sweeps, off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                cp = A[:, p].copy()
                cq = A[:, q]
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp = A[p, :].copy()
                rq = A[q, :]
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
                vp = Q[:, p].copy()
                vq = Q[:, q]
                Q[:, p] = c * vp - s * vq
                Q[:, q] = s * vp + c * vq
    vals = np.diag(A).copy()
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    Q = Q[:, order]
    return vals, _fix_signs(Q)


def _fix_signs(Q):
    Q = Q.copy()
    for j in range(Q.shape[1]):
        i = int(np.argmax(np.abs(Q[:, j])))
        if Q[i, j] < 0:
            Q[:, j] = -Q[:, j]
    return Q


@dataclass(frozen=True)
class SpectralDecomp:
    """Truncated eigendecomposition ``M ~= U diag(eigvals) U^T``."""

    n: int
    k: int
    eigvals: np.ndarray
    U: np.ndarray
    rank_tol: float

    def reconstruct(self):
        return (self.U * self.eigvals) @ self.U.T


def spectral_decompose(M, rank_tol=DEFAULT_RANK_TOL, sweep_tol=DEFAULT_SWEEP_TOL):
    """Keep the eigenpairs with ``|lambda| > rank_tol * max|lambda|``."""
    if not 0 < rank_tol < 1:
        raise PreconditionError("rank_tol must lie in (0, 1)")
    vals, Q = eig_sym(M, sweep_tol)
    top = float(np.max(np.abs(vals))) if len(vals) else 0.0
    keep = np.abs(vals) > rank_tol * top
    return SpectralDecomp(
        n=len(vals), k=int(keep.sum()), eigvals=vals[keep], U=Q[:, keep], rank_tol=rank_tol
    )


@dataclass(frozen=True)
class Clustering:
    """Rows of a spectral embedding grouped into identical-coordinate blocks."""

    p: int
    representatives: np.ndarray
    blocks: tuple
    multiplicities: tuple
    labels: tuple
    diagnostics: tuple = field(default=())


def clustering_of(D: SpectralDecomp, cluster_tol=DEFAULT_CLUSTER_TOL) -> Clustering:
    """Group rows of ``D.U`` that agree within ``cluster_tol`` (max-norm).

    The tolerance is relative to the largest row norm.  Rows are scanned in
    order and join the first representative they match, so representatives
    are the first row of each block.  Distances within a factor of 10 of the
    threshold are reported in ``diagnostics``.
    """
    if cluster_tol < 0:
        raise PreconditionError("cluster_tol must be nonnegative")
    return cluster_rows(D.U, cluster_tol)


def cluster_rows(U, cluster_tol=DEFAULT_CLUSTER_TOL) -> Clustering:
    U = np.asarray(U, dtype=float).reshape(len(U), -1)
    n = U.shape[0]
    scale = float(np.max(np.linalg.norm(U, axis=1))) if U.size else 0.0
    tol = cluster_tol * scale
    reps = []
    labels = []
    notes = []
    for i in range(n):
        dists = [float(np.max(np.abs(U[i] - U[r]))) if U.shape[1] else 0.0 for r in reps]
        match = next((j for j, d in enumerate(dists) if d <= tol), None)
        if match is None:
            near = [d for d in dists if d <= 10 * tol]
            if near:
                notes.append(f"row {i} starts a new cluster at distance {min(near):.3e} (tol {tol:.3e})")
            reps.append(i)
            labels.append(len(reps) - 1)
        else:
            if dists[match] > tol / 10:
                notes.append(f"row {i} joins cluster {match} at distance {dists[match]:.3e} (tol {tol:.3e})")
            labels.append(match)
    blocks = tuple(tuple(i for i in range(n) if labels[i] == l) for l in range(len(reps)))
    return Clustering(
        p=len(reps),
        representatives=U[reps].copy(),
        blocks=blocks,
        multiplicities=tuple(len(b) for b in blocks),
        labels=tuple(labels),
        diagnostics=tuple(notes),
    )


def min_eigenvalue(M):
    vals, _ = eig_sym(M)
    return float(vals[-1])
