"""Exact orientation tests with symbolic perturbation, and candidate hyperplanes.

Coordinates are quantized once to integers so every sign is computed exactly.
Degenerate determinants are resolved by perturbing coordinate ``i`` of point
``j`` by a symbolic infinitesimal ``eps[i, j]``.  Variables are ranked
``eps[0,0], eps[0,1], ..., eps[0,n-1], eps[1,0], ..., eps[k-1,n-1]`` and a
variable of rank ``r`` stands for ``eps ** (2 ** r)``.  A monomial (a set of
variables) then has magnitude ``eps ** sum(2 ** r)``, so the dominant term of
the perturbed determinant is the nonzero monomial with the smallest binary
weight.  The constant monomial has weight zero and always comes first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .errors import PreconditionError

QUANT_BITS = 40


class Side(IntEnum):
    BELOW = -1
    MEMBER = 0
    ABOVE = 1


@dataclass(frozen=True)
class PointSet:
    """Points quantized to integers: ``coords[j][i] ~= W[j, i] * 2**scale_exp``."""

    coords: tuple
    scale_exp: int

    @classmethod
    def from_array(cls, W, bits=QUANT_BITS):
        W = np.asarray(W, dtype=float)
        if W.ndim == 1:
            W = W.reshape(-1, 1)
        top = float(np.max(np.abs(W))) if W.size else 0.0
        if top == 0.0:
            exp = 0
        else:
            exp = bits - math.frexp(top)[1]
        coords = tuple(tuple(int(round(math.ldexp(float(x), exp))) for x in row) for row in W)
        return cls(coords, exp)

    @property
    def n(self):
        return len(self.coords)

    @property
    def k(self):
        return len(self.coords[0]) if self.coords else 0

    def as_float(self):
        return np.array(self.coords, dtype=float).reshape(self.n, self.k) * 2.0 ** (-self.scale_exp)


def det_int(M):
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for c in range(n - 1):
        if A[c][c] == 0:
            swap = next((r for r in range(c + 1, n) if A[r][c] != 0), None)
            if swap is None:
                return 0
            A[c], A[swap] = A[swap], A[c]
            sign = -sign
        piv = A[c][c]
        for r in range(c + 1, n):
            for j in range(c + 1, n):
                A[r][j] = (A[r][j] * piv - A[r][c] * A[c][j]) // prev
        prev = piv
    return sign * A[n - 1][n - 1]


@lru_cache(maxsize=None)
def _monomial_shapes(k):
    """Every way of perturbing rows 0..k-1, one distinct column per perturbed row."""
    shapes = []
    for t in range(k + 1):
        for rows in combinations(range(k), t):
            for cols in permutations(range(k + 1), t):
                shapes.append(tuple(zip(rows, cols)))
    return tuple(shapes)


def _orientation_matrix(P: PointSet, cols):
    k = P.k
    M = [[P.coords[j][i] for j in cols] for i in range(k)]
    M.append([1] * (k + 1))
    return M


def sos_sign(P: PointSet, cols):
    """Sign of the perturbed determinant with columns ``cols`` (k+1 distinct point indices).

    The column order is used as given, so swapping two columns flips the sign.
    """
    k = P.k
    if len(cols) != k + 1:
        raise PreconditionError(f"need {k + 1} point indices, got {len(cols)}")
    if len(set(cols)) != len(cols):
        raise PreconditionError(f"point indices must be distinct: {tuple(cols)}")
    M = _orientation_matrix(P, cols)
    d = det_int(M)
    if d:
        return 1 if d > 0 else -1
    n = P.n

    def weight(shape):
        return sum(1 << (i * n + cols[c]) for i, c in shape)

    for shape in sorted(_monomial_shapes(k)[1:], key=weight):
        # coefficient of prod eps[i, cols[c]]: replace row i by the unit vector e_c
        R = [row[:] for row in M]
        for i, c in shape:
            R[i] = [0] * (k + 1)
            R[i][c] = 1
        d = det_int(R)
        if d:
            return 1 if d > 0 else -1
    raise AssertionError("perturbed determinant vanished identically")


def sos_orientation(P: PointSet, defs, query) -> Side:
    """Side of point ``query`` relative to the hyperplane through points ``defs``.

    ``defs`` are taken in increasing order; ``ABOVE`` means a positive
    perturbed orientation determinant.  Members of ``defs`` return ``MEMBER``.
    """
    defs = tuple(int(i) for i in defs)
    if len(set(defs)) != len(defs):
        raise PreconditionError(f"duplicate defining indices: {defs}")
    if len(defs) != P.k:
        raise PreconditionError(f"a hyperplane in R^{P.k} needs {P.k} points, got {len(defs)}")
    if not 0 <= query < P.n or any(not 0 <= i < P.n for i in defs):
        raise PreconditionError("point index out of range")
    if query in defs:
        return Side.MEMBER
    return Side(sos_sign(P, tuple(sorted(defs)) + (int(query),)))


class CandidateHyperplanes:
    """All k-subsets of ``range(n)`` in lexicographic order.

    When ``n < k`` no subset exists; the stream is empty and ``fallback`` is
    set so callers switch to exhaustive search.
    """

    def __init__(self, n, k):
        self.n = n
        self.k = k
        self.fallback = n < k

    def __iter__(self):
        if self.fallback:
            return iter(())
        return combinations(range(self.n), self.k)

    def __len__(self):
        return 0 if self.fallback else math.comb(self.n, self.k)


def enumerate_candidate_hyperplanes(n, k):
    return CandidateHyperplanes(n, k)


def side_table(P: PointSet, hyperplanes):
    """``table[h, i]`` = side (+1/-1/0) of point ``i`` w.r.t. hyperplane ``h``."""
    hyperplanes = list(hyperplanes)
    T = np.zeros((len(hyperplanes), P.n), dtype=np.int8)
    for h, defs in enumerate(hyperplanes):
        for i in range(P.n):
            T[h, i] = sos_orientation(P, defs, i)
    return T
