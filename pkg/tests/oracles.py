"""Independent reference implementations used only by the tests.

None of these share code with the package: they are slow, literal
transcriptions of the definitions.
"""

from itertools import combinations, permutations, product

import numpy as np
import sympy


def naive_msim(A, B):
    """(min dist_sq, lexicographically first minimizing perm) by plain loops."""
    n = len(A)
    best, arg = None, None
    for perm in permutations(range(n)):
        s = 0.0
        for i in range(n):
            for j in range(n):
                d = A[i][j] - B[perm[i]][perm[j]]
                s += d * d
        if best is None or s < best - 1e-12 * max(1.0, abs(best)):
            best, arg = s, perm
    return best, arg


def naive_qvp(W, K, lam, cards):
    """Maximum of F over ordered partitions, via label vectors."""
    W = np.asarray(W, dtype=float).reshape(len(W), -1)
    n, p = len(W), len(cards)
    best = None
    for labels in product(range(p), repeat=n):
        if [labels.count(l) for l in range(p)] != list(cards):
            continue
        sums = [sum((W[i] for i in range(n) if labels[i] == l), np.zeros(W.shape[1])) for l in range(p)]
        F = sum(K[l][m] * float(np.sum(np.asarray(lam) * sums[l] * sums[m]))
                for l in range(p) for m in range(p))
        best = F if best is None else max(best, F)
    return best


def max_path_system(n, edges):
    """Largest edge subset of a tree whose every vertex has degree <= 2."""
    best = 0
    for r in range(len(edges), 0, -1):
        for sub in combinations(edges, r):
            deg = [0] * n
            for u, v in sub:
                deg[u] += 1
                deg[v] += 1
            if max(deg) <= 2:
                return r
    return best


def sos_symbolic(points, cols):
    """Sign of the perturbed orientation determinant by full symbolic expansion.

    ``points`` are integer k-vectors; coordinate ``i`` of point ``j`` gets the
    infinitesimal ``e_i_j`` whose magnitude is eps ** (2 ** (i*n + j)).
    """
    n, k = len(points), len(points[0])
    eps = {(i, j): sympy.Symbol(f"e_{i}_{j}") for i in range(k) for j in range(n)}
    rows = [[points[j][i] + eps[i, j] for j in cols] for i in range(k)]
    rows.append([1] * (k + 1))
    det = sympy.expand(sympy.Matrix(rows).det())
    gens = [eps[i, j] for i in range(k) for j in cols]
    poly = sympy.Poly(det, *gens)
    best = None
    for monom, coeff in poly.terms():
        weight = sum(e * 2 ** (i * n + j) for e, (i, j) in zip(monom, [(i, j) for i in range(k) for j in cols]))
        if coeff != 0 and (best is None or weight < best[0]):
            best = (weight, coeff)
    return 1 if best[1] > 0 else -1
