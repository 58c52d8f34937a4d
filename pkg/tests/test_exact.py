from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobsim.errors import InstanceTooLargeError, PreconditionError
from frobsim.exact import brute_force_msim, brute_force_qvp, mismatch_count, ordered_partitions, count_partitions
from frobsim.generators import partition_matrices
from frobsim.matrixcore import Graph, adjacency, complete_graph, cycle_graph, permute, trace_inner
from frobsim.qvp import QvpInstance, qvp_objective

from oracles import naive_msim, naive_qvp


def random_graph(r, n, prob=0.5):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if r.random() < prob])


def test_mismatch_examples():
    C4, K4 = cycle_graph(4), complete_graph(4)
    assert mismatch_count(C4, C4, range(4)) == 0
    assert {mismatch_count(C4, K4, p) for p in permutations(range(4))} == {2}


def test_mismatch_rejects_weighted_and_size():
    with pytest.raises(PreconditionError):
        mismatch_count(Graph(2, [(0, 1, 2.0)]), Graph(2, [(0, 1)]), [0, 1])
    with pytest.raises(PreconditionError):
        mismatch_count(cycle_graph(4), complete_graph(5), range(4))


def test_msim_examples(rng):
    A = rng.normal(size=(5, 5))
    A = A + A.T
    r = brute_force_msim(A, A)
    assert r.dist == 0 and r.perm == (0, 1, 2, 3, 4)
    r = brute_force_msim(adjacency(cycle_graph(4)), adjacency(complete_graph(4)))
    assert r.dist_sq == 4 and r.mismatches == 2
    assert r.dist == pytest.approx(2.0)
    _, _, C, B = partition_matrices([1, 1, 1, 1])
    best = min(-trace_inner(permute(C, p), B) for p in permutations(range(4)))
    assert best == 8


def test_msim_size_guard():
    with pytest.raises(InstanceTooLargeError):
        brute_force_msim(np.eye(11), np.eye(11))


def test_msim_matches_naive_oracle(rng):
    for _ in range(15):
        n = int(rng.integers(2, 6))
        A = rng.integers(-2, 3, size=(n, n)).astype(float)
        B = rng.integers(-2, 3, size=(n, n)).astype(float)
        A, B = A + A.T, B + B.T
        d2, arg = naive_msim(A, B)
        r = brute_force_msim(A, B)
        assert r.dist_sq == pytest.approx(d2, abs=1e-9)
        assert r.perm == arg


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**31 - 1))
def test_msim_symmetry_and_inner_identity(n, seed):
    r = np.random.default_rng(seed)
    A, B = r.normal(size=(n, n)), r.normal(size=(n, n))
    A, B = A + A.T, B + B.T
    ab, ba = brute_force_msim(A, B), brute_force_msim(B, A)
    assert ab.dist == pytest.approx(ba.dist, abs=1e-9)
    best_inner = max(trace_inner(permute(A, p), B) for p in permutations(range(n)))
    assert ab.dist_sq == pytest.approx(trace_inner(A, A) + trace_inner(B, B) - 2 * best_inner, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**31 - 1))
def test_claim1_integer_identity(n, seed):
    r = np.random.default_rng(seed)
    G, H = random_graph(r, n), random_graph(r, n)
    perm = r.permutation(n)
    D = permute(adjacency(G), perm).astype(np.int64) - adjacency(H).astype(np.int64)
    assert int(np.sum(D * D)) == 2 * mismatch_count(G, H, perm)


def test_ordered_partitions_lexicographic():
    parts = list(ordered_partitions(4, (2, 2)))
    assert len(parts) == 6 == count_partitions((2, 2))
    assert parts[0] == ((0, 1), (2, 3))
    assert parts == sorted(parts)


def test_qvp_examples(rng):
    q = QvpInstance(np.array([[-1.0], [-1.0], [1.0], [1.0]]), np.eye(2), [1.0], (2, 2))
    part, F = brute_force_qvp(q)
    assert part == ((0, 1), (2, 3)) and F == pytest.approx(8)
    W = rng.normal(size=(5, 2))
    q1 = QvpInstance(W, np.array([[2.0]]), [1.0, 3.0], (5,))
    part, F = brute_force_qvp(q1)
    s = W.sum(axis=0)
    assert part == ((0, 1, 2, 3, 4),)
    assert F == pytest.approx(2.0 * (s[0] ** 2 + 3 * s[1] ** 2))


def test_qvp_matches_naive_and_dominates_random(rng):
    from conftest import random_qvp

    for _ in range(15):
        n, k, p = int(rng.integers(3, 7)), int(rng.integers(1, 3)), int(rng.integers(1, 4))
        p = min(p, n)
        q = random_qvp(rng, n, k, p)
        part, F = brute_force_qvp(q)
        assert F == pytest.approx(naive_qvp(q.W, q.K, q.lam, q.cards), abs=1e-9)
        assert qvp_objective(q, part) == pytest.approx(F)
        feas = list(ordered_partitions(n, q.cards))
        other = feas[int(rng.integers(len(feas)))]
        assert qvp_objective(q, other) <= F + 1e-9


def test_qvp_cardinality_mismatch():
    with pytest.raises(PreconditionError):
        QvpInstance(np.zeros((3, 1)) + 1, np.eye(2), [1.0], (1, 1))
