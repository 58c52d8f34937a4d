"""Hard instance families with planted certificates.

Each generator turns an instance of a classical NP-hard problem (Hamiltonian
cycle in cubic graphs, Three-Partition, Partition) into a similarity
instance.  Certificates are optional inputs: the generator checks them and
records the value they realize, it never searches for one.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ParseError, PreconditionError
from .exact import mismatch_count, sq_distance
from .fileio import format_graph, format_matrix, parse_any
from .matrixcore import Graph, check_permutation, cycle_graph, laplacian, permute, trace_inner

KINDS = ("hamcycle", "threepart", "partition", "partition_psd", "laplacian_pair")


@dataclass
class PlantedInstance:
    """Two inputs plus a certificate and the value it is claimed to realize.

    ``claimed`` is a dict; its ``meaning`` key says whether the value is the
    optimum, a lower bound or an upper bound realized by the certificate.
    """

    kind: str
    left: object
    right: object
    certificate: list | None = None
    claimed: dict = field(default_factory=dict)
    seed: int | None = None
    params: dict = field(default_factory=dict)


def check_cubic(G: Graph):
    if not G.is_unweighted or any(d != 3 for d in G.degrees()):
        raise PreconditionError("graph must be simple and 3-regular")


def random_cubic_graph(n, seed=0, max_tries=10000):
    """Uniform-ish 3-regular graph from the pairing model, rejecting loops and multi-edges."""
    if n % 2 or n < 4:
        raise PreconditionError("a 3-regular graph needs an even n >= 4")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        stubs = rng.permutation(np.repeat(np.arange(n), 3))
        pairs = stubs.reshape(-1, 2)
        edges = {(int(min(a, b)), int(max(a, b))) for a, b in pairs}
        if len(edges) == len(pairs) and all(a != b for a, b in edges):
            return Graph(n, tuple(sorted(edges)))
    raise RuntimeError(f"pairing model failed after {max_tries} attempts")


def _check_ham_cycle(G: Graph, cycle):
    n = G.n
    cycle = [int(v) for v in cycle]
    check_permutation(cycle, n)
    E = G.edge_set()
    for i in range(n):
        a, b = cycle[i], cycle[(i + 1) % n]
        if (min(a, b), max(a, b)) not in E:
            raise PreconditionError(f"cycle step {a}-{b} is not an edge")
    return cycle


def gen_hamcycle(G3: Graph, cycle=None, seed=None) -> PlantedInstance:
    """``(C_n, G3)``: mismatches are at least ``n/2``, with equality iff G3 is Hamiltonian.

    With a Hamiltonian ``cycle`` (vertex sequence of G3), the certificate maps
    cycle vertex ``i`` to ``cycle[i]`` and realizes exactly ``n/2`` mismatches.
    """
    check_cubic(G3)
    n = G3.n
    C = cycle_graph(n)
    claimed = {"lower_bound_mismatches": n // 2, "meaning": "lower bound; attained iff Hamiltonian"}
    cert = None
    if cycle is not None:
        cert = _check_ham_cycle(G3, cycle)
        claimed.update(mismatches=n // 2, dist_sq=n, meaning="optimum realized by certificate")
    return PlantedInstance("hamcycle", C, G3, cert, claimed, seed, {"n": n})


def _three_partition_forests(m, a, A):
    """Vertex layout shared by the forest and tree variants.

    Returns (paths1, paths2): lists of vertex lists, each path listed from the
    end that attaches to the hub.
    """
    paths1, nxt = [], 0
    for ai in a:
        paths1.append(list(range(nxt, nxt + ai)))
        nxt += ai
    paths2, nxt = [], 0
    for _ in range(m):
        paths2.append(list(range(nxt, nxt + A)))
        nxt += A
    return paths1, paths2


def _check_triples(m, a, A, triples):
    triples = [tuple(int(i) for i in t) for t in triples]
    if len(triples) != m or any(len(t) != 3 for t in triples):
        raise PreconditionError(f"need {m} triples")
    if sorted(i for t in triples for i in t) != list(range(3 * m)):
        raise PreconditionError("triples must partition the indices 0..3m-1")
    for t in triples:
        if sum(a[i] for i in t) != A:
            raise PreconditionError(f"triple {t} does not sum to {A}")
    return triples


def gen_three_partition_trees(m, a, A, triples=None, forest=False) -> PlantedInstance:
    """Trees (or forests) whose similarity encodes a Three-Partition instance.

    Forests: ``F1`` is the disjoint union of paths on ``a_i`` vertices, ``F2``
    of ``m`` paths on ``A`` vertices.  Trees add a hub joined to one end of
    every path and ``8m`` pendant leaves on every original vertex.  A valid
    ``triples`` certificate realizes ``2m`` (forest) or ``4m`` (tree)
    mismatches.
    """
    a = [int(x) for x in a]
    if len(a) != 3 * m or m < 1:
        raise PreconditionError(f"need 3m = {3 * m} numbers, got {len(a)}")
    if sum(a) != m * A:
        raise PreconditionError(f"numbers sum to {sum(a)}, expected m*A = {m * A}")
    if any(not (A < 4 * x and 2 * x < A) for x in a):
        raise PreconditionError("every a_i must satisfy A/4 < a_i < A/2")
    paths1, paths2 = _three_partition_forests(m, a, A)
    base = m * A
    e1 = [(p[i], p[i + 1]) for p in paths1 for i in range(len(p) - 1)]
    e2 = [(p[i], p[i + 1]) for p in paths2 for i in range(len(p) - 1)]
    if forest:
        n = base
    else:
        hub = base
        e1 += [(hub, p[0]) for p in paths1]
        e2 += [(hub, p[0]) for p in paths2]
        leaf = base + 1
        for v in range(base):
            for _ in range(8 * m):
                e1.append((v, leaf))
                e2.append((v, leaf))
                leaf += 1
        n = leaf
    T1, T2 = Graph(n, tuple(e1)), Graph(n, tuple(e2))
    bound = 2 * m if forest else 4 * m
    claimed = {"max_mismatches_if_yes": bound, "meaning": "upper bound realized by certificate"}
    cert = None
    if triples is not None:
        triples = _check_triples(m, a, A, triples)
        perm = list(range(n))  # hub and pendant leaves keep their labels
        for t, trip in enumerate(triples):
            slot = paths2[t]
            pos = 0
            for i in trip:
                for v in paths1[i]:
                    perm[v] = slot[pos]
                    pos += 1
        if not forest:
            # leaves of original vertex v are base+1+8m*v+t in both trees; follow the parent
            for v in range(base):
                for t in range(8 * m):
                    perm[base + 1 + 8 * m * v + t] = base + 1 + 8 * m * perm[v] + t
        cert = perm
        claimed["certificate_mismatches"] = bound
    params = {"m": m, "a": a, "A": A, "forest": forest}
    return PlantedInstance("threepart", T1, T2, cert, claimed, None, params)


def partition_matrices(a):
    a = [int(x) for x in a]
    if len(a) % 2 or not a or any(x <= 0 for x in a):
        raise PreconditionError("need an even number of positive integers")
    if sum(a) % 2:
        raise PreconditionError(f"total {sum(a)} is odd")
    h = len(a) // 2
    u = np.array(a, dtype=float)
    C = np.outer(u, u)
    B = np.zeros((2 * h, 2 * h))
    B[:h, :h] = -1
    B[h:, h:] = -1
    return a, h, C, B


def _split_certificate(a, h, split):
    split = sorted(int(i) for i in split)
    if len(split) != h or len(set(split)) != h or any(not 0 <= i < 2 * h for i in split):
        raise PreconditionError(f"split must be {h} distinct indices")
    if 2 * sum(a[i] for i in split) != sum(a):
        raise PreconditionError("split does not balance the sums")
    rest = [i for i in range(2 * h) if i not in set(split)]
    perm = [0] * (2 * h)
    for pos, i in enumerate(split + rest):
        perm[i] = pos
    return perm


def gen_partition_matrices(a, split=None) -> PlantedInstance:
    """Rank-1 ``C = a a^T`` against the rank-2 block matrix ``B`` of ``-1`` blocks.

    ``min_pi -<C^pi, B> >= 2 A^2`` (``A`` = half the total), with equality iff
    a balanced split exists.  ``split`` lists the ``n`` indices of one half.
    """
    a, h, C, B = partition_matrices(a)
    half = sum(a) // 2
    claimed = {"min_neg_inner_lower_bound": 2 * half * half,
               "meaning": "lower bound on min -<C^pi,B>; attained iff a balanced split exists"}
    cert = None
    if split is not None:
        cert = _split_certificate(a, h, split)
        claimed.update(neg_inner=2 * half * half, meaning="optimum realized by certificate")
    return PlantedInstance("partition", C, B, cert, claimed, None, {"a": a})


def gen_partition_psd(a, split=None) -> PlantedInstance:
    """Same as :func:`gen_partition_matrices` with ``B' = B + n I`` (PSD).

    ``<C^pi, B'> = <C^pi, B> + n * sum(a_i^2)`` for every ``pi``.
    """
    a, h, C, B = partition_matrices(a)
    Bp = B + h * np.eye(2 * h)
    offset = h * sum(x * x for x in a)
    half = sum(a) // 2
    claimed = {"inner_offset": offset, "shift": h,
               "min_neg_inner_lower_bound": 2 * half * half - offset,
               "meaning": "per-permutation offset identity; bound shifts by the offset"}
    cert = None
    if split is not None:
        cert = _split_certificate(a, h, split)
        claimed.update(neg_inner=2 * half * half - offset, meaning="optimum realized by certificate")
    return PlantedInstance("partition_psd", C, Bp, cert, claimed, None, {"a": a})


def gen_laplacian_pair(G3: Graph, cycle=None, seed=None) -> PlantedInstance:
    """Laplacians of ``C_n`` and a cubic ``G3``; squared distances exceed the adjacency ones by ``n``."""
    check_cubic(G3)
    n = G3.n
    claimed = {"offset": n, "meaning": "||L_C^pi - L_G||^2 = ||A_C^pi - A_G||^2 + n for every pi"}
    cert = None
    if cycle is not None:
        cert = _check_ham_cycle(G3, cycle)
        claimed.update(dist_sq=2 * n, meaning="optimum realized by certificate")
    return PlantedInstance("laplacian_pair", laplacian(cycle_graph(n)), laplacian(G3), cert,
                           claimed, seed, {"n": n, "graph": format_graph(G3)})


def neg_inner(C, B, perm):
    return -trace_inner(permute(C, perm), B) + 0.0


def certificate_value(inst: PlantedInstance):
    """Recompute what the certificate realizes (``None`` without certificate)."""
    if inst.certificate is None:
        return None
    perm = inst.certificate
    if inst.kind in ("hamcycle", "threepart"):
        return {"mismatches": mismatch_count(inst.left, inst.right, perm)}
    if inst.kind in ("partition", "partition_psd"):
        return {"neg_inner": neg_inner(inst.left, inst.right, perm)}
    if inst.kind == "laplacian_pair":
        return {"dist_sq": sq_distance(inst.left, inst.right, perm)}
    raise PreconditionError(f"unknown kind {inst.kind!r}")


# serialization -------------------------------------------------------------

def _fmt(obj):
    return format_graph(obj) if isinstance(obj, Graph) else format_matrix(obj)


def save_instance(inst: PlantedInstance, out_dir):
    """Write ``left.txt``, ``right.txt`` and the ``instance.json`` sidecar."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "left.txt"), "w", encoding="utf-8") as fh:
        fh.write(_fmt(inst.left))
    with open(os.path.join(out_dir, "right.txt"), "w", encoding="utf-8") as fh:
        fh.write(_fmt(inst.right))
    side = {
        "kind": inst.kind,
        "seed": inst.seed,
        "claimed": inst.claimed,
        "certificate": inst.certificate,
        "params": inst.params,
        "files": {"left": "left.txt", "right": "right.txt"},
    }
    with open(os.path.join(out_dir, "instance.json"), "w", encoding="utf-8") as fh:
        json.dump(side, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_instance(in_dir) -> PlantedInstance:
    try:
        with open(os.path.join(in_dir, "instance.json"), encoding="utf-8") as fh:
            side = json.load(fh)
        files = side.get("files", {"left": "left.txt", "right": "right.txt"})
        with open(os.path.join(in_dir, files["left"]), encoding="utf-8") as fh:
            left = parse_any(fh.read())
        with open(os.path.join(in_dir, files["right"]), encoding="utf-8") as fh:
            right = parse_any(fh.read())
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise ParseError(f"cannot load instance from {in_dir}: {exc}") from None
    if side.get("kind") not in KINDS:
        raise ParseError(f"unknown instance kind {side.get('kind')!r}")
    return PlantedInstance(side["kind"], left, right, side.get("certificate"),
                           side.get("claimed", {}), side.get("seed"), side.get("params", {}))


def as_dict(inst: PlantedInstance):
    d = asdict(inst)
    d.pop("left")
    d.pop("right")
    return d


# verification --------------------------------------------------------------

VERIFY_MAX_N = 8


def _perms_for_identity(n, seed=0, samples=200):
    from itertools import permutations

    if n <= VERIFY_MAX_N:
        yield from permutations(range(n))
        return
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        yield tuple(int(x) for x in rng.permutation(n))


def verify_instance(inst: PlantedInstance):
    """Recompute certificates and identities; returns ``[(check, ok, detail), ...]``."""
    from .exact import MAX_MSIM_N, brute_force_msim
    from .matrixcore import adjacency, eig_sym

    out = []
    claimed = inst.claimed
    got = certificate_value(inst)
    if inst.kind in ("hamcycle", "threepart"):
        n = inst.left.n
        if got is not None:
            want = claimed.get("mismatches", claimed.get("certificate_mismatches"))
            out.append(("certificate mismatches", got["mismatches"] == want,
                        f"certificate mismatches {got['mismatches']} (claimed {want})"))
        if inst.kind == "hamcycle":
            bound = claimed["lower_bound_mismatches"]
            if n <= MAX_MSIM_N:
                witness = brute_force_msim(adjacency(inst.left), adjacency(inst.right))
                best = witness.mismatches
                if got is None:
                    tag = "Hamiltonian" if best == bound else "not Hamiltonian"
                    out.append(("certificate mismatches", best >= bound,
                                f"certificate mismatches {best} (brute-force witness, {tag})"))
                ok = best >= bound and (got is None or best == bound)
                out.append(("min mismatches", ok, f"min mismatches {best} (lower bound {bound})"))
            rng = np.random.default_rng(inst.seed or 0)
            low = min(mismatch_count(inst.left, inst.right, rng.permutation(n)) for _ in range(50))
            out.append(("sampled lower bound", low >= bound, f"sampled min mismatches {low} >= {bound}"))
        elif n <= MAX_MSIM_N:
            best = brute_force_msim(adjacency(inst.left), adjacency(inst.right)).mismatches
            bound = claimed["max_mismatches_if_yes"]
            ok = got is None or best <= bound
            out.append(("min mismatches", ok, f"min mismatches {best} (certificate bound {bound})"))
    elif inst.kind in ("partition", "partition_psd"):
        C, B = np.asarray(inst.left), np.asarray(inst.right)
        n = C.shape[0]
        if got is not None:
            out.append(("certificate value", got["neg_inner"] == claimed["neg_inner"],
                        f"certificate -<C^pi,B> {got['neg_inner']:g} (claimed {claimed['neg_inner']:g})"))
        bound = claimed["min_neg_inner_lower_bound"]
        if n <= MAX_MSIM_N:
            best = neg_inner(C, B, brute_force_msim(C, B).perm)
            ok = best >= bound and (got is None or best == bound)
            out.append(("min value", ok, f"min value {best:g} (lower bound {bound})"))
        if inst.kind == "partition_psd":
            h = claimed["shift"]
            B0 = B - h * np.eye(n)
            off = claimed["inner_offset"]
            ok = all(trace_inner(permute(C, p), B) == trace_inner(permute(C, p), B0) + off
                     for p in _perms_for_identity(n, inst.seed or 0))
            out.append(("offset identity", ok, f"<C^pi,B'> = <C^pi,B> + {off}"))
            mn = float(eig_sym(B)[0][-1])
            out.append(("psd", mn >= -1e-9, f"min eigenvalue of B' {mn:.3g}"))
    elif inst.kind == "laplacian_pair":
        L1, L2 = np.asarray(inst.left), np.asarray(inst.right)
        n = L1.shape[0]
        A1, A2 = np.diag(np.diag(L1)) - L1, np.diag(np.diag(L2)) - L2
        ok = all(sq_distance(L1, L2, p) == sq_distance(A1, A2, p) + n
                 for p in _perms_for_identity(n, inst.seed or 0))
        out.append(("offset identity", ok, f"||L1^pi-L2||^2 = ||A1^pi-A2||^2 + {n}"))
        mn = min(float(eig_sym(L1)[0][-1]), float(eig_sym(L2)[0][-1]))
        out.append(("psd", mn >= -1e-9, f"min Laplacian eigenvalue {mn:.3g}"))
        if got is not None:
            out.append(("certificate dist_sq", got["dist_sq"] == claimed["dist_sq"],
                        f"certificate dist_sq {got['dist_sq']:g} (claimed {claimed['dist_sq']})"))
        if n <= MAX_MSIM_N:
            lap = brute_force_msim(L1, L2).dist_sq
            adj = brute_force_msim(A1, A2).dist_sq
            out.append(("optimum offset", lap == adj + n,
                        f"Laplacian dist_sq {lap:g} = adjacency dist_sq {adj:g} + {n}"))
    return out
