"""Command-line front end.

Subcommands: ``dist``, ``spectral``, ``gen`` and ``verify``.  Exit codes:
0 success, 1 verification failed, 2 unparsable input, 3 precondition
violated, 4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import __version__
from .errors import InstanceTooLargeError, ParseError, PreconditionError
from .exact import MAX_MSIM_N, brute_force_msim
from .fileio import parse_any
from .generators import (
    gen_hamcycle,
    gen_laplacian_pair,
    gen_partition_matrices,
    gen_partition_psd,
    gen_three_partition_trees,
    load_instance,
    random_cubic_graph,
    save_instance,
    verify_instance,
)
from .matrixcore import (
    DEFAULT_CLUSTER_TOL,
    DEFAULT_RANK_TOL,
    Graph,
    adjacency,
    clustering_of,
    laplacian,
    spectral_decompose,
)
from .pathtree import path_tree_distance, path_vertex_order, root_tree
from .solver import DEFAULT_BUDGET, solve_msim

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3, 4

# JSON emitted by ``dist --json``
REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "inputs", "method", "n", "result", "tolerances"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "string", "pattern": "^sha256:[0-9a-f]{64}$"},
        "method": {"enum": ["exact", "qvp", "pathtree"]},
        "n": {"type": "integer", "minimum": 1},
        "result": {
            "type": "object",
            "required": ["dist", "dist_sq", "perm"],
            "properties": {
                "dist": {"type": "number", "minimum": 0},
                "dist_sq": {"type": "number", "minimum": 0},
                "perm": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "mismatches": {"type": ["integer", "null"]},
                "objective": {"type": ["number", "null"]},
                "k": {"type": ["integer", "null"]},
                "p": {"type": ["integer", "null"]},
            },
        },
        "tolerances": {
            "type": "object",
            "required": ["rank_tol", "cluster_tol", "budget"],
        },
        "timings": {"type": "object"},
    },
}


def _fmt9(x):
    return f"{x:.9f}"


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return text, parse_any(text)


def _as_matrix(obj, use_laplacian):
    if isinstance(obj, Graph):
        return laplacian(obj) if use_laplacian else adjacency(obj)
    return obj


def _pathtree(left, right):
    if not (isinstance(left, Graph) and isinstance(right, Graph)):
        raise PreconditionError("pathtree needs two graph files")
    if left.n != right.n:
        raise PreconditionError(f"graphs differ in order: {left.n} vs {right.n}")
    n = left.n
    order = path_vertex_order(left)
    if order is not None and root_tree_ok(right):
        res = path_tree_distance(n, right)
        perm = [0] * n
        for i, v in enumerate(order):
            perm[v] = res.perm[i]
        res.perm = tuple(perm)
        return res
    order = path_vertex_order(right)
    if order is not None and root_tree_ok(left):
        res = path_tree_distance(n, left)
        perm = [0] * n
        for i, v in enumerate(order):
            perm[res.perm[i]] = v
        res.perm = tuple(perm)
        return res
    raise PreconditionError("pathtree needs one path and one tree")


def root_tree_ok(G):
    try:
        root_tree(G)
    except PreconditionError:
        return False
    return G.is_unweighted


def cmd_dist(args, out):
    started = time.perf_counter()
    t1, left = _read(args.left)
    t2, right = _read(args.right)
    digest = hashlib.sha256((t1 + "\0" + t2).encode("utf-8")).hexdigest()
    if args.method == "pathtree":
        res = _pathtree(left, right)
        n = left.n
        k = p = None
    else:
        A = _as_matrix(left, args.laplacian)
        B = _as_matrix(right, args.laplacian)
        if A.shape != B.shape:
            raise PreconditionError(f"dimension mismatch: {A.shape[0]} vs {B.shape[0]}")
        n = A.shape[0]
        if args.method == "exact":
            if n > MAX_MSIM_N:
                raise PreconditionError(f"exact method needs n <= {MAX_MSIM_N}, got n={n}")
            res = brute_force_msim(A, B)
            k = p = None
        else:
            res = solve_msim(A, B, rank_tol=args.rank_tol, cluster_tol=args.cluster_tol,
                             budget=args.budget, threads=args.threads)
            k, p = res.extra["k"], res.extra["p"]
    report = {
        "command": _echo(args),
        "inputs": "sha256:" + digest,
        "method": args.method,
        "n": n,
        "result": {
            "dist": round(res.dist, 9),
            "dist_sq": round(res.dist_sq, 9),
            "perm": list(res.perm),
            "mismatches": res.mismatches,
            "objective": None if res.objective is None else round(res.objective, 9),
            "k": k,
            "p": p,
        },
        "tolerances": {"rank_tol": args.rank_tol, "cluster_tol": args.cluster_tol,
                       "budget": args.budget},
    }
    if args.timings:
        report["timings"] = {"total_s": time.perf_counter() - started}
    if args.json:
        out.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        r = report["result"]
        lines = [
            f"command: {report['command']}",
            f"inputs: {report['inputs']}",
            f"method: {args.method}",
            f"n: {n}",
            f"dist: {_fmt9(res.dist)}",
            f"dist_sq: {_fmt9(res.dist_sq)}",
            "perm: " + " ".join(str(i) for i in res.perm),
        ]
        if r["mismatches"] is not None:
            lines.append(f"mismatches: {r['mismatches']}")
        if r["objective"] is not None:
            lines.append(f"objective: {_fmt9(res.objective)}")
        if k is not None:
            lines.append(f"k: {k}")
            lines.append(f"p: {p}")
        lines.append(f"rank_tol: {args.rank_tol!r}")
        lines.append(f"cluster_tol: {args.cluster_tol!r}")
        lines.append(f"budget: {args.budget}")
        if args.timings:
            lines.append(f"time_s: {report['timings']['total_s']:.6f}")
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


def _echo(args):
    """Canonical command line; execution-only flags (threads, timings) are left out."""
    parts = ["dist", args.left, args.right, "--method", args.method]
    if args.laplacian:
        parts.append("--laplacian")
    if args.method == "qvp":
        parts += ["--rank-tol", repr(args.rank_tol), "--cluster-tol", repr(args.cluster_tol),
                  "--budget", str(args.budget)]
    if args.json:
        parts.append("--json")
    return " ".join(parts)


def cmd_spectral(args, out):
    _, obj = _read(args.file)
    M = _as_matrix(obj, args.laplacian)
    D = spectral_decompose(M, args.rank_tol)
    cl = clustering_of(D, args.cluster_tol)
    info = {
        "n": D.n,
        "k": D.k,
        "eigenvalues": [round(float(x), 9) for x in D.eigvals],
        "p": cl.p,
        "multiplicities": list(cl.multiplicities),
        "blocks": [list(b) for b in cl.blocks],
        "diagnostics": list(cl.diagnostics),
        "rank_tol": args.rank_tol,
        "cluster_tol": args.cluster_tol,
    }
    if args.json:
        out.write(json.dumps(info, indent=2, sort_keys=True) + "\n")
    else:
        out.write(f"n: {D.n}\nk: {D.k}\n")
        out.write("eigenvalues: " + " ".join(_fmt9(x) for x in D.eigvals) + "\n")
        out.write(f"p: {cl.p}\n")
        out.write("multiplicities: " + " ".join(str(m) for m in cl.multiplicities) + "\n")
        for note in cl.diagnostics:
            out.write(f"warning: {note}\n")
    return EXIT_OK


def _ints(text):
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def _cubic_input(args):
    if args.input:
        _, G = _read(args.input)
        if not isinstance(G, Graph):
            raise PreconditionError("--input must be a graph file")
        return G
    if args.n is None:
        raise PreconditionError("give --input FILE or --n N")
    return random_cubic_graph(args.n, seed=args.seed)


def cmd_gen(args, out):
    kind = args.kind
    cycle = _ints(args.cycle) if args.cycle else None
    if kind == "hamcycle":
        inst = gen_hamcycle(_cubic_input(args), cycle, seed=args.seed)
    elif kind == "laplacian_pair":
        inst = gen_laplacian_pair(_cubic_input(args), cycle, seed=args.seed)
    elif kind in ("partition", "partition_psd"):
        if not args.a:
            raise PreconditionError("--a is required")
        split = _ints(args.split) if args.split else None
        fn = gen_partition_matrices if kind == "partition" else gen_partition_psd
        inst = fn(_ints(args.a), split)
    else:
        if not args.a or args.m is None or args.A is None:
            raise PreconditionError("--m, --a and --A are required")
        triples = None
        if args.triples:
            triples = [_ints(t) for t in args.triples.split(";")]
        inst = gen_three_partition_trees(args.m, _ints(args.a), args.A, triples, forest=args.forest)
    if inst.seed is None:
        inst.seed = args.seed
    save_instance(inst, args.out)
    out.write(f"kind: {inst.kind}\nout: {args.out}\n")
    out.write("claimed: " + json.dumps(inst.claimed, sort_keys=True) + "\n")
    out.write("certificate: " + ("none" if inst.certificate is None else "yes") + "\n")
    return EXIT_OK


def cmd_verify(args, out):
    inst = load_instance(args.dir)
    checks = verify_instance(inst)
    ok = all(c[1] for c in checks)
    if args.json:
        payload = {"kind": inst.kind, "pass": ok,
                   "checks": [{"check": c, "ok": bool(g), "detail": d} for c, g, d in checks]}
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        out.write(f"kind: {inst.kind}\n")
        for name, good, detail in checks:
            out.write(f"{'PASS' if good else 'FAIL'} {name}: {detail}\n")
        out.write("verify: " + ("pass" if ok else "fail") + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser():
    ap = argparse.ArgumentParser(prog="frobsim", description="Frobenius distance between graphs and matrices")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def tol_flags(p):
        p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)
        p.add_argument("--cluster-tol", type=float, default=DEFAULT_CLUSTER_TOL)
        p.add_argument("--laplacian", action="store_true", help="use Laplacians of graph inputs")
        p.add_argument("--json", action="store_true")

    d = sub.add_parser("dist", help="distance between two inputs")
    d.add_argument("left")
    d.add_argument("right")
    d.add_argument("--method", choices=["exact", "qvp", "pathtree"], default="qvp")
    d.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    d.add_argument("--threads", type=int, default=1)
    d.add_argument("--timings", action="store_true", help="append wall-clock time (not reproducible)")
    tol_flags(d)
    d.set_defaults(func=cmd_dist)

    s = sub.add_parser("spectral", help="rank, eigenvalues and clustering number")
    s.add_argument("file")
    tol_flags(s)
    s.set_defaults(func=cmd_spectral)

    g = sub.add_parser("gen", help="write a planted hard instance")
    g.add_argument("kind", choices=["hamcycle", "threepart", "partition", "partition_psd", "laplacian_pair"])
    g.add_argument("--input", help="3-regular graph file (hamcycle, laplacian_pair)")
    g.add_argument("--n", type=int, help="size of a random 3-regular graph")
    g.add_argument("--cycle", help="Hamiltonian cycle certificate, e.g. 0,1,2,3")
    g.add_argument("--a", help="comma-separated integers")
    g.add_argument("--split", help="balanced half of the indices (partition kinds)")
    g.add_argument("--m", type=int)
    g.add_argument("--A", type=int)
    g.add_argument("--triples", help="three-partition certificate, e.g. '0,1,2;3,4,5'")
    g.add_argument("--forest", action="store_true")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="recheck a generated instance")
    v.add_argument("dir")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InstanceTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
