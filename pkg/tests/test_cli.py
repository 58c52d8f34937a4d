import io
import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from frobsim.cli import REPORT_SCHEMA, main
from frobsim.exact import mismatch_count
from frobsim.fileio import format_graph, format_matrix, parse_any
from frobsim.matrixcore import Graph, complete_graph, cycle_graph, star_graph


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(format_graph(obj) if isinstance(obj, Graph) else format_matrix(obj))
        return str(p)

    r = np.random.default_rng(5)
    U = r.normal(size=(6, 2))
    V = r.normal(size=(3, 2))[[0, 0, 1, 1, 2, 2]]
    return {
        "c4": write("c4.txt", cycle_graph(4)),
        "k4": write("k4.txt", complete_graph(4)),
        "star": write("star13.txt", star_graph(3)),
        "p4": write("p4.txt", Graph(4, [(2, 0), (0, 3), (3, 1)])),
        "a": write("a.txt", U @ U.T),
        "b": write("b.txt", V @ np.diag([2.0, 1.0]) @ V.T),
        "indef": write("indef.txt", np.diag([1.0, -1.0, 0.0, 0.0])),
        "big": write("big.txt", (lambda X: X @ X.T)(r.normal(size=(14, 14)))),
        "bad": str(tmp_path / "bad.txt"),
        "dir": tmp_path,
    }


def field(text, name):
    for line in text.splitlines():
        if line.startswith(name + ": "):
            return line.split(": ", 1)[1]
    raise KeyError(name)


def test_dist_exact_examples(files):
    code, out = run("dist", files["c4"], files["c4"], "--method", "exact")
    assert code == 0 and field(out, "dist") == "0.000000000"
    code, out = run("dist", files["c4"], files["k4"], "--method", "exact")
    assert field(out, "dist_sq") == "4.000000000"
    assert field(out, "mismatches") == "2"
    assert len(field(out, "perm").split()) == 4


def test_qvp_matches_exact(files):
    _, exact = run("dist", files["a"], files["b"], "--method", "exact")
    code, qvp = run("dist", files["a"], files["b"], "--method", "qvp")
    assert code == 0
    assert abs(float(field(exact, "dist")) - float(field(qvp, "dist"))) <= 1e-6
    assert field(qvp, "p") == "3" and field(qvp, "k") == "2"


def test_pathtree_both_orders(files):
    for left, right in ((files["p4"], files["star"]), (files["star"], files["p4"])):
        code, out = run("dist", left, right, "--method", "pathtree")
        _, ref = run("dist", left, right, "--method", "exact")
        assert code == 0 and field(out, "dist_sq") == field(ref, "dist_sq") == "4.000000000"
        assert field(out, "mismatches") == "2"
        # the printed witness realizes the printed value
        perm = [int(x) for x in field(out, "perm").split()]
        G, H = (parse_any(open(f).read()) for f in (left, right))
        assert 2 * mismatch_count(G, H, perm) == 4


def test_json_schema_and_consistency(files):
    code, text = run("dist", files["a"], files["b"], "--json")
    report = json.loads(text)
    jsonschema.validate(report, REPORT_SCHEMA)
    _, plain = run("dist", files["a"], files["b"])
    assert f"{report['result']['dist']:.9f}" == field(plain, "dist")
    assert " ".join(map(str, report["result"]["perm"])) == field(plain, "perm")
    assert report["tolerances"]["rank_tol"] == 1e-9


def test_exit_codes(files):
    open(files["bad"], "w").write("2\n1 2\n")
    assert run("dist", files["bad"], files["c4"])[0] == 2
    assert run("dist", files["c4"], str(files["dir"] / "missing.txt"))[0] == 2
    assert run("dist", files["indef"], files["indef"])[0] == 3
    assert run("dist", files["big"], files["big"], "--method", "exact")[0] == 3
    assert run("dist", files["c4"], files["k4"], "--method", "pathtree")[0] == 3
    assert run("dist", files["c4"], files["star"], "--method", "exact")[0] == 0
    assert run("dist", files["big"], files["big"], "--budget", "1000")[0] == 4


def test_error_message_names_condition(files, capsys):
    run("dist", files["indef"], files["indef"])
    assert "positive semidefinite" in capsys.readouterr().err


def test_spectral_star(files):
    code, out = run("spectral", files["star"])
    assert code == 0 and field(out, "k") == "2" and field(out, "p") == "2"
    assert field(out, "multiplicities") == "1 3"


def test_gen_verify(files, tmp_path):
    d = str(tmp_path / "part")
    assert run("gen", "partition", "--a", "1,1,1,1", "--out", d)[0] == 0
    code, out = run("verify", d)
    assert code == 0 and "min value 8" in out
    d = str(tmp_path / "ham")
    assert run("gen", "hamcycle", "--input", files["k4"], "--out", d)[0] == 0
    code, out = run("verify", d)
    assert code == 0 and "certificate mismatches 2" in out
    d = str(tmp_path / "tp")
    assert run("gen", "threepart", "--m", "1", "--a", "2,2,2", "--A", "6", "--triples", "0,1,2", "--out", d)[0] == 0
    code, out = run("verify", d)
    assert code == 0 and "certificate mismatches 4" in out
    assert run("gen", "threepart", "--m", "1", "--a", "1,1,4", "--A", "6", "--out", d)[0] == 3


def test_verify_failure_exit(files, tmp_path):
    d = tmp_path / "ham"
    run("gen", "hamcycle", "--input", files["k4"], "--cycle", "0,1,2,3", "--out", str(d))
    side = json.loads((d / "instance.json").read_text())
    side["claimed"]["mismatches"] = 1
    (d / "instance.json").write_text(json.dumps(side))
    assert run("verify", str(d))[0] == 1


def test_gen_random_cubic_is_seeded(tmp_path):
    a, b = tmp_path / "x", tmp_path / "y"
    run("gen", "laplacian_pair", "--n", "8", "--seed", "7", "--out", str(a))
    run("gen", "laplacian_pair", "--n", "8", "--seed", "7", "--out", str(b))
    assert (a / "right.txt").read_text() == (b / "right.txt").read_text()
    assert json.loads((a / "instance.json").read_text())["seed"] == 7


def test_module_entry_point_byte_identical(files):
    cmd = [sys.executable, "-m", "frobsim", "dist", files["a"], files["b"]]
    one = subprocess.run(cmd, capture_output=True, check=True).stdout
    two = subprocess.run(cmd + ["--threads", "4"], capture_output=True, check=True).stdout
    assert one == two and b"dist: " in one
