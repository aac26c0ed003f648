import io
import json
import subprocess
import sys

import pytest

from burling_lab.cli import main
from burling_lab.families import build_necklace
from burling_lab.graph import complete_graph, cycle_graph, serialize_graph, to_graph6
from burling_lab.sweeps import k4_subdivision
from helpers import brute_tree_count, k5_subdivision


def run(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def test_check_exit_codes(write):
    code, out, _ = run(["check", write("k3.txt", serialize_graph(complete_graph(3)))])
    assert code == 1 and json.loads(out)["certificate"]["kind"] == "triangle"
    code, out, _ = run(["check", write("c5.txt", serialize_graph(cycle_graph(5)))])
    assert code == 0 and "tree" in json.loads(out)["certificate"]


def test_check_type_b_k5(write):
    g = k5_subdivision([0, 1, 2, 3, 4])
    code, out, _ = run(["check", "--format", "graph6", write("k5.g6", to_graph6(g) + "\n")])
    assert code == 1 and json.loads(out)["certificate"]["kind"] == "orientation-unsat"


def test_check_unknown_exit(write):
    path = write("g.txt", "n 6\n0 1\n0 3\n0 5\n1 2\n2 3\n3 4\n4 5\n")
    code, out, _ = run(["check", "--max-tree-nodes", "1", "--max-orient-edges", "1", path])
    assert code == 2 and json.loads(out)["verdict"] == "unknown"


def test_check_reads_stdin():
    code, out, _ = run(["check", "-"], stdin=serialize_graph(cycle_graph(4)))
    assert code == 0 and json.loads(out)["verdict"] == "member"


def test_check_batch_of_graph6_lines(write):
    lines = "".join(to_graph6(g) + "\n" for g in (cycle_graph(4), complete_graph(3), cycle_graph(5)))
    code, out, _ = run(["check", "--format", "graph6", write("many.g6", lines)])
    assert code == 1
    assert [d["verdict"] for d in json.loads(out)] == ["member", "non-member", "member"]


def test_check_json_input(write):
    doc = json.dumps({"n": 4, "edges": [[0, 1], [1, 2], [2, 3], [3, 0]]})
    code, out, _ = run(["check", "--format", "json", write("g.json", doc)])
    assert code == 0


def test_parse_error_exit(write):
    code, out, err = run(["check", write("bad.txt", "n 3\n0 1\n1 x\n")])
    assert code == 64
    doc = json.loads(out)
    assert doc["error"] == "parse" and doc["line"] == 3
    assert "bad.txt" in err


def test_usage_and_io_errors(tmp_path):
    assert run(["frobnicate"])[0] == 3
    assert run(["check"])[0] == 3
    assert run(["check", "--max-tree-nodes", "0", "x"])[0] == 3
    assert run(["verify"])[0] == 3
    code, out, _ = run(["check", str(tmp_path / "missing.txt")])
    assert code == 4 and json.loads(out)["error"] == "io"


def test_gen_counts():
    code, out, _ = run(["gen", "--max-nodes", "1", "--emit", "trees"])
    doc = json.loads(out)
    assert code == 0 and doc["manifest"]["count"] == 1 and len(doc["items"]) == 1
    code, out, _ = run(["gen", "--max-nodes", "4", "--emit", "derived"])
    assert json.loads(out)["manifest"]["count"] == sum(brute_tree_count(k) for k in range(1, 5))


def test_gen_cap():
    code, out, err = run(["gen", "--max-nodes", "50"])
    assert code == 5 and json.loads(out)["error"] == "cap" and "cap" in err


def test_gen_out_file(tmp_path):
    path = tmp_path / "trees.jsonl"
    code, out, _ = run(["gen", "--max-nodes", "3", "--out", str(path)])
    assert code == 0 and "items" not in json.loads(out)
    assert len(path.read_text().splitlines()) == 1 + 1 + 3


def test_identical_invocations_are_byte_identical(write):
    path = write("c6.txt", serialize_graph(cycle_graph(6)))
    assert run(["gen", "--max-nodes", "4", "--emit", "derived"]) == run(["gen", "--max-nodes", "4", "--emit", "derived"])
    assert run(["check", path]) == run(["check", path])
    assert run(["verify", "gallery", "--seed", "3"]) == run(["verify", "gallery", "--seed", "3"])


def test_classify(write):
    nk = write("nk.txt", serialize_graph(build_necklace([(4, 0, 2), (4, 0, 2)], [0, 1])))
    code, out, _ = run(["classify", "--family", "necklace", nk])
    doc = json.loads(out)
    assert code == 0 and doc["m"] == 2 and doc["burling"] is True and doc["clause"] == "beads share a vertex"
    k4 = write("k4.txt", serialize_graph(k4_subdivision((0, 0, 1, 1, 1, 0))))
    assert json.loads(run(["classify", "--family", "k4", k4])[1])["type"] == 3
    c6 = write("c6.txt", serialize_graph(cycle_graph(6)))
    assert run(["classify", "--family", "k5", c6])[:2] == (0, json.dumps({"family": "none"}, indent=2) + "\n")
    assert json.loads(run(["classify", "--family", "dumbbell", c6])[1]) == {"family": "none"}


def test_verify_suites():
    code, out, _ = run(["verify", "holes", "--max-nodes", "5"])
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["violations"] == 0
    code, out, _ = run(["verify", "necklace-table", "--max-vertices", "9"])
    assert code == 0 and json.loads(out)["pass"]
    assert run(["verify", "holes", "--max-nodes", "50"])[0] == 5


def test_verify_certificate_replay(write):
    c5 = write("c5.txt", serialize_graph(cycle_graph(5)))
    _, verdict, _ = run(["check", c5])
    cert = write("cert.json", verdict)
    code, out, _ = run(["verify", "--certificate", cert, "--graph", c5])
    assert code == 0 and json.loads(out) == {"kind": "verdict", "verdict": "member", "valid": True}
    c6 = write("c6.txt", serialize_graph(cycle_graph(6)))
    assert run(["verify", "--certificate", cert, "--graph", c6])[0] == 1
    witness = write("w.json", json.dumps(json.loads(verdict)["certificate"]))
    assert run(["verify", "--certificate", witness, "--graph", c5])[0] == 0
    tree = write("t.json", json.dumps(json.loads(verdict)["certificate"]["tree"]))
    assert json.loads(run(["verify", "--certificate", tree])[1])["kind"] == "tree"
    assert run(["verify", "--certificate", write("junk.json", "{")])[0] == 64
    assert run(["verify", "holes", "--certificate", cert])[0] == 3


def test_out_flag_copies_stdout(write, tmp_path):
    path = tmp_path / "v.json"
    code, out, _ = run(["check", "--out", str(path), write("c4.txt", serialize_graph(cycle_graph(4)))])
    assert code == 0 and path.read_text() == out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "burling_lab", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip().endswith("0.1.0")
