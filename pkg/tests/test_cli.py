import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from hypersat.cli import GraphDocument, export_dot, run
from hypersat.grid import GridSpace
from hypersat.percolation import EdgeSubgraph
from hypersat.wsat import build_wsat_graph


def call(argv, stdin_text="", cache=None):
    out, err = io.StringIO(), io.StringIO()
    if cache is not None:
        argv = ["--cache-dir", str(cache)] + argv
    code = run(argv, out=out, err=err, stdin=io.StringIO(stdin_text))
    return code, out.getvalue(), err.getvalue()


def test_formula():
    assert call(["formula", "wsat", "-k", "2", "-r", "2", "-d", "3", "-m", "2"])[:2] == (0, "7\n")
    assert call(["formula", "cube", "-d", "3", "-m", "3"])[:2] == (0, "11\n")


def test_usage_errors():
    assert call([])[0] == 2
    assert call(["nonsense"])[0] == 2
    assert call(["formula", "wsat", "-k", "2", "-r", "3", "-d", "3", "-m", "2"])[0] == 2
    assert call(["check", "percolate"], "not json")[0] == 2


def test_cycle_tree_pipeline(tmp_path):
    code, doc, _ = call(["build", "cycle-tree", "-k", "3", "-d", "2", "-l", "2"])
    assert code == 0
    code, out, _ = call(["check", "percolate", "--family", "cycle:4"], doc, tmp_path)
    assert code == 0 and out.startswith("verified")
    cert = out.split("certificate: ")[1].strip()
    assert open(cert).read().startswith("# host 3 2 family cycle:4")


def test_empty_graph_fails():
    doc = GraphDocument(2, 3, []).to_json()
    code, out, _ = call(["check", "percolate", "--family", "subcube:2", "--cert", "/dev/null"], doc)
    assert code == 1 and out.startswith("not percolating")


GRID = [(k, r, d, m) for k in range(2, 5) for r in range(2, k + 1) for d in range(1, 4) for m in range(1, d + 1)]


@pytest.mark.parametrize("k,r,d,m", GRID[::3] + [(2, 2, 5, 3)])
def test_build_wsat_then_check(k, r, d, m, tmp_path):
    code, doc, _ = call(["build", "wsat", "-k", str(k), "-r", str(r), "-d", str(d), "-m", str(m)])
    assert code == 0
    assert call(["check", "percolate"], doc, tmp_path)[0] == 0


@pytest.mark.parametrize("k,d,l", [(2, 3, 3), (2, 4, 3), (4, 2, 2)])
def test_build_cycle_tree_then_check(k, d, l, tmp_path):
    code, doc, _ = call(["build", "cycle-tree", "-k", str(k), "-d", str(d), "-l", str(l)])
    assert call(["check", "percolate"], doc, tmp_path)[0] == 0


def test_build_sat_then_check(cache_dir):
    code, _, err = call(["build", "sat", "-d", "12", "-m", "2"], cache=cache_dir)
    assert code == 2 and "--seed" in err
    code, doc, _ = call(["build", "sat", "-d", "12", "-m", "2", "--seed", "0"], cache=cache_dir)
    assert code == 0 and json.loads(doc)["meta"]["census"]["A_1"] == 12
    assert call(["check", "qmfree", "-m", "2"], doc)[0] == 0
    assert call(["check", "saturated", "-m", "2"], doc)[0] == 1
    code, doc, _ = call(["build", "sat", "-d", "12", "-m", "2", "--seed", "0", "--complete"], cache=cache_dir)
    assert code == 0
    assert call(["check", "saturated", "-m", "2"], doc)[0] == 0


def test_cert_and_oracle():
    code, out, _ = call(["cert", "rank", "-k", "3", "-r", "2", "-d", "2", "-m", "2"])
    assert code == 0 and json.loads(out) == {"d": 2, "equal": True, "formula": 8, "k": 3, "m": 2,
                                             "r": 2, "rank": 8}
    code, out, _ = call(["cert", "copies", "-k", "2", "-r", "2", "-d", "3", "-m", "2"])
    assert code == 0 and len(json.loads(out)) == 6
    code, out, _ = call(["oracle", "wsat", "-k", "3", "-d", "2", "--family", "cycle:4"])
    assert code == 0 and json.loads(out)["value"] == 8
    code, out, _ = call(["oracle", "sat", "-d", "3", "-m", "2"])
    assert code == 0 and json.loads(out)["value"] == 8
    assert call(["oracle", "wsat", "-d", "4", "--family", "subcube:2"])[0] == 3


def test_coloring_and_hamming(tmp_path):
    code, out, _ = call(["coloring", "find", "-s", "4", "--seed", "2"], cache=tmp_path)
    assert code == 0
    assert call(["coloring", "verify", "-s", "4", "--seed", "2"], cache=tmp_path)[0] == 0
    assert call(["coloring", "verify", "-s", "5", "--seed", "2"], cache=tmp_path)[0] == 2
    (tmp_path / "bad.txt").write_text("s 2 seed 0\n0 1\n1 1\n2 1\n3 1\n")
    assert call(["coloring", "verify", "-s", "2", "--seed", "0", "--file", str(tmp_path / "bad.txt")])[0] == 1
    code, out, _ = call(["hamming", "-t", "3"], cache=tmp_path)
    assert code == 0 and "size=16" in out


@st.composite
def documents(draw):
    k = draw(st.integers(2, 4))
    d = draw(st.integers(1, 4))
    sp = GridSpace(k, d)
    edges = sorted(draw(st.sets(st.integers(0, sp.n_edges - 1))))
    meta = draw(st.dictionaries(st.text(min_size=1, max_size=5), st.integers() | st.text(max_size=5), max_size=3))
    return GraphDocument(k, d, edges, meta)


@settings(max_examples=100)
@given(documents())
def test_document_roundtrip(doc):
    text = doc.to_json()
    back = GraphDocument.from_json(text)
    assert back == doc and back.to_json() == text
    assert export_dot(back) == export_dot(doc)


def test_document_validation():
    with pytest.raises(ValueError):
        GraphDocument(2, 2, [1, 0])
    with pytest.raises(ValueError):
        GraphDocument(2, 2, [4])


def test_dot_examples():
    dot = export_dot(GraphDocument(2, 1, []))
    assert dot.count("label=") == 2 and "--" not in dot
    full = EdgeSubgraph.full(GridSpace.cube(2))
    dot = export_dot(GraphDocument.from_graph(full))
    assert dot.count("label=") == 4 and dot.count(" -- ") == 4
    assert '[label="(1,1)"]' in dot
    dot = export_dot(GraphDocument.from_graph(build_wsat_graph(2, 2, 3, 2)))
    assert dot.count("label=") == 8 and dot.count(" -- ") == 7


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hypersat", "formula", "wsat", "-d", "3", "-m", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "7\n"
