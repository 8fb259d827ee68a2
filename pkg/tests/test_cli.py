import json

import pytest

from assurkit import corpus
from assurkit.cli import main
from assurkit.errors import UnknownInstance
from assurkit.report import analyze, expected_view


@pytest.fixture
def emitted(tmp_path):
    def _emit(name):
        graph_path, side_path = corpus.emit(name, tmp_path)
        return str(graph_path), json.loads(side_path.read_text())
    return _emit


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_corpus_list(capsys):
    code, out = run(capsys, "corpus", "list")
    assert code == 0
    assert len(out.strip().splitlines()) >= 9


def test_unknown_instance(capsys, tmp_path):
    with pytest.raises(UnknownInstance):
        corpus.get("nope")
    code, _ = run(capsys, "corpus", "emit", "nope", "--out", str(tmp_path))
    assert code == 1


@pytest.mark.parametrize("name", corpus.names())
def test_sidecar_reproduced(name, emitted, capsys):
    path, side = emitted(name)
    assert side["format"] == "assur-kit/1"
    code, out = run(capsys, "analyze", path, "--json")
    report = json.loads(out)
    assert code == 0 and report["problems"] == []
    view = expected_view(report)
    assert view == {k: side["expected"][k] for k in view}


def test_sidecar_extras():
    r = analyze(corpus.load("branching_four"))
    assert len(r["decomposition"]["linear_extensions"]) == corpus.get("branching_four").expected["linear_extensions"]
    r = analyze(corpus.load("banana_decomposable"))
    bad = [c["inner"] for c in r["components"] if not c["isostatic"]]
    assert bad == corpus.get("banana_decomposable").expected["bad_components"]


def test_analyze_examples(emitted, capsys):
    code, out = run(capsys, "analyze", emitted("dyad2")[0], "--json")
    r = json.loads(out)
    assert r["rank"]["isostatic"] and len(r["components"]) == 1 and r["assur"]["strongly_assur"]
    code, out = run(capsys, "analyze", emitted("stacked_dyads")[0], "--json")
    r = json.loads(out)
    assert len(r["components"]) == 2
    assert r["decomposition"]["dag_edges"] == [{"above": 1, "below": 0, "multiplicity": 1}]
    code, out = run(capsys, "analyze", emitted("double_banana_pinned")[0], "--json")
    r = json.loads(out)
    assert r["counts"]["counts_pass"] and not r["rank"]["isostatic"]
    assert r["rank"]["rank_deficit"] == 1


def test_text_report(emitted, capsys):
    code, out = run(capsys, "analyze", emitted("hinge_weak3")[0])
    assert code == 0
    assert "driver t1g3: weak moves ['t1', 't2', 't3']" in out


def test_export_dot(emitted, capsys):
    code, out = run(capsys, "export-dot", emitted("dyad2")[0])
    assert code == 0 and out.count("[label=") == 1 and '"C0" -> "ground";' in out
    code, out = run(capsys, "export-dot", emitted("stacked_dyads")[0])
    assert out.count("[label=") == 2 and '"C1" -> "C0";' in out
    code, out = run(capsys, "export-dot", emitted("chain_three")[0], "--full")
    assert out.count('"C') >= 3 and "cluster_2" in out


def test_round_trip_through_validate(emitted, capsys, tmp_path):
    path, _ = emitted("branching_four")
    out_path = tmp_path / "again.json"
    assert main(["validate", path, "--out", str(out_path)]) == 0
    assert out_path.read_bytes() == open(path, "rb").read()


def test_exit_codes_for_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["analyze", str(bad)]) == 1
    pinpin = tmp_path / "pp.json"
    pinpin.write_text(json.dumps({"dimension": 2, "inner": ["v"], "pinned": ["p", "q"],
                                  "edges": [["v", "p"], ["v", "q"], ["p", "q"]]}))
    assert main(["analyze", str(pinpin)]) == 1
    assert main(["check", str(pinpin), "--drop-pin-pin"]) == 0
    assert main(["analyze", str(pinpin), "--dimension", "3"]) == 1


def test_check_and_drivers(emitted, capsys):
    path = emitted("hinge_weak3")[0]
    code, out = run(capsys, "check", path, "--assur")
    assert code == 0 and json.loads(out)["assur"]
    code, out = run(capsys, "check", path, "--strong")
    assert code == 1 and json.loads(out)["strongly_assur"] is False
    code, out = run(capsys, "drivers", path)
    classes = {c["edge"]: c["kind"] for c in json.loads(out)["classes"]}
    assert classes["t1g3"] == "weak"
    code, out = run(capsys, "vertex-removal", emitted("banana_vertex_removal")[0], "--vertex", "E")
    assert json.loads(out)["moving"] == ["B", "C", "D"]


def test_drive_command(emitted, capsys):
    path = emitted("stacked_dyads")[0]
    code, out = run(capsys, "drive", path, "--edge", "v1p1", "--rate", "1/2", "--mode", "exact")
    r = json.loads(out)
    assert code == 0 and r["discrepancy"] == 0 and r["rate"] == "1/2"
    code, out = run(capsys, "drive", path, "--edge", "v1p1")
    assert code == 0 and json.loads(out)["discrepancy"] <= 1e-9
    code, _ = run(capsys, "drive", path, "--edge", "v2p3")
    assert code == 1


def test_rank_and_matrix_dump(emitted, capsys, tmp_path):
    path = emitted("chain_three")[0]
    csv_path = tmp_path / "m.csv"
    code, out = run(capsys, "rank", path, "--dump-matrix", str(csv_path), "--permuted", "--mode", "exact")
    r = json.loads(out)
    assert code == 0 and r["isostatic"] and r["block_form"]["ok"]
    assert abs(int(r["block_form"]["determinant"])) == abs(int(r["block_form"]["block_product"]))
    assert csv_path.read_text().splitlines()[0].startswith("edge,D.0,D.1")
    code, out = run(capsys, "rank", path, "--mode", "float")
    assert json.loads(out)["float_rank"] == 10


def test_nullspace_and_counts(emitted, capsys):
    code, out = run(capsys, "nullspace", emitted("double_banana_pinned")[0], "--mode", "exact")
    assert json.loads(out)["dimension"] == 1
    code, out = run(capsys, "check-counts", emitted("overcounted_k4")[0])
    assert code == 1 and len(json.loads(out)["subgraph_violations"]) == 1


def test_surgeries(emitted, capsys, tmp_path):
    path = emitted("dyad2")[0]
    out_path = tmp_path / "released.json"
    assert main(["release", path, "--pin", "p1", "--anchors", "q1", "q2", "--out", str(out_path)]) == 0
    g = json.loads(out_path.read_text())
    assert sorted(g["inner"]) == ["p1", "v"] and len(g["edges"]) == 4
    code, out = run(capsys, "repin", path, "--vertex", "v")
    assert json.loads(out)["edges"] == []
    assert main(["repin", path, "--vertex", "p1"]) == 1


def test_orient_infeasible(tmp_path, capsys):
    p = tmp_path / "over.json"
    p.write_text(json.dumps({"dimension": 2, "inner": ["v"], "pinned": ["a", "b", "c"],
                             "edges": [["v", "a"], ["v", "b"], ["v", "c"]]}))
    code, out = run(capsys, "orient", str(p))
    assert code == 1 and json.loads(out)["witness"] == ["v"]
