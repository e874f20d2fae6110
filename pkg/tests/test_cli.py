import json
from pathlib import Path

from newton_forest.cli import run

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_validate_ok(capsys):
    assert run(["validate", str(FIXTURES / "T_A.ntree")]) == 0
    assert "minimally complete" in capsys.readouterr().out


def test_validate_diagnostics_exit_1(tmp_path, capsys):
    doc = json.loads((FIXTURES / "T_A.ntree").read_text())
    for e in doc["edges"]:
        if sorted(e["ends"]) == ["u", "v0"]:
            e["q"] = [2, 0] if e["ends"][0] == "v0" else [0, 2]
    bad = tmp_path / "bad.ntree"
    bad.write_text(json.dumps(doc))
    assert run(["validate", str(bad)]) == 1
    assert "axiom 3" in capsys.readouterr().out


def test_usage_error_exit_2(capsys):
    assert run(["analyze"]) == 2
    capsys.readouterr()


def test_missing_file_exit_2(capsys):
    assert run(["validate", "no-such-file.ntree"]) == 2
    capsys.readouterr()


def test_analyze_json_T_D(capsys):
    assert run(["analyze", str(FIXTURES / "T_D.ntree"), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["global"]["delta_tilde_N"] == -4
    assert doc["characteristic"]["v0|{v0,w}"]["c"] == "3/2"
    assert doc["characteristic"]["w|{v0,w}"]["c"] == "6"
    assert doc["global"]["genus"] == "no genus interpretation"
    assert doc["structure"]["Omega"] == ["v0"]
    assert all(entry["passed"] for entry in doc["audit"])


def test_analyze_genus_marker(capsys):
    assert run(["analyze", str(FIXTURES / "T_C_1_1_1.ntree"), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["global"]["genus"] == 1
    assert doc["global"]["delta_tilde_N"] == 2


def test_analyze_rational_report_included(capsys):
    assert run(["analyze", str(FIXTURES / "T_B_2_3.ntree"), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rational_structure"]["recognized"] == "T_B(2,3)"


def test_analyze_byte_identical(capsys):
    run(["analyze", str(FIXTURES / "T_D.ntree"), "--format", "json"])
    first = capsys.readouterr().out
    run(["analyze", str(FIXTURES / "T_D.ntree"), "--format", "json"])
    assert capsys.readouterr().out == first
    run(["analyze", str(FIXTURES / "T_D.ntree"), "--format", "text"])
    text_a = capsys.readouterr().out
    run(["analyze", str(FIXTURES / "T_D.ntree"), "--format", "text"])
    assert capsys.readouterr().out == text_a


def test_analyze_not_minimally_complete_exit_1(tmp_path, capsys):
    doc = {
        "root": "v0",
        "cells": [
            {"id": "v0", "kind": "vertex"},
            {"id": "u", "kind": "vertex"},
            {"id": "t1", "kind": "arrow", "decoration": 1},
        ],
        "edges": [
            {"ends": ["u", "v0"], "q": [0, 1]},
            {"ends": ["t1", "u"], "q": [1, 1]},
        ],
    }
    f = tmp_path / "thin.ntree"
    f.write_text(json.dumps(doc))
    assert run(["analyze", str(f)]) == 1
    assert "minimally complete" in capsys.readouterr().err


def test_combs_T_D(capsys):
    assert run(["combs", str(FIXTURES / "T_D.ntree")]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["In"] == ["v0"]
    classes = doc["decompositions"]["v0"]["classes"]
    assert len(classes) == 1 and classes[0]["c_dot"] == 0


def test_combs_z_flag(capsys):
    assert run(["combs", str(FIXTURES / "T_D.ntree"), "--z", "v0"]) == 0
    capsys.readouterr()
    assert run(["combs", str(FIXTURES / "T_D.ntree"), "--z", "w"]) == 2
    assert "not an initial vertex" in capsys.readouterr().err


def test_audit_file(capsys):
    assert run(["audit", str(FIXTURES / "T_B_1_2.ntree")]) == 0
    out = capsys.readouterr().out
    assert "0 failures" in out


def test_audit_gen(capsys):
    assert run(["audit", "--gen", "12", "--seed", "3", "--max-cells", "40"]) == 0
    out = capsys.readouterr().out
    assert "12 trees audited, 0 failures" in out


def test_audit_gen_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("NEWTON_FOREST_THREADS", "3")
    assert run(["audit", "--gen", "6", "--seed", "0"]) == 0
    with_threads = capsys.readouterr().out
    monkeypatch.delenv("NEWTON_FOREST_THREADS")
    assert run(["audit", "--gen", "6", "--seed", "0"]) == 0
    assert capsys.readouterr().out == with_threads


def test_dot_output(capsys):
    assert run(["dot", str(FIXTURES / "T_A.ntree")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph") and out.count("style=filled") == 1
    assert run(["dot", str(FIXTURES / "T_A.ntree"), "--with-report"]) == 0
    assert "N=1" in capsys.readouterr().out


def test_gen_roundtrip(capsys):
    assert run(["gen", "--seed", "9", "--max-cells", "30"]) == 0
    text = capsys.readouterr().out
    from newton_forest.tree_io import parse
    from newton_forest.tree_model import validate_axioms

    tree = parse(text)
    assert validate_axioms(tree) == []
    assert len(tree.cells) <= 30


def test_gen_rational(capsys):
    assert run(["gen", "--seed", "4", "--rational"]) == 0
    from newton_forest.oracle_gen import oracle_delta_tilde_N
    from newton_forest.tree_io import parse

    tree = parse(capsys.readouterr().out)
    assert oracle_delta_tilde_N(tree) == 0
