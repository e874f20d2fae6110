import json
from pathlib import Path

import pytest

from newton_forest.errors import ParseError, TreeStructureError
from newton_forest.report import Analysis
from newton_forest.tree_io import (
    export_dot,
    fixture_T_A,
    fixture_T_B,
    fixture_T_C,
    fixture_T_D,
    fixture_corpus,
    parse,
    serialize,
)

FIXture_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def test_round_trip_is_identity_on_canonical_form():
    for name, tree in fixture_corpus().items():
        text = serialize(tree)
        again = parse(text)
        assert serialize(again) == text, name


def test_serialize_idempotent_T_D():
    t = fixture_T_D()
    assert serialize(parse(serialize(t))) == serialize(t)


def test_serialize_deterministic():
    a = serialize(fixture_T_C((1, 2, 3)))
    b = serialize(fixture_T_C((1, 2, 3)))
    assert a == b


def test_parse_rejects_non_integer_decoration():
    doc = json.loads(serialize(fixture_T_A()))
    doc["edges"][0]["q"][0] = 1.5
    with pytest.raises(ParseError, match="expected an integer"):
        parse(json.dumps(doc))


def test_parse_rejects_bool_decoration():
    doc = json.loads(serialize(fixture_T_A()))
    doc["edges"][0]["q"][0] = True
    with pytest.raises(ParseError, match="expected an integer"):
        parse(json.dumps(doc))


def test_parse_syntax_error_has_position():
    with pytest.raises(ParseError, match=r"line \d+ column \d+"):
        parse('{"root": "v0", ')


def test_parse_oversized_decoration():
    doc = json.loads(serialize(fixture_T_A()))
    doc["edges"][0]["q"][0] = 2**63
    with pytest.raises(ParseError, match="64-bit"):
        parse(json.dumps(doc))


def test_parse_forwards_semantic_errors():
    doc = json.loads(serialize(fixture_T_A()))
    doc["edges"] = doc["edges"][1:]
    with pytest.raises(TreeStructureError, match="disconnected"):
        parse(json.dumps(doc))


def test_parse_unknown_keys():
    doc = json.loads(serialize(fixture_T_A()))
    doc["extra"] = 1
    with pytest.raises(ParseError, match="unknown keys"):
        parse(json.dumps(doc))


def test_parse_T_C_1_2_3_decorations():
    t = fixture_T_C((1, 2, 3))
    assert t.edge_between("v0", "u1").q_near("u1") == -5
    assert t.edge_between("v0", "u2").q_near("u2") == -2
    assert t.edge_between("v0", "u3").q_near("u3") == -1
    from newton_forest.tree_model import validate_axioms

    assert validate_axioms(t) == []


def test_shipped_fixture_files_match_builders():
    for name, tree in fixture_corpus().items():
        path = FIXture_DIR / f"{name}.ntree"
        assert path.exists(), f"missing shipped fixture {name}"
        assert parse(path.read_text()) == tree
        assert path.read_text() == serialize(tree)


def test_dot_T_A_shape_counts():
    dot = export_dot(fixture_T_A())
    assert dot.count("style=filled") == 1  # one dicritical
    assert dot.count("shape=circle") == 2  # both vertices (one open, one filled)
    assert dot.count("arrowhead=normal") == 2  # two arrows


def test_dot_T_C_1_1_1_shape_counts():
    dot = export_dot(fixture_T_C((1, 1, 1)))
    assert dot.count("style=filled") == 3
    assert dot.count('label="(1)"') == 3
    assert dot.count('label="(0)"') == 3


def test_dot_with_report_labels():
    t = fixture_T_D()
    dot = export_dot(t, Analysis.build(t))
    assert "N=6" in dot and "dt=-5" in dot and "dt=1" in dot


def test_T_B_requires_coprime_parameters():
    with pytest.raises(ValueError):
        fixture_T_B(2, 4)


def test_T_C_requires_divisibility():
    with pytest.raises(ValueError):
        fixture_T_C((2, 3, 4))
