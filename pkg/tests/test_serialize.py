import json

import pytest

from causalweft.clocks import Action
from causalweft.diagram import (
    Atom,
    Diagram,
    Leaf,
    PermStep,
    Prod,
    Tensor,
    Tick,
    TickRef,
    perm_swap,
)
from causalweft.paths import PathWitness
from causalweft.serialize import (
    SchemaError,
    config_from_obj,
    config_to_obj,
    diagram_from_json,
    diagram_from_obj,
    diagram_hash,
    diagram_to_json,
    diagram_to_obj,
    step_from_obj,
    to_canonical_json,
    type_from_obj,
    type_to_obj,
    witness_from_obj,
    witness_to_obj,
)

A, B = Atom("A"), Atom("B")


# ---------------------------------------------------------------------------
# node round trips

def test_type_round_trip():
    ty = Prod(Prod(A, B), A)
    assert type_from_obj(type_to_obj(ty)) == ty
    assert type_to_obj(A) == {"atom": "A"}


def test_config_round_trip():
    cfg = Tensor(Leaf(A), Tensor(Leaf(Prod(A, B)), Leaf(B)))
    assert config_from_obj(config_to_obj(cfg)) == cfg


def test_bad_nodes_rejected():
    with pytest.raises(SchemaError):
        type_from_obj({"atom": "A", "extra": 1})
    with pytest.raises(SchemaError):
        type_from_obj({"molecule": "A"})
    with pytest.raises(SchemaError):
        type_from_obj({"prod": [{"atom": "A"}]})
    with pytest.raises(SchemaError):
        config_from_obj({"tensor": [{"leaf": {"atom": "A"}}]})
    with pytest.raises(SchemaError):
        config_from_obj("leaf")


# ---------------------------------------------------------------------------
# documents

def test_document_round_trip(message_flow):
    d, lab = message_flow
    text = diagram_to_json(d, lab)
    d2, lab2 = diagram_from_json(text)
    assert (d2, lab2) == (d, lab)
    assert diagram_to_json(d2, lab2) == text


def test_round_trip_is_bit_stable_on_the_corpus(small_corpus):
    for d, lab in small_corpus:
        text = diagram_to_json(d, lab)
        d2, lab2 = diagram_from_json(text)
        assert (d2, lab2) == (d, lab)
        assert diagram_to_json(d2, lab2) == text


def test_labels_without_target_and_plain_values():
    d = Diagram(Leaf(A), (Tick(A, A), Tick(A, A)))
    lab = {TickRef(0, ""): Action("p1"), TickRef(1, ""): "checkpoint"}
    d2, lab2 = diagram_from_json(diagram_to_json(d, lab))
    assert lab2[TickRef(0, "")] == Action("p1")
    assert lab2[TickRef(0, "")].target is None
    assert lab2[TickRef(1, "")] == "checkpoint"


def test_canonical_json_is_key_sorted():
    assert to_canonical_json({"b": 1, "a": 2}) == '{"a":2,"b":1}'


def test_diagram_hash_is_stable_and_discriminating(message_flow, diamond):
    d1, lab1 = message_flow
    d2, lab2 = diamond
    assert diagram_hash(d1, lab1) == diagram_hash(d1, lab1)
    assert diagram_hash(d1, lab1) != diagram_hash(d2, lab2)
    assert diagram_hash(d1, lab1) != diagram_hash(d1, {})


# ---------------------------------------------------------------------------
# perm steps read their source from context

def test_perm_round_trip_rebuilds_source_and_target(message_flow):
    d, lab = message_flow
    d2, _ = diagram_from_json(diagram_to_json(d, lab))
    assert d2.steps[1] == d.steps[1]
    assert isinstance(d2.steps[1], PermStep)


def test_perm_without_context_is_rejected():
    with pytest.raises(SchemaError, match="no known configuration"):
        step_from_obj({"perm": {"table": {"L": "R", "R": "L"}}}, None)


def test_perm_table_must_match_the_sites():
    doc = {
        "initial": config_to_obj(Tensor(Leaf(A), Leaf(B))),
        "steps": [{"perm": {"table": {"LL": "L", "R": "R"}}}],
        "labels": [],
    }
    with pytest.raises(SchemaError, match="do not match the sites"):
        diagram_from_obj(doc)


def test_perm_table_must_be_injective():
    doc = {
        "initial": config_to_obj(Tensor(Leaf(A), Leaf(A))),
        "steps": [{"perm": {"table": {"L": "L", "R": "L"}}}],
        "labels": [],
    }
    with pytest.raises(SchemaError, match="not injective"):
        diagram_from_obj(doc)


def test_perm_values_must_form_a_tree():
    doc = {
        "initial": config_to_obj(Tensor(Leaf(A), Leaf(A))),
        "steps": [{"perm": {"table": {"L": "L", "R": "RL"}}}],
        "labels": [],
    }
    with pytest.raises(SchemaError, match="do not form a tree"):
        diagram_from_obj(doc)


def test_perm_sites_must_be_lr_strings():
    doc = {
        "initial": config_to_obj(Tensor(Leaf(A), Leaf(A))),
        "steps": [{"perm": {"table": {"L": "L", "R": "x"}}}],
        "labels": [],
    }
    with pytest.raises(SchemaError, match="bad site"):
        diagram_from_obj(doc)


# ---------------------------------------------------------------------------
# malformed documents

def test_not_json_is_a_schema_error():
    with pytest.raises(SchemaError, match="not JSON"):
        diagram_from_json("{nope")


def test_missing_fields_are_rejected():
    with pytest.raises(SchemaError, match="lacks 'initial'"):
        diagram_from_obj({"steps": []})
    with pytest.raises(SchemaError, match="lacks 'steps'"):
        diagram_from_obj({"initial": {"leaf": {"atom": "A"}}})
    with pytest.raises(SchemaError):
        diagram_from_obj([])


def test_unknown_step_kind_is_rejected():
    doc = {
        "initial": {"leaf": {"atom": "A"}},
        "steps": [{"warp": {}}],
        "labels": [],
    }
    with pytest.raises(SchemaError, match="unknown step"):
        diagram_from_obj(doc)


def test_malformed_step_bodies_are_rejected():
    base = {"initial": {"leaf": {"atom": "A"}}, "labels": []}
    with pytest.raises(SchemaError, match="tick takes"):
        diagram_from_obj(dict(base, steps=[{"tick": {"in": {"atom": "A"}}}]))
    with pytest.raises(SchemaError, match="fork takes"):
        diagram_from_obj(dict(base, steps=[{"fork": {"l": {"atom": "A"}}}]))
    with pytest.raises(SchemaError, match="par takes"):
        diagram_from_obj(dict(base, steps=[{"par": [{"tick": {"in": {"atom": "A"}, "out": {"atom": "A"}}}]}]))


def test_duplicate_labels_are_rejected():
    d = Diagram(Leaf(A), (Tick(A, A),))
    doc = diagram_to_obj(d, {TickRef(0, ""): Action("p1")})
    doc["labels"].append(doc["labels"][0])
    with pytest.raises(SchemaError, match="duplicate label"):
        diagram_from_obj(doc)


def test_bad_label_entries_are_rejected():
    d = Diagram(Leaf(A), (Tick(A, A),))
    doc = diagram_to_obj(d, None)
    doc["labels"] = [{"step": 0}]
    with pytest.raises(SchemaError, match="bad label entry"):
        diagram_from_obj(doc)
    doc["labels"] = [{"step": "0", "path": "", "value": 1}]
    with pytest.raises(SchemaError, match="bad label position"):
        diagram_from_obj(doc)
    doc["labels"] = [{"step": 0, "path": "Q", "value": 1}]
    with pytest.raises(SchemaError, match="bad label position"):
        diagram_from_obj(doc)


def test_action_labels_reject_stray_fields():
    d = Diagram(Leaf(A), (Tick(A, A),))
    doc = diagram_to_obj(d, {TickRef(0, ""): Action("p1")})
    doc["labels"][0]["value"]["mood"] = "hasty"
    with pytest.raises(SchemaError, match="unknown action fields"):
        diagram_from_obj(doc)


# ---------------------------------------------------------------------------
# witnesses

def test_witness_round_trip():
    w = PathWitness(2, ("L", "R", ""))
    obj = witness_to_obj(w)
    assert obj == [
        {"cut": 2, "site": "L"},
        {"cut": 3, "site": "R"},
        {"cut": 4, "site": ""},
    ]
    assert witness_from_obj(obj) == w
    assert witness_from_obj(json.loads(json.dumps(obj))) == w


def test_witness_cuts_must_be_consecutive():
    with pytest.raises(SchemaError, match="consecutive"):
        witness_from_obj([{"cut": 0, "site": ""}, {"cut": 2, "site": ""}])
    with pytest.raises(SchemaError):
        witness_from_obj([])
    with pytest.raises(SchemaError):
        witness_from_obj([{"cut": 0}])
