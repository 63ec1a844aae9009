import json

import pytest

from causalweft.clocks import Action
from causalweft.cli import main
from causalweft.diagram import (
    Atom,
    Diagram,
    Fork,
    Join,
    Leaf,
    Par,
    PermStep,
    Prod,
    Tensor,
    Tick,
    TickRef,
    perm_swap,
)
from causalweft.lamport import execution_to_obj
from causalweft.serialize import diagram_to_json

from conftest import build_message_flow, build_two_tick
from test_lamport import PING, make_execution

A, B = Atom("A"), Atom("B")


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


@pytest.fixture
def flow_file(tmp_path):
    return write(tmp_path, "flow.json", diagram_to_json(*build_message_flow()))


def swapped_diamond_doc():
    """A diamond beside a spectator lane, then a swap, so the diamond's
    start at L reaches the final R two ways."""
    d = Diagram(
        Tensor(Leaf(Prod(A, A)), Leaf(B)),
        (
            Par(Fork(A, A), Tick(B, B)),
            Par(Par(Tick(A, A), Tick(A, A)), Tick(B, B)),
            Par(Join(A, A), Tick(B, B)),
            PermStep(perm_swap(Leaf(Prod(A, A)), Leaf(B))),
        ),
    )
    lab = {
        TickRef(0, "R"): Action("p9", "p9"),
        TickRef(1, "LL"): Action("p1", "p1"),
        TickRef(1, "LR"): Action("p2", "p2"),
        TickRef(1, "R"): Action("p9", "p9"),
        TickRef(2, "R"): Action("p9", "p9"),
    }
    return diagram_to_json(d, lab)


# ---------------------------------------------------------------------------
# validate

def test_validate_prints_the_final_config(flow_file, capsys):
    assert main(["validate", flow_file]) == 0
    assert capsys.readouterr().out == "([(t1' x t2)] * [t3])\n"


def test_validate_json(flow_file, capsys):
    assert main(["validate", flow_file, "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj == {
        "ok": True,
        "faults": [],
        "final": "([(t1' x t2)] * [t3])",
    }


def test_validate_reports_boundary_faults(tmp_path, capsys):
    bad = Diagram(Leaf(A), (Tick(A, A), Tick(B, B)))
    path = write(tmp_path, "bad.json", diagram_to_json(bad))
    assert main(["validate", path]) == 1
    out = capsys.readouterr().out
    assert "step 1" in out
    assert main(["validate", path, "--json"]) == 1


def test_validate_rejects_malformed_json(tmp_path, capsys):
    path = write(tmp_path, "broken.json", "{not json")
    assert main(["validate", path]) == 2
    assert "error:" in capsys.readouterr().err


def test_missing_file_is_an_input_error(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "absent.json")]) == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# render

def test_render_dot_to_stdout(flow_file, capsys):
    assert main(["render", flow_file]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph diagram {")
    assert '[label="p1->p2"]' in out


def test_render_ascii_to_file(flow_file, tmp_path, capsys):
    target = tmp_path / "flow.txt"
    assert main(["render", flow_file, "--format", "ascii", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text(encoding="utf-8").startswith("---- cut 0 ----")


def test_render_refuses_invalid_diagrams(tmp_path, capsys):
    bad = Diagram(Leaf(A), (Tick(B, B),))
    path = write(tmp_path, "bad.json", diagram_to_json(bad))
    assert main(["render", path]) == 2
    assert "does not typecheck" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# paths

def test_paths_enumerates_witnesses(tmp_path, capsys):
    path = write(tmp_path, "swapped.json", swapped_diamond_doc())
    assert main(["paths", path, "--from", "0:L", "--to", "end:R"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert lines[0] == "0:L -> 1:LL -> 2:LL -> 3:L -> 4:R"
    assert lines[1] == "0:L -> 1:LR -> 2:LR -> 3:L -> 4:R"

    assert main(["paths", path, "--from", "0:L", "--to", "N:R", "--limit", "1"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 1

    assert main(["paths", path, "--from", "0:R", "--to", "4:L", "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj == [
        [
            {"cut": 0, "site": "R"},
            {"cut": 1, "site": "R"},
            {"cut": 2, "site": "R"},
            {"cut": 3, "site": "R"},
            {"cut": 4, "site": "L"},
        ]
    ]


def test_paths_between_unrelated_events_prints_nothing(tmp_path, capsys):
    path = write(tmp_path, "swapped.json", swapped_diamond_doc())
    assert main(["paths", path, "--from", "0:L", "--to", "1:R"]) == 0
    assert capsys.readouterr().out == ""


def test_paths_rejects_bad_coordinates(flow_file, capsys):
    for src in ("0L", "q:L", "0:X"):
        assert main(["paths", flow_file, "--from", src, "--to", "N:R"]) == 2
        assert "error:" in capsys.readouterr().err
    # coordinates outside the diagram
    assert main(["paths", flow_file, "--from", "0:LL", "--to", "N:R"]) == 2


# ---------------------------------------------------------------------------
# timestamps

def test_timestamps_text_lists_every_event(flow_file, capsys):
    assert main(["timestamps", flow_file, "--clock", "scalar"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 10
    assert '3:L  {"*":1}' in lines
    assert '3:R  {}' in lines


def test_timestamps_json(flow_file, capsys):
    assert main(["timestamps", flow_file, "--clock", "rst", "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["clock"] == "rst"
    assert len(obj["events"]) == 10
    final_left = [e for e in obj["events"] if e["cut"] == 3 and e["site"] == "L"]
    assert final_left == [{"cut": 3, "site": "L", "stamp": {"p1->p2": 1}}]


def test_timestamps_start_from_a_valuation_file(tmp_path, capsys):
    doc = write(tmp_path, "two.json", diagram_to_json(*build_two_tick()))
    val = write(tmp_path, "val.json", json.dumps({".": {"*": 3}}))
    assert main(["timestamps", doc, "--clock", "scalar", "--valuation", val, "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    stamps = {(e["cut"], e["site"]): e["stamp"] for e in obj["events"]}
    assert stamps == {(0, ""): {"*": 3}, (1, ""): {"*": 4}, (2, ""): {"*": 5}}


def test_timestamps_need_action_labels(tmp_path, capsys):
    d, _ = build_two_tick()
    lab = {TickRef(0, ""): "checkpoint", TickRef(1, ""): Action("p1", "p1")}
    path = write(tmp_path, "strlab.json", diagram_to_json(d, lab))
    assert main(["timestamps", path, "--clock", "scalar"]) == 2
    assert "not an action" in capsys.readouterr().err


def test_timestamps_reject_bad_valuation_files(tmp_path, flow_file, capsys):
    val = write(tmp_path, "val.json", "[1, 2]")
    assert main(["timestamps", flow_file, "--clock", "scalar", "--valuation", val]) == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# checks

def test_check_clock_passes_on_generated_diagrams(tmp_path, capsys):
    doc = str(tmp_path / "gen.json")
    assert main(["gen", "--seed", "5", "--out", doc]) == 0
    for clock in ("scalar", "vector", "rst", "wb"):
        assert main(["check-clock", doc, "--clock", clock]) == 0
        out = capsys.readouterr().out
        assert "0 violations" in out


def test_check_clock_json_report(flow_file, capsys):
    assert main(["check-clock", flow_file, "--clock", "wb", "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["check"] == "clock-condition"
    assert obj["clock"] == "wb"
    assert obj["violations"] == []
    assert obj["checked_pairs"] > 0


def test_check_order_text(flow_file, capsys):
    assert main(["check-order", flow_file]) == 0
    out = capsys.readouterr().out
    assert "order laws hold" in out
    assert out.startswith("10 events")


def test_laws_text(capsys):
    assert main(["laws", "--clock", "vector", "--samples", "500"]) == 0
    assert "0 law failures" in capsys.readouterr().out


def test_laws_json(capsys):
    assert main(["laws", "--clock", "wb", "--samples", "200", "--json"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["clock"] == "wb"
    assert obj["samples"] == 200
    assert obj["failures"] == []


# ---------------------------------------------------------------------------
# gen

def test_gen_is_deterministic(capsys):
    assert main(["gen", "--seed", "11"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "--seed", "11"]) == 0
    assert capsys.readouterr().out == first
    assert main(["gen", "--seed", "12"]) == 0
    assert capsys.readouterr().out != first


def test_gen_output_validates(tmp_path, capsys):
    doc = str(tmp_path / "gen.json")
    assert main(["gen", "--seed", "3", "--max-steps", "5", "--max-sites", "4", "--out", doc]) == 0
    assert main(["validate", doc]) == 0
    capsys.readouterr()


def test_gen_rejects_bad_params(capsys):
    assert main(["gen", "--seed", "1", "--max-sites", "0"]) == 2
    assert "error:" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# import-execution

def test_import_execution(tmp_path, capsys):
    path = write(tmp_path, "ping.json", json.dumps(execution_to_obj(PING)))
    assert main(["import-execution", path]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc["tick_index"]) == {"a1", "a2"}
    assert set(doc["tick_index"]["a1"]) == {"step", "path"}

    out = str(tmp_path / "compiled.json")
    assert main(["import-execution", path, "--out", out]) == 0
    assert main(["validate", out]) == 0
    capsys.readouterr()


def test_import_execution_rejects_cycles(tmp_path, capsys):
    cyclic = make_execution(
        {"p1": ("a1", "a4"), "p2": ("a2", "a3")},
        messages=[("a4", "a2"), ("a3", "a1")],
    )
    path = write(tmp_path, "cyclic.json", json.dumps(execution_to_obj(cyclic)))
    assert main(["import-execution", path]) == 2
    assert "happens before itself" in capsys.readouterr().err


def test_import_execution_rejects_invalid_executions(tmp_path, capsys):
    obj = {
        "processes": {"p1": ["a1"], "p2": ["a1"]},
        "messages": [],
        "actions": {"a1": {"actor": "p1", "target": "p1"}},
    }
    path = write(tmp_path, "dup.json", json.dumps(obj))
    assert main(["import-execution", path]) == 2
    assert "invalid execution" in capsys.readouterr().err


def test_subcommand_is_required():
    with pytest.raises(SystemExit):
        main([])
