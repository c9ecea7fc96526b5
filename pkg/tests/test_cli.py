"""CLI exit codes and batch/REPL/HTTP payload parity."""

import json
import os

import pytest
from fastapi.testclient import TestClient

from prefs.cli import main
from prefs.problemfile import load_problem
from prefs.queries import canonical_json, run_query
from prefs.server import create_app
from prefs.session import Session

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
THREE_STATE = os.path.join(ROOT, "problems", "three-state.json")
SEGMENT = os.path.join(ROOT, "problems", "segment.json")
ANNIHILATED = os.path.join(ROOT, "problems", "segment-annihilated.json")

X5_JSON = json.dumps(
    {"matrix": [["1", "0", "0"], ["0", "0", "1"], ["0", "1", "0"]]}
)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_check_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "check", THREE_STATE)
    assert code == 0
    assert json.loads(out)["a5_coherent"] is True

    code, out, _ = run_cli(capsys, "check", ANNIHILATED)
    assert code == 1
    payload = json.loads(out)
    assert payload["a5_coherent"] is True and payload["pair_exists"] is False


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run_cli(capsys, "check", str(bad))
    assert code == 2
    assert "parse-error" in err


def test_bounds_modes(capsys):
    code, out, _ = run_cli(
        capsys, "bounds", THREE_STATE, "--target", X5_JSON, "--mode", "sdeu-a6"
    )
    assert code == 0
    assert json.loads(out)["lower"]["value"] == "1/2"

    code, out, _ = run_cli(
        capsys,
        "bounds",
        THREE_STATE,
        "--target",
        X5_JSON,
        "--mode",
        "a6star-iter",
        "--iterations",
        "1",
    )
    assert json.loads(out)["lower"]["value"] == "27/50"


def test_prob_and_shorthand(capsys):
    code, out, _ = run_cli(capsys, "prob", THREE_STATE, "--event", "s2")
    assert code == 0
    payload = json.loads(out)
    assert payload["lower"]["value"] == "1/10"
    assert payload["upper"]["value"] == "4/9"


def test_pair_exit_code(capsys):
    code, out, _ = run_cli(capsys, "pair", SEGMENT)
    assert code == 0
    code, out, _ = run_cli(capsys, "pair", ANNIHILATED)
    assert code == 1


def test_precluded_levels(capsys):
    code, out, _ = run_cli(
        capsys,
        "precluded",
        THREE_STATE,
        "--lhs",
        "chance:0.54",
        "--rhs",
        X5_JSON,
        "--level",
        "a6",
    )
    assert code == 0
    assert json.loads(out)["precluded"] is True


QUERIES = [
    {"kind": "prob", "event": ["s2"]},
    {"kind": "check"},
    {
        "kind": "bounds",
        "target": json.loads(X5_JSON),
        "mode": "sdeu-a6",
    },
]


@pytest.mark.parametrize("query", QUERIES, ids=["prob", "check", "bounds"])
def test_three_surface_parity(query, capsys):
    a = load_problem(THREE_STATE)
    batch = canonical_json(run_query(a, query))

    repl = canonical_json(Session(load_problem(THREE_STATE)).query(query))

    client = TestClient(create_app())
    doc = json.load(open(THREE_STATE))
    sid = client.post("/session", json=doc).json()["session_id"]
    http = client.post(f"/session/{sid}/query", json=query).text

    assert batch == repl == http


def test_session_rejects_and_rolls_back():
    s = Session(load_problem(SEGMENT))
    before = len(s.assessment.basis)
    out = s.assert_preference({"lhs": {"const": "c0"}, "rhs": {"const": "c1"}})
    assert out["accepted"] is False
    assert out["certificate"]
    assert len(s.assessment.basis) == before


def test_session_undo_restores_polytope():
    from prefs.representation import MODE_A6, build_dual

    s = Session(load_problem(SEGMENT))
    before = sorted(build_dual(s.assessment, MODE_A6).polytope.vertices())
    ok = s.assert_preference({"lhs": {"const": "c2"}, "rhs": {"chance": "3/20"}})
    assert ok["accepted"] is True
    s.undo()
    after = sorted(build_dual(s.assessment, MODE_A6).polytope.vertices())
    assert before == after


def test_export_import_roundtrip_query_identical():
    s = Session(load_problem(SEGMENT))
    s.assert_preference({"lhs": {"const": "c2"}, "rhs": {"chance": "3/20"}})
    exported = s.export_problem()
    from prefs.problemfile import parse_problem

    a2 = parse_problem(json.dumps(exported))
    q = {"kind": "pair"}
    assert canonical_json(run_query(s.assessment, q)) == canonical_json(
        run_query(a2, q)
    )


def test_region_endpoint_limits_and_shape():
    client = TestClient(create_app())
    doc = json.load(open(SEGMENT))
    sid = client.post("/session", json=doc).json()["session_id"]
    r = client.get(f"/session/{sid}/region")
    assert r.status_code == 200
    region = r.json()
    assert len(region["vertices"]) == 2
    assert len(region["pairs"]) == 2

    doc3 = json.load(open(THREE_STATE))
    sid3 = client.post("/session", json=doc3).json()["session_id"]
    r = client.get(f"/session/{sid3}/region")
    assert r.status_code == 409


def test_report_writes_outputs(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys, "report", SEGMENT, "--out", str(tmp_path / "rep")
    )
    assert code == 0
    payload = json.loads(out)
    for path in payload["outputs"].values():
        assert os.path.exists(path)
    assert "region_figure" in payload["outputs"]
