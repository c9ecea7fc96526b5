"""Record HTTP exchanges for the workbench replay tests.

Runs the two reference sessions against the real server app and writes
the raw response bodies, so the frontend tests can assert the displayed
strings are the server payloads verbatim.
"""

import json
import pathlib

from fastapi.testclient import TestClient

from prefs.server import create_app

HERE = pathlib.Path(__file__).resolve().parent
FIXTURES = HERE.parent / "tests" / "fixtures"
PROBLEMS = HERE.parent.parent / "problems"


def record(client: TestClient, log: list, method: str, path: str, body=None):
    if method == "GET":
        res = client.get(path)
    else:
        res = client.post(path, json=body) if body is not None else client.post(path)
    log.append(
        {
            "method": method,
            "path": path,
            "body": body,
            "status": res.status_code,
            "text": res.text,
        }
    )
    return res


def empty_problem(doc: dict) -> dict:
    return {
        "states": doc["states"],
        "consequences": doc["consequences"],
        "preferences": [],
    }


def three_state_session() -> list:
    doc = json.loads((PROBLEMS / "three-state.json").read_text())
    client = TestClient(create_app())
    log: list = []
    res = record(client, log, "POST", "/session", empty_problem(doc))
    sid = res.json()["session_id"]
    for pref in doc["preferences"]:
        record(client, log, "POST", f"/session/{sid}/assert", pref)
    x5 = {
        "matrix": [
            ["1", "0", "0"],
            ["0", "0", "1"],
            ["0", "1", "0"],
        ]
    }
    record(
        client,
        log,
        "POST",
        f"/session/{sid}/query",
        {"kind": "bounds", "target": x5, "mode": "pairs"},
    )
    record(client, log, "GET", f"/session/{sid}/region")
    return log


def segment_session() -> list:
    doc = json.loads((PROBLEMS / "segment.json").read_text())
    client = TestClient(create_app())
    log: list = []
    res = record(client, log, "POST", "/session", empty_problem(doc))
    sid = res.json()["session_id"]
    for pref in doc["preferences"]:
        record(client, log, "POST", f"/session/{sid}/assert", pref)
    record(
        client,
        log,
        "POST",
        f"/session/{sid}/query",
        {"kind": "bounds", "target": {"const": doc["consequences"][-1]}, "mode": "pairs"},
    )
    record(client, log, "GET", f"/session/{sid}/region")
    return log


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "three-state-replay.json").write_text(
        json.dumps(three_state_session(), indent=2)
    )
    (FIXTURES / "segment-replay.json").write_text(
        json.dumps(segment_session(), indent=2)
    )
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
