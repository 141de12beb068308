"""The review service: blocking handshake, decisions, SSE, diffs, abort."""
from __future__ import annotations

import json
import time

from fastapi.testclient import TestClient

from corename.logcheck import validate_events
from corename.service import SessionService, create_app


def start_review(model, seed):
    service = SessionService(model, seed).start()
    service.wait_state()
    return service, TestClient(create_app(service))


def wait_pending(client, exclude=(), deadline=5.0) -> str:
    """Poll until a not-yet-decided suggestion is pending; return its id."""
    end = time.monotonic() + deadline
    while time.monotonic() < end:
        pending = client.get("/suggestions").json()["pending"]
        fresh = [sid for sid in pending if sid not in exclude]
        if fresh:
            return fresh[0]
        time.sleep(0.005)
    raise AssertionError("no pending suggestion before the deadline")


def drive(service, client, decisions) -> list[str]:
    """Post one decision per pending suggestion, in arrival order."""
    decided: list[str] = []
    for decision in decisions:
        sid = wait_pending(client, exclude=decided)
        response = client.post(
            f"/suggestions/{sid}/decision", json={"decision": decision}
        )
        assert response.status_code == 200, response.text
        assert response.json() == {
            "ok": True,
            "suggestion_id": sid,
            "decision": decision,
        }
        decided.append(sid)
    service.join(10)
    assert service.done
    return decided


def sse_groups(lines) -> list[dict]:
    groups: list[dict] = []
    current: dict = {}
    for line in lines:
        if line == "":
            if current:
                groups.append(current)
                current = {}
        elif not line.startswith(":"):
            key, _, value = line.partition(": ")
            current[key] = value
    if current:
        groups.append(current)
    return groups


def test_session_endpoint_reports_the_running_session(decoy_case, decoy_model):
    service, client = start_review(decoy_model, decoy_case.seed)
    try:
        wait_pending(client)
        body = client.get("/session").json()
        assert body["status"] == "running"
        assert body["seed"] == decoy_case.seed.as_dict()
        assert body["error"] is None
        assert body["applied"] >= 1  # the seed lands before any review
        scope = client.get("/scope").json()
        assert scope["declared"] is True
        assert scope["pattern"] == {
            "old_fragment": ["cache"],
            "new_fragment": ["buffer"],
        }
    finally:
        client.post("/session/abort")
        service.join(10)


def test_reads_are_idempotent_while_a_decision_blocks(decoy_case, decoy_model):
    service, client = start_review(decoy_model, decoy_case.seed)
    try:
        sid = wait_pending(client)
        for path in ("/suggestions", "/session", "/scope", "/changes"):
            first = client.get(path).json()
            second = client.get(path).json()
            assert first == second, path
        assert wait_pending(client) == sid
    finally:
        client.post("/session/abort")
        service.join(10)


def test_decision_validation_and_lifecycle(decoy_case, decoy_model):
    service, client = start_review(decoy_model, decoy_case.seed)
    sid = wait_pending(client)

    assert client.post(f"/suggestions/{sid}/decision", json={}).status_code == 422
    assert (
        client.post(f"/suggestions/{sid}/decision", json={"decision": 2}).status_code
        == 422
    )
    assert (
        client.post("/suggestions/ghost/decision", json={"decision": 1}).status_code
        == 404
    )

    accepted = client.post(f"/suggestions/{sid}/decision", json={"decision": 1})
    assert accepted.status_code == 200
    again = client.post(f"/suggestions/{sid}/decision", json={"decision": 0})
    assert again.status_code == 409

    drive(service, client, [0, 1, 1, 0])
    assert service.status == "finished"
    late = client.post(f"/suggestions/{sid}/decision", json={"decision": 1})
    assert late.status_code == 410
    assert client.post("/session/abort").status_code == 410


def test_full_review_matches_the_recorded_protocol(decoy_case, decoy_model):
    service, client = start_review(decoy_model, decoy_case.seed)
    decided = drive(service, client, [1, 0, 1, 1, 0])
    assert len(set(decided)) == 5

    session = client.get("/session").json()
    assert session["status"] == "finished"
    assert session["suggestions"] == 5
    assert session["applied"] == 4
    assert session["counters"] == {
        "llm_calls": 8,
        "tool_calls": 5,
        "files_inspected": 2,
        "suggestions_offered": 5,
        "accepted": 3,
        "rejected": 2,
        "actions": 13,
    }

    scope = client.get("/scope").json()
    assert scope["revision"] == 2
    assert scope["guards"] == [
        {"atoms": [{"kind": "exclude_name_regex", "value": "cacheHack"}]},
        {
            "atoms": [
                {"kind": "exclude_visibility", "value": "public"},
                {"kind": "exclude_kind", "value": "method"},
            ]
        },
    ]
    history = scope["history"]
    assert [h["revision"] for h in history] == [0, 1, 2]
    assert [len(h["trigger"]) for h in history] == [0, 1, 1]

    changes = client.get("/changes").json()
    assert [(r["old_name"], r["new_name"]) for r in changes["applied"]] == [
        ("Cache", "Buffer"),
        ("cacheTimeout", "bufferTimeout"),
        ("refreshCache", "refreshBuffer"),
        ("cacheIndex", "bufferIndex"),
    ]
    assert sorted(f["path"] for f in changes["files"]) == [
        "src/main/app/core/Cache.mini",
        "src/main/app/ops/Registry.mini",
    ]
    for entry in changes["files"]:
        assert entry["diff"].startswith("--- a/" + entry["path"])
    assert [(e["file"], e["line"]) for e in changes["comment_edits"]] == [
        ("src/main/app/core/Cache.mini", 1)
    ]

    assert validate_events(service.result.events.snapshot()) == []


def test_event_stream_replays_from_any_cursor(decoy_case, decoy_model):
    service, client = start_review(decoy_model, decoy_case.seed)
    drive(service, client, [1, 0, 1, 1, 0])
    events = service.result.events.snapshot()

    with client.stream("GET", "/events", params={"cursor": 0}) as response:
        assert response.headers["content-type"].startswith("text/event-stream")
        groups = sse_groups(response.iter_lines())
    assert groups[-1] == {"event": "end", "data": "{}"}
    body = groups[:-1]
    assert [int(g["id"]) for g in body] == list(range(len(events)))
    assert [g["event"] for g in body] == [e.type for e in events]
    for group in body:
        data = json.loads(group["data"])
        assert data["seq"] == int(group["id"])

    with client.stream("GET", "/events", params={"cursor": 5}) as response:
        tail = sse_groups(response.iter_lines())
    assert [int(g["id"]) for g in tail[:-1]] == list(range(5, len(events)))
    assert tail[-1]["event"] == "end"


def test_abort_releases_the_blocked_session(decoy_case, decoy_model):
    service, client = start_review(decoy_model, decoy_case.seed)
    wait_pending(client)
    assert client.post("/session/abort").status_code == 202
    service.join(10)
    assert service.status == "aborted"
    assert client.get("/session").json()["status"] == "aborted"
    assert client.get("/suggestions").json()["pending"] == []
    final = service.result.events.snapshot()[-1]
    assert final.type == "session_finished"
    assert final.payload["status"] == "aborted"
    assert client.post("/session/abort").status_code == 410
