"""
Report service (FastAPI TestClient)
"""
import json

import pytest
from fastapi.testclient import TestClient

from src.main import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def parse_events(text: str):
    events = []
    for block in text.strip().split("\n\n"):
        lines = dict(line.split(": ", 1) for line in block.splitlines())
        events.append((lines["event"], json.loads(lines["data"])))
    return events


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_suites(client):
    names = client.get("/suites").json()["suites"]
    assert "hecke-system" in names
    assert names[-1] == "all"


def test_series(client):
    body = client.post("/series/E4", params={"order": 5}).json()
    assert body["coeffs"] == ["1", "240", "2160", "6720", "17520"]
    assert body["lead"] == 0


def test_unknown_series_is_422(client):
    response = client.post("/series/E12")
    assert response.status_code == 422
    assert response.json()["error"] == "unknown_name"


def test_verify_streams_events(client):
    response = client.post("/verify", json={"suite": "akn"})
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/event-stream")

    events = parse_events(response.text)
    kinds = [kind for kind, _ in events]
    assert kinds[0] == "suite_start"
    assert kinds[-1] == "suite_done"
    assert set(kinds[1:-1]) == {"check_result"}

    start, done = events[0][1], events[-1][1]
    assert start["suite"] == "akn"
    assert "threads" not in start["provenance"]
    assert events[1][1]["check"]["passed"] is True
    assert done["passed"] is True
    assert len(done["digest"]) == 64


def test_verify_unknown_suite(client):
    response = client.post("/verify", json={"suite": "nope"})
    assert response.status_code == 422
    assert response.json()["error"] == "unknown_name"


def test_verify_rejects_low_precision(client):
    response = client.post("/verify", json={"suite": "akn", "digits": 5})
    assert response.status_code == 422
