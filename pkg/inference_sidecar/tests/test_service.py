"""Contract tests against the shared golden request files.

Request bodies come verbatim from ``protocol/golden``; the scores a real
checkpoint produces are model-dependent, so responses are checked for
shape, alignment, and the distribution invariants rather than values.
"""

import json
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from inference_sidecar.app import create_app
from inference_sidecar.config import ServerConfig

from conftest import wait_until_ready

GOLDEN = Path(__file__).resolve().parents[2] / "protocol" / "golden"
BATCHES = ("batch01", "batch02", "batch16")

ATTACK_VERBS = ("attack", "challenge", "contradict", "dispute", "refute")
SUPPORT_VERBS = ("support", "confirm", "corroborate", "endorse", "validate")


def golden_request(name):
    return json.loads((GOLDEN / f"request_{name}.json").read_text(encoding="utf-8"))


def assert_valid_triple(triple):
    assert set(triple) == {"entailment", "neutral", "contradiction"}
    assert all(0.0 <= value <= 1.0 for value in triple.values())
    assert sum(triple.values()) == pytest.approx(1.0, abs=1e-6)


def test_health_reports_unavailable_before_startup(server_config):
    client = TestClient(create_app(server_config))
    response = client.get("/healthz")
    assert response.status_code == 503
    assert "detail" in response.json()


def test_scoring_rejected_before_startup(server_config):
    client = TestClient(create_app(server_config))
    response = client.post("/v1/score", json=golden_request("batch01"))
    assert response.status_code == 503
    assert "detail" in response.json()


def test_health_transitions_to_ok(server_config):
    client = TestClient(create_app(server_config))
    assert client.get("/healthz").status_code == 503
    with client:
        wait_until_ready(client)
        assert client.get("/healthz").json() == {
            "status": "ok",
            "model": server_config.model,
        }


def test_failed_load_is_reported(tmp_path):
    broken = ServerConfig(model=str(tmp_path / "not-a-checkpoint"))
    with TestClient(create_app(broken)) as client:
        holder = client.app.state.holder
        deadline = time.monotonic() + 30.0
        while holder.status == "loading" and time.monotonic() < deadline:
            time.sleep(0.02)
        assert holder.status == "failed"
        response = client.get("/healthz")
        assert response.status_code == 503
        assert "failed" in response.json()["detail"]


@pytest.mark.parametrize("name", BATCHES)
def test_golden_requests_round_trip(live_client, name):
    request = golden_request(name)
    response = live_client.post("/v1/score", json=request)
    assert response.status_code == 200
    scores = response.json()["scores"]
    assert len(scores) == len(request["hypotheses"])
    for triple in scores:
        assert_valid_triple(triple)


@pytest.mark.parametrize("name", BATCHES)
def test_batch_scores_align_with_single_calls(live_client, name):
    request = golden_request(name)
    batched = live_client.post("/v1/score", json=request).json()["scores"]
    for hypothesis, triple in zip(request["hypotheses"], batched):
        single = live_client.post(
            "/v1/score",
            json={"premise": request["premise"], "hypotheses": [hypothesis]},
        ).json()["scores"][0]
        for label in ("entailment", "neutral", "contradiction"):
            assert triple[label] == pytest.approx(single[label], abs=1e-4)


def test_oversized_batch_rejected(live_client, server_config):
    request = golden_request("batch16")
    hypotheses = request["hypotheses"] + ["The collar stays on."]
    assert len(hypotheses) == server_config.max_batch + 1
    response = live_client.post(
        "/v1/score", json={"premise": request["premise"], "hypotheses": hypotheses}
    )
    assert response.status_code == 413
    assert str(server_config.max_batch) in response.json()["detail"]


def test_empty_hypotheses_rejected(live_client):
    response = live_client.post("/v1/score", json={"premise": "x", "hypotheses": []})
    assert response.status_code == 400
    assert "hypotheses" in response.json()["detail"]


@pytest.mark.parametrize(
    "body",
    [
        {"premise": "x"},
        {"hypotheses": ["y"]},
        {"premise": "x", "hypotheses": "nope"},
        {"premise": "x", "hypotheses": [1, 2]},
        {"premise": 7, "hypotheses": ["y"]},
    ],
)
def test_malformed_bodies_rejected(live_client, body):
    response = live_client.post("/v1/score", json=body)
    assert response.status_code == 400
    assert "detail" in response.json()


def test_invalid_json_rejected(live_client):
    response = live_client.post(
        "/v1/score",
        content=b'{"premise": ',
        headers={"content-type": "application/json"},
    )
    assert response.status_code == 400
    assert "detail" in response.json()


def test_every_verbalization_yields_a_valid_triple(live_client):
    x = "The cervical spine seems to be undamaged."
    y = "We will sit him on the stretcher to be able to explore the cervical spine."
    hypotheses = [f"{x} {verb} {y}" for verb in ATTACK_VERBS + SUPPORT_VERBS]
    response = live_client.post(
        "/v1/score", json={"premise": f"{x} {y}", "hypotheses": hypotheses}
    )
    assert response.status_code == 200
    scores = response.json()["scores"]
    assert len(scores) == 10
    for triple in scores:
        assert_valid_triple(triple)


def test_concurrent_requests_stay_aligned(live_client):
    request = golden_request("batch16")
    bodies = [
        {"premise": request["premise"], "hypotheses": [hypothesis]}
        for hypothesis in request["hypotheses"][:4]
    ]
    sequential = [
        live_client.post("/v1/score", json=body).json()["scores"][0] for body in bodies
    ]

    def call(body):
        return live_client.post("/v1/score", json=body).json()["scores"][0]

    with ThreadPoolExecutor(max_workers=4) as pool:
        concurrent = list(pool.map(call, bodies))

    for expected, actual in zip(sequential, concurrent):
        for label in ("entailment", "neutral", "contradiction"):
            assert actual[label] == pytest.approx(expected[label], abs=1e-4)
