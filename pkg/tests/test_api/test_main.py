# test_main.py - HTTP endpoints
import math

import httpx
import pytest
from fastapi.testclient import TestClient

from main import app

client = TestClient(app)

IDENTITY = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


@pytest.mark.asyncio
async def test_health_async():
    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(transport=transport, base_url="http://test") as ac:
        response = await ac.get("/health")
    assert response.status_code == 200


def test_recover():
    response = client.post("/api/recover", json={
        "matrix": IDENTITY,
        "y": [0.0, 2.5, 0.0, -1.25],
        "algorithm": "m2ols",
        "K": 2,
        "N": 2,
        "L": 1,
        "true_support": [3, 1],
    })
    assert response.status_code == 200
    body = response.json()
    assert body["support_hat"] == [1, 3]
    assert body["converged"] is True
    assert body["exact_support_match"] is True


def test_recover_normalizes_on_request():
    response = client.post("/api/recover", json={
        "matrix": [[2.0, 0.0], [0.0, 3.0]],
        "normalize": True,
        "y": [0.0, 1.0],
        "algorithm": "omp",
        "K": 1,
    })
    assert response.status_code == 200
    assert response.json()["support_hat"] == [1]


def test_recover_rejects_bad_config():
    response = client.post("/api/recover", json={"matrix": IDENTITY, "y": [1.0, 0, 0, 0], "algorithm": "gomp", "K": 1})
    assert response.status_code == 400
    assert "ConfigInvalidError" in response.json()["detail"]


def test_recover_rejects_unnormalized_matrix():
    response = client.post("/api/recover", json={"matrix": [[2.0]], "y": [1.0], "algorithm": "omp", "K": 1})
    assert response.status_code == 400


def test_ric_exact_and_sampled():
    pair = [[1.0, 0.5], [0.0, math.sqrt(0.75)]]
    response = client.post("/api/ric", json={"matrix": pair, "order": 2})
    assert response.status_code == 200
    assert response.json()["delta"] == pytest.approx(0.5, abs=1e-12)

    response = client.post("/api/ric", json={"matrix": IDENTITY, "order": 2, "samples": 3, "seed": 1})
    assert response.status_code == 200
    assert response.json()["method"] == "lower_bound_sampled"


def test_recovery_bound():
    response = client.get("/api/bounds/recovery", params={"K": 10, "N": 48, "L": 3})
    assert response.status_code == 200
    body = response.json()
    assert body["bound"] == pytest.approx(0.324503, abs=1e-6)
    assert body["ric_order"] == 78


def test_recovery_bound_rejects_params():
    assert client.get("/api/bounds/recovery", params={"K": 1, "N": 1, "L": 2}).status_code == 400


def test_snr_bound():
    response = client.get("/api/bounds/snr", params={"K": 1, "N": 1, "L": 1, "delta": 0.0, "kappa": 1.0})
    assert response.status_code == 200
    assert response.json()["threshold"] == pytest.approx(4.0)


def test_snr_bound_without_guarantee():
    response = client.get("/api/bounds/snr", params={"K": 10, "N": 48, "L": 3, "delta": 0.45, "kappa": 1.0})
    assert response.status_code == 500
    assert "NoGuaranteeError" in response.json()["detail"]


def test_flops():
    response = client.get("/api/flops", params={"algorithm": "omp", "K": 10, "m": 128, "n": 256})
    assert response.status_code == 200
    assert response.json() == {"flops": 693_760}
    assert client.get("/api/flops", params={"algorithm": "m2ols", "K": 10, "m": 128, "n": 256}).status_code == 500
