"""
Tests for the REST API.
"""

import pytest
from fastapi.testclient import TestClient

from stacksort_bijection.backend.main import app
from stacksort_bijection.utils.config import get_settings


@pytest.fixture
def client():
    return TestClient(app)


def test_root_and_health(client):
    assert client.get("/").json()["status"] == "running"
    body = client.get("/health").json()
    assert body["status"] == "healthy"
    assert body["api_max_n"] == get_settings().api_max_n


def test_map(client):
    response = client.post("/map", json={"permutation": "3 4 1 6 8 2 5 7 9 12 10 11"})
    assert response.status_code == 200
    assert response.json()["output"] == "12 6 11 8 9 10 7 1 2 5 4 3"


def test_map_inverse_step(client):
    response = client.post("/map", json={"permutation": "3 2 1", "inverse": True, "step": "lambda"})
    assert response.status_code == 200
    assert response.json()["output"] == "3 2 1"


def test_map_rejects_bad_input(client):
    assert client.post("/map", json={"permutation": "3 2 1"}).status_code == 400
    assert client.post("/map", json={"permutation": "1 1"}).status_code == 400
    assert client.post("/map", json={"permutation": "1 2", "step": "delta"}).status_code == 400


def test_sort(client):
    body = client.post("/sort", json={"permutation": "2 3 1"}).json()
    assert body == {"input": "2 3 1", "iterates": ["2 1 3", "1 2 3"], "sort_depth": 2}


def test_stats(client):
    body = client.post("/stats", json={"permutation": "2 3 1"}).json()
    assert body["des"] == 1
    assert body["sort_depth"] == 2


def test_verify(client):
    response = client.post("/verify", json={"n_max": 4, "only": ["catalan_counts", "upsilon_sort_depth"]})
    assert response.status_code == 200
    body = response.json()
    assert body["passed"] is True
    assert [c["name"] for c in body["checks"]] == ["catalan_counts", "upsilon_sort_depth"]


def test_verify_limits(client):
    too_big = get_settings().api_max_n + 1
    assert client.post("/verify", json={"n_max": too_big}).status_code == 400
    assert client.post("/verify", json={"n_max": 3, "only": ["nope"]}).status_code == 400
    assert client.post("/verify", json={"n_max": 0}).status_code == 422
