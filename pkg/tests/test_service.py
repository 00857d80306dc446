import json

import pytest
from fastapi.testclient import TestClient

from orderlab.cli import dispatch
from orderlab.service import app, route_path


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert "braid cmp" in r.json()["commands"]


def test_same_body_as_cli(client):
    r = client.post(route_path("braid cmp"), json={"n": 3, "left": "s1", "right": "e"})
    assert r.status_code == 200
    assert r.json() == json.loads(dispatch(["braid", "cmp", "--n", "3", "s1", "e"])[1])


def test_euler_route(client):
    r = client.post("/euler/bestvina", json={"index": 4})
    assert (r.status_code, r.json()) == (200, {"euler": 4})


def test_inconclusive_is_409(client):
    r = client.post("/alexander", json={"example": "bestvina"})
    assert r.status_code == 409
    assert r.json()["verdict"] == "orbit-not-proper"


def test_bad_body_is_400(client):
    for body in ({"n": "three", "left": "s1", "right": "e"}, {}):
        r = client.post("/braid/cmp", json=body)
        assert r.status_code == 400
        assert r.json()["error"] == "invalid input"


def test_unknown_route(client):
    assert client.post("/nope", json={}).status_code == 404
