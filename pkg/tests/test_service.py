from pathlib import Path

from fastapi.testclient import TestClient

from scorelens.bundle import build_bundle, deserialize, serialize
from scorelens.musicxml import parse_score
from scorelens.service import create_app

SAMPLES = Path(__file__).resolve().parents[1] / "samples"


def make_client():
    score, _ = parse_score((SAMPLES / "sections_tab.musicxml").read_bytes())
    payload = serialize(build_bundle(score))
    return payload, TestClient(create_app(payload))


def test_health_endpoint():
    _, client = make_client()
    response = client.get("/api/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok", "formatVersion": 1}


def test_bundle_endpoint_serves_exact_bytes():
    payload, client = make_client()
    response = client.get("/api/bundle")
    assert response.status_code == 200
    assert response.content == payload
    assert response.headers["content-type"].startswith("application/json")
    deserialize(response.content)  # still a valid bundle


def test_bundle_bytes_stable_across_requests():
    _, client = make_client()
    first = client.get("/api/bundle").content
    assert all(client.get("/api/bundle").content == first for _ in range(3))


def test_index_serves_html():
    _, client = make_client()
    response = client.get("/")
    assert response.status_code == 200
    assert "text/html" in response.headers["content-type"]
    assert "<html" in response.text or "<!doctype" in response.text.lower()


def test_unknown_path_is_404():
    _, client = make_client()
    assert client.get("/nonexistent").status_code == 404


def test_cross_origin_header_on_every_response():
    _, client = make_client()
    for path in ("/api/health", "/api/bundle", "/", "/nonexistent"):
        response = client.get(path)
        assert response.headers.get("access-control-allow-origin") == "*", path
