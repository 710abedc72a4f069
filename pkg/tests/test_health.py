"""Tests for health, docs and theory listing."""


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok", "version": "0.1.0"}


def test_openapi_lists_endpoints(client):
    r = client.get("/openapi.json")
    assert r.status_code == 200
    paths = r.json()["paths"]
    for path in ["/api/v1/check", "/api/v1/eq", "/api/v1/theories", "/health"]:
        assert path in paths


def test_theories(client):
    r = client.get("/api/v1/theories")
    assert r.status_code == 200
    data = r.json()
    assert len(data) == 13
    by_name = {t["name"]: t for t in data}
    assert by_name["nB"]["kind"] == "bij"
    assert by_name["nB"]["nominal"] is True
    assert by_name["R"]["generators"] == {"e": [0, 1], "m": [2, 1], "ec": [1, 0], "mc": [1, 2]}
    assert "delta-chain" in by_name["nS"]["rules"]
    assert "sym-involution" in by_name["B"]["rules"]
