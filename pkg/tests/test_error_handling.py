"""Tests for error handling: structured errors, no info leak."""
import logging
from unittest.mock import patch

from fastapi.testclient import TestClient

from nomdiag.main import app


def test_type_error_structured(client):
    """Domain errors are 400 with a code and the request id."""
    r = client.post("/api/v1/check", json={"term": "d(a>b) | d(a>c)"}, headers={"X-Request-ID": "req-1"})
    assert r.status_code == 400
    detail = r.json()["detail"]
    assert detail["code"] == "OVERLAP"
    assert detail["request_id"] == "req-1"


def test_parse_error_is_422(client):
    r = client.post("/api/v1/check", json={"term": "d(a>"})
    assert r.status_code == 422
    assert r.json()["detail"]["code"] == "PARSE_ERROR"


def test_validation_error(client):
    """Unknown theories are rejected by request validation."""
    r = client.post("/api/v1/check", json={"term": "d(a>b)", "theory": "X"})
    assert r.status_code == 422


def test_error_no_stack_trace(client):
    """API errors should not leak stack traces or internal details."""
    r = client.post("/api/v1/eval", json={"term": "m(a,b>c)"})
    assert r.status_code == 400
    assert "Traceback" not in r.text
    assert r.json()["detail"]["code"] == "UNSUPPORTED_GENERATOR"


def test_unhandled_exception_is_500():
    with patch("nomdiag.services.check", side_effect=RuntimeError("boom")):
        with TestClient(app, raise_server_exceptions=False) as c:
            r = c.post("/api/v1/check", json={"term": "d(a>b)"})
    assert r.status_code == 500
    assert r.json()["code"] == "INTERNAL_ERROR"
    assert "boom" not in r.text


def test_request_id_in_response(client):
    """Every response should have X-Request-ID header."""
    r = client.get("/health")
    assert "X-Request-ID" in r.headers


def test_request_id_is_echoed(client):
    r = client.get("/health", headers={"X-Request-ID": "abc"})
    assert r.headers["X-Request-ID"] == "abc"


def test_security_headers(client):
    """Responses should have security headers."""
    r = client.get("/health")
    assert r.headers.get("X-Content-Type-Options") == "nosniff"
    assert r.headers.get("X-Frame-Options") == "DENY"
    assert "Content-Security-Policy" in r.headers


def test_unknown_path(client):
    r = client.get("/api/v1/unknown")
    assert r.status_code == 404


def test_oversized_body_is_413(client):
    term = "id(a) | " * 15_000 + "id(b)"
    r = client.post("/api/v1/check", json={"term": term}, headers={"X-Request-ID": "big"})
    assert r.status_code == 413
    assert r.json() == {"detail": "Request body too large", "code": "PAYLOAD_TOO_LARGE", "request_id": "big"}


def test_version_header(client):
    assert client.get("/health").headers["X-Nomdiag-Version"] == "0.1.0"


def test_request_log_names_theory_and_calculus(client, caplog):
    with caplog.at_level(logging.INFO, logger="nomdiag.middleware"):
        client.post("/api/v1/check", json={"term": "m + id ; m", "theory": "F"}, headers={"X-Request-ID": "log-1"})
    lines = [r.getMessage() for r in caplog.records if r.name == "nomdiag.middleware"]
    assert any(line.startswith("[log-1] POST /api/v1/check 200") and line.endswith("theory=F calculus=smt") for line in lines)
