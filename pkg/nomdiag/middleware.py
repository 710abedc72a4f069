"""Middleware module: request size guard, request ID, security headers, request logging."""
import logging
import time
import uuid
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from nomdiag.constants import APP_VERSION, ERR_PAYLOAD_TOO_LARGE, MAX_BODY_BYTES

logger = logging.getLogger(__name__)


def _declared_length(request: Request) -> int:
    try:
        return int(request.headers.get("content-length", "0"))
    except ValueError:
        return 0


def register_middleware(app: FastAPI) -> None:
    """Register all HTTP middleware on the FastAPI app.

    Middleware registered later wraps the earlier ones, so the request ID
    is already set when the size guard runs.

    Args:
        app: The FastAPI application instance.
    """

    @app.middleware("http")
    async def limit_body_size(request: Request, call_next: Any) -> Any:
        """Reject term payloads larger than MAX_BODY_BYTES before parsing."""
        if request.method == "POST" and _declared_length(request) > MAX_BODY_BYTES:
            request_id = getattr(request.state, "request_id", "")
            logger.warning("[%s] rejected %s body on %s", request_id, _declared_length(request), request.url.path)
            return JSONResponse(
                status_code=413,
                content={"detail": "Request body too large", "code": ERR_PAYLOAD_TOO_LARGE, "request_id": request_id},
            )
        return await call_next(request)

    @app.middleware("http")
    async def add_security_headers(request: Request, call_next: Any) -> Any:
        """Add security headers and the service version to all responses."""
        response = await call_next(request)
        response.headers["X-Content-Type-Options"] = "nosniff"
        response.headers["X-Frame-Options"] = "DENY"
        response.headers["Referrer-Policy"] = "no-referrer"
        response.headers["Content-Security-Policy"] = "default-src 'none'; frame-ancestors 'none'"
        response.headers["X-Nomdiag-Version"] = APP_VERSION
        return response

    @app.middleware("http")
    async def add_request_id(request: Request, call_next: Any) -> Any:
        """Attach a unique request ID to every request and response."""
        request_id = request.headers.get("X-Request-ID", str(uuid.uuid4()))
        request.state.request_id = request_id
        response = await call_next(request)
        response.headers["X-Request-ID"] = request_id
        return response

    @app.middleware("http")
    async def request_logging(request: Request, call_next: Any) -> Any:
        """Log method, path, status, duration, and the theory and calculus a diagram command ran in."""
        start = time.perf_counter()
        response = await call_next(request)
        duration_ms = (time.perf_counter() - start) * 1000
        request_id = getattr(request.state, "request_id", "")
        logger.info(
            "[%s] %s %s %s %.1fms theory=%s calculus=%s",
            request_id, request.method, request.url.path, response.status_code, duration_ms,
            getattr(request.state, "theory", "-"), getattr(request.state, "calculus", "-"),
        )
        return response
