"""Routers package: HTTP route handlers."""
from nomdiag.routers.api_v1 import router as api_v1_router

__all__ = ["api_v1_router"]
