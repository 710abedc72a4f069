"""Ordered and nominal string diagrams: typing, semantics, rewriting and translation."""
from nomdiag.constants import APP_VERSION as __version__

__all__ = ["__version__"]
