"""Services layer: shared logic for the CLI and the HTTP API."""
from nomdiag.services.diagram_service import (
    BUDGET_EXHAUSTED,
    EQUAL,
    NOT_EQUAL,
    EqOutcome,
    Workspace,
    check,
    equal,
    evaluate,
    format_term,
    normalize,
    render,
    soundness,
    substitute,
    translate,
)

__all__ = [
    "BUDGET_EXHAUSTED",
    "EQUAL",
    "NOT_EQUAL",
    "EqOutcome",
    "Workspace",
    "check",
    "equal",
    "evaluate",
    "format_term",
    "normalize",
    "render",
    "soundness",
    "substitute",
    "translate",
]
