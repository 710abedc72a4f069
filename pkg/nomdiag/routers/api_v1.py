"""API v1 endpoints: the diagram commands over HTTP."""
import logging
from typing import Any, Callable, NoReturn, TypeVar

from fastapi import APIRouter, HTTPException, Request

from nomdiag import services
from nomdiag.errors import NomdiagError, ParseError
from nomdiag.rules import nmt_rules, smt_rules
from nomdiag.schemas import (
    CheckResponse,
    EqRequest,
    EqResponse,
    EvalResponse,
    OrdSemModel,
    RenderResponse,
    RuleReportModel,
    SemMapModel,
    SoundnessRequest,
    SoundnessResponse,
    SubstRequest,
    SubstResponse,
    TermRequest,
    TermResponse,
    TheoryInfo,
    TranslateRequest,
)
from nomdiag.semantics import SemMap, theory_kind
from nomdiag.smt import Theory, smt_theory_signature

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1", tags=["api_v1"])

T = TypeVar("T")


def _error(status: int, detail: str, code: str, request: Request) -> NoReturn:
    """Create and raise a structured HTTPException with error code and request ID.

    Args:
        status: HTTP status code.
        detail: Human-readable error message.
        code: Machine-readable error code.
        request: The incoming request (for request_id).

    Raises:
        HTTPException: Always raised.
    """
    request_id = getattr(request.state, "request_id", "")
    raise HTTPException(
        status_code=status,
        detail={"detail": detail, "code": code, "request_id": request_id},
    )


def _run(request: Request, fn: Callable[..., T], *args: Any, **kwargs: Any) -> T:
    """Call into the service layer, mapping parse errors to 422 and domain errors to 400."""
    try:
        return fn(*args, **kwargs)
    except ParseError as exc:
        _error(422, str(exc), exc.code, request)
    except NomdiagError as exc:
        _error(400, str(exc), exc.code, request)


def _workspace(body: TermRequest | EqRequest, request: Request) -> services.Workspace:
    ws = _run(request, services.Workspace.create, body.theory, body.calculus, body.signature)
    request.state.theory = ws.theory.value
    request.state.calculus = ws.calculus
    return ws


@router.post(
    "/check",
    response_model=CheckResponse,
    summary="Typecheck a term",
    description="Parse a term and return its domain and codomain.",
)
def check(body: TermRequest, request: Request) -> CheckResponse:
    ws = _workspace(body, request)
    dom, cod = _run(request, services.check, body.term, ws)
    return CheckResponse(calculus=ws.calculus, dom=dom, cod=cod)


@router.post(
    "/eval",
    response_model=EvalResponse,
    summary="Evaluate a term",
    description="The relation a term denotes in the chosen theory.",
)
def evaluate(body: TermRequest, request: Request) -> EvalResponse:
    ws = _workspace(body, request)
    value = _run(request, services.evaluate, body.term, ws)
    model = SemMapModel.from_semmap(value) if isinstance(value, SemMap) else OrdSemModel.from_ordsem(value)
    return EvalResponse(calculus=ws.calculus, map=model)


@router.post(
    "/normalize",
    response_model=TermResponse,
    summary="Normalize a term",
    description="Canonical representative: readback of the denotation in built-in theories, alpha/AC canonical form otherwise.",
)
def normalize(body: TermRequest, request: Request) -> TermResponse:
    ws = _workspace(body, request)
    term = _run(request, services.normalize, body.term, ws)
    return TermResponse(calculus=ws.calculus, term=services.format_term(term))


@router.post(
    "/eq",
    response_model=EqResponse,
    summary="Decide equality",
    description="Equality by evaluation in built-in theories, by bounded derivation search otherwise or when a derivation is requested.",
)
def eq(body: EqRequest, request: Request) -> EqResponse:
    ws = _workspace(body, request)
    outcome = _run(
        request,
        services.equal,
        body.left,
        body.right,
        ws,
        derive=body.derive,
        max_depth=body.max_depth,
        max_nodes=body.max_nodes,
    )
    return EqResponse(verdict=outcome.verdict, derivation=outcome.lines())


@router.post(
    "/translate",
    response_model=TermResponse,
    summary="Translate between calculi",
)
def translate(body: TranslateRequest, request: Request) -> TermResponse:
    ws = _run(request, services.Workspace.create, body.theory, None, body.signature)
    term = _run(request, services.translate, body.term, body.direction, ws, body.inputs, body.outputs)
    return TermResponse(calculus="nmt" if body.direction == "nom" else "smt", term=services.format_term(term))


@router.post(
    "/subst",
    response_model=SubstResponse,
    summary="Apply a substitution",
    description="Image of a list of names under the function a renaming term denotes.",
)
def subst(body: SubstRequest, request: Request) -> SubstResponse:
    return SubstResponse(names=_run(request, services.substitute, body.term, body.apply))


@router.post(
    "/render",
    response_model=RenderResponse,
    summary="Render a term as DOT",
)
def render(body: TermRequest, request: Request) -> RenderResponse:
    ws = _workspace(body, request)
    return RenderResponse(dot=_run(request, services.render, body.term, ws))


@router.post(
    "/soundness",
    response_model=SoundnessResponse,
    summary="Check built-in rules",
    description="Evaluate both sides of every built-in rule of a theory on seeded random instances.",
)
def soundness(body: SoundnessRequest, request: Request) -> SoundnessResponse:
    request.state.theory = Theory(body.theory).value
    report = _run(request, services.soundness, body.theory, body.samples, body.seed)
    return SoundnessResponse(
        theory=report.theory,
        ok=report.ok,
        rules=[
            RuleReportModel(
                rule=e.rule, samples=e.samples, skipped=e.skipped, failures=e.failures, counterexample=e.counterexample
            )
            for e in report.entries
        ],
    )


@router.get(
    "/theories",
    response_model=list[TheoryInfo],
    summary="List built-in theories",
)
def theories() -> list[TheoryInfo]:
    result = []
    for theory in Theory:
        rules = nmt_rules(theory) if theory.is_nominal else smt_rules(theory)
        result.append(
            TheoryInfo(
                name=theory,
                nominal=theory.is_nominal,
                kind=theory_kind(theory),
                generators=dict(smt_theory_signature(theory).generators),
                rules=rules.names(),
            )
        )
    return result
