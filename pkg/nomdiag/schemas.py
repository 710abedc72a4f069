"""Pydantic schemas for semantic-map JSON and HTTP request/response validation."""
from typing import Literal, Optional

from pydantic import BaseModel, Field, ValidationError

from nomdiag.constants import DEFAULT_MAX_DEPTH, DEFAULT_MAX_NODES, DEFAULT_SEED, MAX_TERM_LENGTH, RULE_SAMPLES
from nomdiag.errors import ParseError
from nomdiag.semantics import Kind, OrdSem, SemMap
from nomdiag.smt import Theory

Calculus = Literal["nmt", "smt"]


# Semantic maps


class SemMapModel(BaseModel):
    """A relation between name sets. Name lists and pairs are sorted."""

    kind: Kind = Field(..., examples=["fun"])
    dom: list[str] = Field(..., examples=[["a", "b"]])
    cod: list[str] = Field(..., examples=[["c"]])
    pairs: list[tuple[str, str]] = Field(..., examples=[[["a", "c"], ["b", "c"]]])

    @classmethod
    def from_semmap(cls, s: SemMap) -> "SemMapModel":
        return cls(
            kind=s.kind,
            dom=[str(a) for a in sorted(s.dom)],
            cod=[str(b) for b in sorted(s.cod)],
            pairs=[(str(a), str(b)) for a, b in s.sorted_pairs()],
        )

    def to_semmap(self) -> SemMap:
        return SemMap.build(self.dom, self.cod, self.pairs, self.kind)


class OrdSemModel(BaseModel):
    """A relation between ordinals; positions are 0-based."""

    kind: Kind = Field(..., examples=["bij"])
    m: int = Field(..., ge=0, examples=[2])
    n: int = Field(..., ge=0, examples=[2])
    pairs: list[tuple[int, int]] = Field(..., examples=[[[0, 1], [1, 0]]])

    @classmethod
    def from_ordsem(cls, s: OrdSem) -> "OrdSemModel":
        return cls(kind=s.kind, m=s.m, n=s.n, pairs=sorted(s.pairs))


def semmap_to_json(s: SemMap) -> str:
    """``{"kind":..,"dom":[..],"cod":[..],"pairs":[[..],..]}`` with sorted lists."""
    return SemMapModel.from_semmap(s).model_dump_json()


def semmap_from_json(text: str) -> SemMap:
    """Parse and validate SemMap JSON.

    Raises:
        ParseError: The JSON is malformed or misses a key.
        InterfaceMismatch, KindMismatch: The map itself is invalid.
    """
    try:
        model = SemMapModel.model_validate_json(text)
    except ValidationError as exc:
        raise ParseError(f"invalid SemMap JSON: {exc.errors()[0]['msg']}") from exc
    return model.to_semmap()


# Requests


class TermRequest(BaseModel):
    """A term in either calculus, checked in a theory."""

    term: str = Field(..., min_length=1, max_length=MAX_TERM_LENGTH, examples=["d(a>b) ; d(b>c)"])
    theory: Theory = Field(default=Theory.FREE, examples=["nF"])
    calculus: Optional[Calculus] = Field(None, description="Defaults to the theory's calculus, nmt for free", examples=["nmt"])
    signature: Optional[str] = Field(
        None, max_length=MAX_TERM_LENGTH, description="Lines 'label : m -> n' for the free theory", examples=["g : 1 -> 1"]
    )


class EqRequest(BaseModel):
    left: str = Field(..., min_length=1, max_length=MAX_TERM_LENGTH, examples=["m(a,b>c)"])
    right: str = Field(..., min_length=1, max_length=MAX_TERM_LENGTH, examples=["m(b,a>c)"])
    theory: Theory = Field(default=Theory.FREE, examples=["nS"])
    calculus: Optional[Calculus] = None
    signature: Optional[str] = Field(None, max_length=MAX_TERM_LENGTH)
    derive: bool = Field(default=False, description="Also search for a rewrite derivation")
    max_depth: int = Field(default=DEFAULT_MAX_DEPTH, ge=0, le=64)
    max_nodes: int = Field(default=DEFAULT_MAX_NODES, ge=1, le=1_000_000)


class TranslateRequest(BaseModel):
    """``nom`` names an ordered term; ``ord`` forgets the names of a nominal one."""

    term: str = Field(..., min_length=1, max_length=MAX_TERM_LENGTH, examples=["sym"])
    direction: Literal["nom", "ord"] = Field(..., examples=["nom"])
    theory: Theory = Field(default=Theory.FREE)
    signature: Optional[str] = Field(None, max_length=MAX_TERM_LENGTH)
    inputs: Optional[list[str]] = Field(None, examples=[["a", "b"]])
    outputs: Optional[list[str]] = Field(None, examples=[["c", "d"]])


class SubstRequest(BaseModel):
    term: str = Field(..., min_length=1, max_length=MAX_TERM_LENGTH, examples=["[a>b] | [c>d]"])
    apply: list[str] = Field(..., examples=[["a", "c"]])


class SoundnessRequest(BaseModel):
    theory: Theory = Field(..., examples=["nR"])
    samples: int = Field(default=RULE_SAMPLES, ge=1, le=1000)
    seed: int = Field(default=DEFAULT_SEED)


# Responses


class CheckResponse(BaseModel):
    calculus: Calculus
    dom: str = Field(..., examples=["{a}"])
    cod: str = Field(..., examples=["{c}"])


class EvalResponse(BaseModel):
    calculus: Calculus
    map: SemMapModel | OrdSemModel


class TermResponse(BaseModel):
    calculus: Calculus
    term: str = Field(..., examples=["d(a>c)"])


class EqResponse(BaseModel):
    verdict: Literal["equal", "not-equal", "budget-exhausted"]
    derivation: Optional[list[str]] = Field(None, examples=[["step 1: m-comm at root L>R"]])


class SubstResponse(BaseModel):
    names: list[str] = Field(..., examples=[["b", "d"]])


class RenderResponse(BaseModel):
    dot: str


class RuleReportModel(BaseModel):
    rule: str
    samples: int
    skipped: int
    failures: int
    counterexample: Optional[str] = None


class SoundnessResponse(BaseModel):
    theory: Theory
    ok: bool
    rules: list[RuleReportModel]


class TheoryInfo(BaseModel):
    name: Theory
    nominal: bool
    kind: Kind
    generators: dict[str, tuple[int, int]]
    rules: list[str]


class HealthResponse(BaseModel):
    status: str = Field(..., examples=["ok"])
    version: str = Field(..., examples=["0.1.0"])
