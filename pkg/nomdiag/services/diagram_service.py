"""Shared logic behind the CLI commands and the HTTP endpoints."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from nomdiag import nmt, semantics, smt
from nomdiag.bridge import nom_term, ord_term, ordinal_names
from nomdiag.constants import DEFAULT_MAX_DEPTH, DEFAULT_MAX_NODES, DEFAULT_SEED, RULE_SAMPLES
from nomdiag.errors import TypeMismatch
from nomdiag.names import NameSet
from nomdiag.parser import parse_name_list, parse_nmt, parse_signature, parse_smt
from nomdiag.render import render_nmt, render_smt
from nomdiag.rewrite import Derivation, RuleSet, SoundnessReport, check_rule_soundness, format_derivation, search_eq
from nomdiag.rules import nmt_rules, smt_rules
from nomdiag.semantics import OrdSem, SemMap
from nomdiag.smt import SmtSignature, Theory

logger = logging.getLogger(__name__)

Term = Union[nmt.NmtTerm, smt.SmtTerm]

EQUAL = "equal"
NOT_EQUAL = "not-equal"
BUDGET_EXHAUSTED = "budget-exhausted"


def _env_int(name: str, default: int) -> int:
    try:
        return int(os.getenv(name, default))
    except ValueError:
        logger.warning("ignoring non-integer %s=%r", name, os.getenv(name))
        return default


def search_budget() -> tuple[int, int]:
    """``(max_depth, max_nodes)`` from the environment, else the defaults."""
    return _env_int("NOMDIAG_MAX_DEPTH", DEFAULT_MAX_DEPTH), _env_int("NOMDIAG_MAX_NODES", DEFAULT_MAX_NODES)


@dataclass(frozen=True)
class Workspace:
    """Theory, calculus and generator signature that every command runs against."""

    theory: Theory = Theory.FREE
    calculus: str = "nmt"
    signature: SmtSignature = field(default_factory=SmtSignature)

    @classmethod
    def create(
        cls,
        theory: Theory | str = Theory.FREE,
        calculus: Optional[str] = None,
        signature_text: Optional[str] = None,
    ) -> Workspace:
        """Resolve the calculus from the theory unless given; built-in theories bring their signature.

        Raises:
            ParseError: The signature text is malformed.
        """
        theory = Theory(theory)
        if calculus is None:
            calculus = "smt" if theory is not Theory.FREE and not theory.is_nominal else "nmt"
        if signature_text:
            sig = parse_signature(signature_text, theory)
        else:
            sig = smt.smt_theory_signature(theory)
        return cls(theory, calculus, sig)

    @property
    def nominal(self) -> bool:
        return self.calculus == "nmt"

    @property
    def nmt_signature(self) -> nmt.NmtSignature:
        return nmt.NmtSignature(dict(self.signature.generators), self.theory.nominal)

    @property
    def builtin(self) -> bool:
        return self.theory is not Theory.FREE

    def rules(self) -> RuleSet:
        if self.nominal:
            return nmt_rules(self.theory, self.nmt_signature)
        return smt_rules(self.theory, self.signature)


# ---- Commands ----


def parse_term(text: str, ws: Workspace) -> Term:
    return parse_nmt(text) if ws.nominal else parse_smt(text)


def typecheck_term(t: Term, ws: Workspace) -> tuple:
    if ws.nominal:
        return nmt.nmt_typecheck(t, ws.nmt_signature)
    return smt.smt_typecheck(t, ws.signature)


def format_term(t: Term) -> str:
    return nmt.format_nmt(t) if isinstance(t, nmt.NmtTerm) else smt.format_smt(t)


def format_interface(side: NameSet | int) -> str:
    return str(side) if isinstance(side, int) else nmt.format_names(side)


def check(text: str, ws: Workspace) -> tuple[str, str]:
    """Parse and typecheck; the interfaces as text.

    Raises:
        ParseError, TermTypeError: On malformed or ill-typed input.
    """
    dom, cod = typecheck_term(parse_term(text, ws), ws)
    logger.info("check calculus=%s theory=%s dom=%s cod=%s", ws.calculus, ws.theory.value, dom, cod)
    return format_interface(dom), format_interface(cod)


def evaluate(text: str, ws: Workspace) -> SemMap | OrdSem:
    t = parse_term(text, ws)
    typecheck_term(t, ws)
    if ws.nominal:
        return semantics.eval_nmt(t, ws.theory.nominal)
    return semantics.eval_smt(t, ws.theory.ordered)


def normalize(text: str, ws: Workspace) -> Term:
    """Canonical representative of the term.

    Built-in theories use evaluation and readback; the free theory only
    identifies alpha-equivalent nominal terms and AC-equal ordered ones.
    """
    t = parse_term(text, ws)
    typecheck_term(t, ws)
    if ws.nominal:
        if ws.builtin:
            return semantics.normalize_nmt(t, ws.theory.nominal)
        return nmt.canonical_form(t)
    if ws.builtin:
        m, n = smt.smt_typecheck(t, ws.signature)
        named = nom_term(t, ordinal_names(m), ordinal_names(n), ws.signature)
        return ord_term(semantics.normalize_nmt(named, ws.theory.nominal))
    return smt.ac_normal(t)


@dataclass(frozen=True)
class EqOutcome:
    verdict: str
    derivation: Optional[Derivation] = None

    def lines(self) -> Optional[list[str]]:
        if self.derivation is None:
            return None
        text = format_derivation(self.derivation)
        return text.splitlines() if text else []


def _semantically_equal(t: Term, u: Term, ws: Workspace) -> bool:
    if ws.nominal:
        return semantics.nmt_eq(t, u, ws.theory.nominal)
    return semantics.eval_smt(t, ws.theory.ordered) == semantics.eval_smt(u, ws.theory.ordered)


def equal(
    left: str,
    right: str,
    ws: Workspace,
    *,
    derive: bool = False,
    max_depth: Optional[int] = None,
    max_nodes: Optional[int] = None,
) -> EqOutcome:
    """Decide equality, and optionally find a rewrite derivation.

    Built-in theories are decided by evaluation; the free theory, and any
    ``derive`` request, go through the bounded derivation search.

    Raises:
        TypeMismatch: The interfaces differ.
    """
    t, u = parse_term(left, ws), parse_term(right, ws)
    if typecheck_term(t, ws) != typecheck_term(u, ws):
        raise TypeMismatch(f"interfaces differ: {format_term(t)} vs {format_term(u)}")
    env_depth, env_nodes = search_budget()
    depth = env_depth if max_depth is None else max_depth
    nodes = env_nodes if max_nodes is None else max_nodes
    if ws.builtin and not _semantically_equal(t, u, ws):
        return EqOutcome(NOT_EQUAL)
    if ws.builtin and not derive:
        return EqOutcome(EQUAL)
    if not ws.builtin and ws.nominal and not derive and nmt.alpha_eq(t, u):
        return EqOutcome(EQUAL)
    found = search_eq(t, u, ws.rules(), max_depth=depth, max_nodes=nodes)
    if isinstance(found, Derivation):
        return EqOutcome(EQUAL, found)
    logger.info("eq undecided theory=%s explored=%d", ws.theory.value, found.explored)
    return EqOutcome(BUDGET_EXHAUSTED)


def translate(
    text: str,
    direction: str,
    ws: Workspace,
    inputs: Optional[Sequence[str]] = None,
    outputs: Optional[Sequence[str]] = None,
) -> Term:
    """``nom``: name an ordered term along the given lists (ordinal names by default); ``ord``: forget names."""
    if direction == "ord":
        t = parse_nmt(text)
        nmt.nmt_typecheck(t, ws.nmt_signature)
        return ord_term(t)
    t = parse_smt(text)
    m, n = smt.smt_typecheck(t, ws.signature)
    dom = list(inputs) if inputs is not None else ordinal_names(m)
    cod = list(outputs) if outputs is not None else ordinal_names(n)
    return nom_term(t, dom, cod, ws.signature)


def render(text: str, ws: Workspace) -> str:
    t = parse_term(text, ws)
    typecheck_term(t, ws)
    return render_nmt(t) if ws.nominal else render_smt(t, ws.signature)


def substitute(text: str, targets: Sequence[str] | str) -> list[str]:
    """Apply the function a nominal term denotes to a list of names.

    Raises:
        KindMismatch: The term does not denote a total function.
        NameNotInDomain: A target is outside its domain.
    """
    if isinstance(targets, str):
        targets = parse_name_list(targets)
    image = semantics.apply_subst(semantics.eval_nmt(parse_nmt(text), Theory.FREE), targets)
    return [str(a) for a in image]


def soundness(theory: Theory | str, samples: int = RULE_SAMPLES, seed: int = DEFAULT_SEED) -> SoundnessReport:
    """Check the built-in rules of ``theory`` in its own semantics; the free theory checks both calculi."""
    theory = Theory(theory)
    if theory is Theory.FREE:
        rules = list(nmt_rules(theory)) + list(smt_rules(theory))
    elif theory.is_nominal:
        rules = list(nmt_rules(theory))
    else:
        rules = list(smt_rules(theory))
    return check_rule_soundness(rules, theory, samples=samples, seed=seed)
