"""Equational rewriting: rule schemas, positioned rewriting, bounded derivation search and rule soundness."""
from __future__ import annotations

import itertools
import logging
import random
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, ClassVar, Iterable, Iterator, Union

from nomdiag import nmt, semantics, smt
from nomdiag.constants import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_NODES,
    DEFAULT_SEED,
    MAX_PAR_FOCUS_WIDTH,
    RULE_SAMPLES,
    SIZE_FACTOR,
)
from nomdiag.errors import IllTypedResult, NoMatch, NomdiagError, ParseError, TermTypeError, TypeMismatch
from nomdiag.names import Name, fresh_names
from nomdiag.smt import SmtSignature, Theory

logger = logging.getLogger(__name__)

Term = Union[nmt.NmtTerm, smt.SmtTerm]
Signature = Union[nmt.NmtSignature, SmtSignature]
Binding = dict[str, Any]


class Direction(str, Enum):
    LR = "L>R"
    RL = "R>L"

    @property
    def flipped(self) -> Direction:
        return Direction.RL if self is Direction.LR else Direction.LR


# ---- Term views ----


def _nominal(t: Term) -> bool:
    return isinstance(t, nmt.NmtTerm)


def _is_par(t: Term) -> bool:
    return isinstance(t, (nmt.Par, smt.Par))


def _is_seq(t: Term) -> bool:
    return isinstance(t, (nmt.Seq, smt.Seq))


def _is_unit(t: Term) -> bool:
    return isinstance(t, (nmt.Empty, smt.Unit))


def _unit(nominal: bool) -> Term:
    return nmt.Empty() if nominal else smt.Unit()


def factors(t: Term) -> list[Term]:
    """Tensor factors left to right; unlike ``par_children`` units are kept."""
    if _is_par(t):
        return factors(t.left) + factors(t.right)
    return [t]


def chain(t: Term) -> list[Term]:
    if _is_seq(t):
        return chain(t.first) + chain(t.second)
    return [t]


def children(t: Term) -> list[Term]:
    """Positions descend through flattened tensors, flattened compositions and permutation bodies."""
    if _is_par(t):
        return factors(t)
    if _is_seq(t):
        return chain(t)
    if isinstance(t, nmt.PermApp):
        return [t.body]
    return []


def _raw_par(items: list[Term], nominal: bool) -> Term:
    if not items:
        return _unit(nominal)
    cls = nmt.Par if nominal else smt.Par
    result = items[-1]
    for item in reversed(items[:-1]):
        result = cls(item, result)
    return result


def _raw_seq(items: list[Term], nominal: bool) -> Term:
    cls = nmt.Seq if nominal else smt.Seq
    result = items[-1]
    for item in reversed(items[:-1]):
        result = cls(item, result)
    return result


def typecheck(t: Term, sig: Signature | None = None) -> tuple:
    """Interface of either kind of term (name sets or arities)."""
    if _nominal(t):
        return nmt.nmt_typecheck(t, sig if isinstance(sig, nmt.NmtSignature) else None)
    return smt.smt_typecheck(t, sig if isinstance(sig, SmtSignature) else None)


def term_key(t: Term) -> str:
    """Search key: AC-normal text; for nominal terms internal names are canonicalised too."""
    if _nominal(t):
        return nmt.canonical_key(t, contract=False, exhaustive=False)
    return smt.format_smt(smt.ac_normal(t))


def term_size(t: Term) -> int:
    return nmt.term_size(t) if _nominal(t) else smt.term_size(t)


def _names(t: Term) -> frozenset[Name]:
    return nmt.names_in(t) if _nominal(t) else frozenset()


# ---- Positions ----


@dataclass(frozen=True, order=True)
class Position:
    """A path of child indices plus an optional focus on several siblings.

    A focus selects a subset of tensor factors (any subset for nominal
    terms, a contiguous range for ordered ones) or a contiguous range of a
    composition chain; the empty focus means the whole node.
    """

    path: tuple[int, ...] = ()
    focus: tuple[int, ...] = ()

    def __str__(self) -> str:
        text = ".".join(str(i) for i in self.path) if self.path else "root"
        if self.focus:
            text += "[" + ",".join(str(i) for i in self.focus) + "]"
        return text

    @classmethod
    def parse(cls, text: str) -> Position:
        m = re.fullmatch(r"(root|[0-9]+(?:\.[0-9]+)*)(?:\[([0-9]+(?:,[0-9]+)*)\])?", text.strip())
        if m is None:
            raise ParseError(f"malformed position {text!r}")
        path = () if m.group(1) == "root" else tuple(int(i) for i in m.group(1).split("."))
        focus = tuple(int(i) for i in m.group(2).split(",")) if m.group(2) else ()
        return cls(path, focus)


ROOT = Position()


def _foci(k: int, subsets: bool) -> Iterator[tuple[int, ...]]:
    if subsets and k <= MAX_PAR_FOCUS_WIDTH:
        for size in range(2, k):
            yield from itertools.combinations(range(k), size)
        return
    for size in range(2, k):
        for start in range(k - size + 1):
            yield tuple(range(start, start + size))


def positions(t: Term) -> list[Position]:
    """Every position of ``t`` in lexicographic order."""
    found: list[Position] = []
    _collect_positions(t, (), found)
    return sorted(found)


def _collect_positions(t: Term, path: tuple[int, ...], found: list[Position]) -> None:
    found.append(Position(path))
    kids = children(t)
    if len(kids) >= 3 and (_is_par(t) or _is_seq(t)):
        for focus in _foci(len(kids), subsets=_is_par(t) and _nominal(t)):
            found.append(Position(path, focus))
    for i, kid in enumerate(kids):
        _collect_positions(kid, path + (i,), found)


def _node_at(t: Term, path: tuple[int, ...]) -> Term:
    node = t
    for i in path:
        kids = children(node)
        if not 0 <= i < len(kids):
            raise NoMatch(f"no child {i} on the path {path}")
        node = kids[i]
    return node


def subterm_at(t: Term, pos: Position) -> Term:
    """The (possibly virtual, for a focus) subterm at ``pos``.

    Raises:
        NoMatch: The position does not exist in ``t``.
    """
    node = _node_at(t, pos.path)
    if not pos.focus:
        return node
    kids = children(node)
    if not (_is_par(node) or _is_seq(node)) or any(not 0 <= i < len(kids) for i in pos.focus):
        raise NoMatch(f"invalid focus at {pos}")
    picked = [kids[i] for i in pos.focus]
    return _raw_par(picked, _nominal(node)) if _is_par(node) else _raw_seq(picked, _nominal(node))


def replace_at(t: Term, pos: Position, replacement: Term) -> Term:
    """Replace the subterm at ``pos``; a focused group is replaced in place of its first member."""
    return _replace(t, pos.path, pos.focus, replacement)


def _rebuild(node: Term, kids: list[Term]) -> Term:
    nominal = _nominal(node)
    if _is_par(node):
        return _raw_par(kids, nominal)
    if _is_seq(node):
        return _raw_seq(kids, nominal)
    assert isinstance(node, nmt.PermApp)
    return nmt.PermApp(node.perm, kids[0])


def _replace(node: Term, path: tuple[int, ...], focus: tuple[int, ...], replacement: Term) -> Term:
    if path:
        kids = children(node)
        kids[path[0]] = _replace(kids[path[0]], path[1:], focus, replacement)
        return _rebuild(node, kids)
    if not focus:
        return replacement
    first = min(focus)
    kids = []
    for i, kid in enumerate(children(node)):
        if i == first:
            kids.append(replacement)
        elif i not in focus:
            kids.append(kid)
    return _rebuild(node, kids) if len(kids) > 1 else kids[0]


# ---- Patterns ----


class Pattern:
    """Base class of rule-side patterns."""

    # may match an empty group of tensor factors
    accepts_empty: ClassVar[bool] = False


@dataclass(frozen=True)
class Var(Pattern):
    """Any subterm."""

    name: str


@dataclass(frozen=True)
class GenVar(Pattern):
    """A single generator occurrence."""

    name: str


@dataclass(frozen=True)
class Lit(Pattern):
    """A fixed term, compared modulo associativity."""

    term: Term


@dataclass(frozen=True)
class UnitP(Pattern):
    """The tensor unit (``nil`` / ``unit``)."""

    accepts_empty: ClassVar[bool] = True


@dataclass(frozen=True)
class ParP(Pattern):
    left: Pattern
    right: Pattern
    keep_units: bool = False


@dataclass(frozen=True)
class SeqP(Pattern):
    first: Pattern
    second: Pattern


@dataclass(frozen=True)
class IdOf(Pattern):
    """``id_A``: a tensor of name identities, binding the set ``A``."""

    var: str
    accepts_empty: ClassVar[bool] = True


@dataclass(frozen=True)
class IdNameP(Pattern):
    a: str


@dataclass(frozen=True)
class DeltaP(Pattern):
    a: str
    b: str


@dataclass(frozen=True)
class GenP(Pattern):
    """A generator instance with name variables for its lists."""

    label: str
    dom: tuple[str, ...]
    cod: tuple[str, ...]


@dataclass(frozen=True)
class ActP(Pattern):
    perm: str
    body: Pattern


@dataclass(frozen=True)
class IdN(Pattern):
    """``id_n`` of the ordered calculus, binding ``n``."""

    var: str
    accepts_empty: ClassVar[bool] = True


@dataclass(frozen=True)
class SymP(Pattern):
    """The block symmetry ``σ_{m,n}``."""

    m: str
    n: str


def _bind(bind: Binding, var: str, value: Any) -> Binding | None:
    if var in bind:
        return bind if bind[var] == value else None
    extended = dict(bind)
    extended[var] = value
    return extended


def _splits(items: list[Term], subsets: bool) -> Iterator[tuple[list[Term], list[Term]]]:
    k = len(items)
    if subsets and k <= MAX_PAR_FOCUS_WIDTH:
        for mask in range(1 << k):
            yield (
                [items[i] for i in range(k) if mask >> i & 1],
                [items[i] for i in range(k) if not mask >> i & 1],
            )
        return
    for i in range(k + 1):
        yield items[:i], items[i:]


def _flat(t: Term) -> Term:
    return nmt.ac_normal(t) if _nominal(t) else smt.ac_normal(t)


@lru_cache(maxsize=1024)
def _sym_text(m: int, n: int) -> str:
    return smt.format_smt(smt.ac_normal(smt.smt_sym(m, n)))


def match(pattern: Pattern, t: Term, bind: Binding | None = None) -> Iterator[Binding]:
    """Every instantiation under which ``pattern`` matches ``t``.

    Tensors are matched modulo associativity (and commutativity for nominal
    terms), compositions modulo associativity.
    """
    yield from _match(pattern, t, {} if bind is None else bind)


def match_at(t: Term, pos: Position, pattern: Pattern) -> Binding | None:
    """The first instantiation of ``pattern`` at ``pos``, or None."""
    return next(match(pattern, subterm_at(t, pos)), None)


def _match(p: Pattern, t: Term, bind: Binding) -> Iterator[Binding]:
    if isinstance(p, Var):
        b = _bind(bind, p.name, t)
        if b is not None:
            yield b
    elif isinstance(p, GenVar):
        if isinstance(t, (nmt.Gen, smt.Gen)):
            b = _bind(bind, p.name, t)
            if b is not None:
                yield b
    elif isinstance(p, Lit):
        if _nominal(p.term) == _nominal(t) and _flat(p.term) == _flat(t):
            yield bind
    elif isinstance(p, UnitP):
        if _is_unit(t):
            yield bind
    elif isinstance(p, ParP):
        nominal = _nominal(t)
        for g1, g2 in _splits(factors(t), subsets=nominal):
            if (not g1 and not p.left.accepts_empty) or (not g2 and not p.right.accepts_empty):
                continue
            for b in _match(p.left, _raw_par(g1, nominal), bind):
                yield from _match(p.right, _raw_par(g2, nominal), b)
    elif isinstance(p, SeqP):
        items = chain(t)
        nominal = _nominal(t)
        for i in range(1, len(items)):
            for b in _match(p.first, _raw_seq(items[:i], nominal), bind):
                yield from _match(p.second, _raw_seq(items[i:], nominal), b)
    elif isinstance(p, IdOf):
        if not _nominal(t):
            return
        leaves = [f for f in factors(t) if not isinstance(f, nmt.Empty)]
        if all(isinstance(f, nmt.IdName) for f in leaves):
            b = _bind(bind, p.var, frozenset(f.a for f in leaves))
            if b is not None:
                yield b
    elif isinstance(p, IdNameP):
        if isinstance(t, nmt.IdName):
            b = _bind(bind, p.a, t.a)
            if b is not None:
                yield b
    elif isinstance(p, DeltaP):
        if isinstance(t, nmt.Delta):
            b = _bind(bind, p.a, t.a)
            b = _bind(b, p.b, t.b) if b is not None else None
            if b is not None:
                yield b
    elif isinstance(p, GenP):
        if not isinstance(t, nmt.Gen) or t.inst.label != p.label:
            return
        if len(t.inst.dom) != len(p.dom) or len(t.inst.cod) != len(p.cod):
            return
        b: Binding | None = bind
        for var, name in zip(p.dom + p.cod, t.inst.dom + t.inst.cod):
            b = _bind(b, var, name)
            if b is None:
                return
        yield b
    elif isinstance(p, ActP):
        if isinstance(t, nmt.PermApp):
            b = _bind(bind, p.perm, t.perm)
            if b is not None:
                yield from _match(p.body, t.body, b)
    elif isinstance(p, IdN):
        if _nominal(t):
            return
        leaves = [f for f in factors(t) if not isinstance(f, smt.Unit)]
        if all(isinstance(f, smt.Id) for f in leaves):
            b = _bind(bind, p.var, len(leaves))
            if b is not None:
                yield b
    elif isinstance(p, SymP):
        if _nominal(t) or not smt.is_wiring(t):
            return
        width = smt.smt_typecheck(t)[0]
        text = smt.format_smt(smt.ac_normal(t))
        for m in range(width + 1):
            if _sym_text(m, width - m) == text:
                b = _bind(bind, p.m, m)
                b = _bind(b, p.n, width - m) if b is not None else None
                if b is not None:
                    yield b
    else:
        raise TypeError(f"unknown pattern {p!r}")


def build(p: Pattern, bind: Binding, nominal: bool) -> Term:
    """Instantiate a pattern.

    Raises:
        KeyError: A variable of ``p`` is unbound.
    """
    if isinstance(p, (Var, GenVar)):
        return bind[p.name]
    if isinstance(p, Lit):
        return p.term
    if isinstance(p, UnitP):
        return _unit(nominal)
    if isinstance(p, ParP):
        left, right = build(p.left, bind, nominal), build(p.right, bind, nominal)
        if not p.keep_units:
            if _is_unit(left):
                return right
            if _is_unit(right):
                return left
        return nmt.Par(left, right) if nominal else smt.Par(left, right)
    if isinstance(p, SeqP):
        first, second = build(p.first, bind, nominal), build(p.second, bind, nominal)
        return nmt.Seq(first, second) if nominal else smt.Seq(first, second)
    if isinstance(p, IdOf):
        return nmt.par(*[nmt.IdName(a) for a in sorted(bind[p.var])])
    if isinstance(p, IdNameP):
        return nmt.IdName(bind[p.a])
    if isinstance(p, DeltaP):
        return nmt.Delta(bind[p.a], bind[p.b])
    if isinstance(p, GenP):
        dom = tuple(bind[v] for v in p.dom)
        cod = tuple(bind[v] for v in p.cod)
        return nmt.Gen(nmt.GenInstance(p.label, dom, cod))
    if isinstance(p, ActP):
        return nmt.PermApp(bind[p.perm], build(p.body, bind, nominal))
    if isinstance(p, IdN):
        return smt.smt_id(bind[p.var])
    if isinstance(p, SymP):
        return smt.smt_sym(bind[p.m], bind[p.n])
    raise TypeError(f"unknown pattern {p!r}")


def _root_kind(p: Pattern) -> str | None:
    if isinstance(p, ParP) or (isinstance(p, Lit) and _is_par(p.term)):
        return "par"
    if isinstance(p, SeqP) or (isinstance(p, Lit) and _is_seq(p.term)):
        return "seq"
    return None


# ---- Rules ----


@dataclass
class RewriteContext:
    """The whole term being rewritten, used for freshness and typing inside side conditions."""

    term: Term
    sig: Signature | None = None

    def fresh(self, k: int = 1, avoid: Iterable[Name] = ()) -> list[Name]:
        """``k`` machine names occurring nowhere in the term."""
        return fresh_names(_names(self.term) | frozenset(avoid), k)

    def interface(self, t: Term) -> tuple:
        return typecheck(t, self.sig)


WhereHook = Callable[[Binding, RewriteContext, Direction], Iterable[Binding]]
Sampler = Callable[[random.Random, Signature], Union[Binding, None]]


@dataclass(frozen=True)
class Rule:
    """An equation schema ``lhs = rhs``.

    Args:
        name: Unique within a rule set.
        lhs: Left-hand pattern.
        rhs: Right-hand pattern.
        nominal: Whether the rule rewrites nominal terms.
        where: Side conditions; given a match of one side it yields complete
            bindings (checking constraints, computing derived values and
            drawing fresh names) or nothing when the conditions fail.
        orient: Preferred direction for normalisation, if any.
        sampler: Draws an instantiation of the left-hand side for soundness checks.
    """

    name: str
    lhs: Pattern
    rhs: Pattern
    nominal: bool = True
    where: WhereHook | None = field(default=None, compare=False)
    orient: Direction | None = None
    sampler: Sampler | None = field(default=None, compare=False)

    def sides(self, direction: Direction) -> tuple[Pattern, Pattern]:
        return (self.lhs, self.rhs) if direction is Direction.LR else (self.rhs, self.lhs)


@dataclass(frozen=True)
class RuleSet:
    theory: Theory
    rules: tuple[Rule, ...]
    sig: Signature | None = field(default=None, compare=False)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def names(self) -> list[str]:
        return [r.name for r in self.rules]

    def by_name(self, name: str) -> Rule:
        for rule in self.rules:
            if rule.name == name:
                return rule
        raise KeyError(f"no rule named {name!r}")


@dataclass(frozen=True)
class Step:
    rule: str
    position: Position
    direction: Direction
    instantiation: tuple[tuple[str, str], ...] = ()

    def __str__(self) -> str:
        return f"{self.rule} at {self.position} {self.direction.value}"


def _show(value: Any) -> str:
    if isinstance(value, frozenset):
        return nmt.format_names(value)
    return str(value)


def _instantiation_text(bind: Binding) -> tuple[tuple[str, str], ...]:
    return tuple(sorted((k, _show(v)) for k, v in bind.items()))


def _instantiations(rule: Rule, sub: Term, ctx: RewriteContext, direction: Direction) -> Iterator[tuple[Binding, Term]]:
    src, dst = rule.sides(direction)
    for bind in _match(src, sub, {}):
        complete = rule.where(bind, ctx, direction) if rule.where is not None else (bind,)
        for full in complete:
            try:
                yield full, build(dst, full, rule.nominal)
            except KeyError:
                continue


def _candidates(
    t: Term, rule: Rule, pos: Position, direction: Direction, sig: Signature | None, sub: Term | None = None
) -> Iterator[tuple[Term | None, Step]]:
    """Rewrites of ``t`` at ``pos``; ill-typed results come back as ``None``."""
    if rule.nominal != _nominal(t):
        return
    if sub is None:
        sub = subterm_at(t, pos)
    ctx = RewriteContext(t, sig)
    try:
        interface = typecheck(sub, sig)
    except TermTypeError:
        return
    for bind, replacement in _instantiations(rule, sub, ctx, direction):
        step = Step(rule.name, pos, direction, _instantiation_text(bind))
        try:
            if typecheck(replacement, sig) != interface:
                yield None, step
                continue
            result = replace_at(t, pos, replacement)
            typecheck(result, sig)
        except TermTypeError:
            yield None, step
            continue
        yield result, step


def rewrite_step(
    t: Term,
    rule: Rule,
    pos: Position = ROOT,
    direction: Direction = Direction.LR,
    *,
    sig: Signature | None = None,
    instantiation: Iterable[tuple[str, str]] | None = None,
) -> Term:
    """Apply one rule at one position.

    Args:
        t: The term.
        rule: Equation to apply.
        pos: Where to apply it.
        direction: Which side is matched.
        sig: Signature used to typecheck the result.
        instantiation: Pin the instantiation (as recorded in a ``Step``).

    Raises:
        NoMatch: The pattern does not match at ``pos``.
        IllTypedResult: Every matching instantiation breaks typing in context.
    """
    wanted = tuple(instantiation) if instantiation is not None else None
    ill_typed = False
    for result, step in _candidates(t, rule, pos, direction, sig):
        if wanted is not None and step.instantiation != wanted:
            continue
        if result is None:
            ill_typed = True
            continue
        logger.debug("rewrite rule=%s pos=%s dir=%s", rule.name, pos, direction.value)
        return result
    if ill_typed:
        raise IllTypedResult(f"{rule.name} at {pos}: replacement is ill-typed in context")
    raise NoMatch(f"{rule.name} does not match at {pos} ({direction.value})")


def _successors(
    t: Term, rules: RuleSet, *, oriented: bool = False, size_cap: int | None = None
) -> Iterator[tuple[Term, Step]]:
    subterms = [(pos, subterm_at(t, pos)) for pos in positions(t)]
    for rule in sorted(rules, key=lambda r: r.name):
        if rule.nominal != _nominal(t):
            continue
        directions = [rule.orient] if oriented else list(Direction)
        for pos, sub in subterms:
            for direction in directions:
                if direction is None:
                    continue
                if pos.focus:
                    node_kind = "par" if _is_par(_node_at(t, pos.path)) else "seq"
                    if _root_kind(rule.sides(direction)[0]) != node_kind:
                        continue
                for result, step in _candidates(t, rule, pos, direction, rules.sig, sub):
                    if result is None:
                        continue
                    if size_cap is not None and term_size(result) > size_cap:
                        continue
                    yield result, step


def all_rewrites(t: Term, rules: RuleSet) -> list[tuple[Term, Step]]:
    """All one-step successors over positions, rules and directions, deduplicated by search key.

    Successors come in (rule name, position, direction) order and the first
    representative of each key is kept.
    """
    seen: set[str] = set()
    result: list[tuple[Term, Step]] = []
    for successor, step in _successors(t, rules):
        key = term_key(successor)
        if key in seen:
            continue
        seen.add(key)
        result.append((successor, step))
    return result


# ---- Derivations ----


@dataclass(frozen=True)
class Derivation:
    start: Term
    end: Term
    steps: tuple[Step, ...]

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class NotFoundWithinBudget:
    """Search gave up; not a failure of either input."""

    explored: int
    max_depth: int
    max_nodes: int
    reason: str = "budget exhausted"

    def __bool__(self) -> bool:
        return False


def replay(start: Term, steps: Iterable[Step], rules: RuleSet) -> Term:
    """Apply recorded steps in order.

    Raises:
        KeyError: A step names a rule not in ``rules``.
        NoMatch, IllTypedResult: A step does not apply.
    """
    current = start
    for step in steps:
        rule = rules.by_name(step.rule)
        current = rewrite_step(
            current,
            rule,
            step.position,
            step.direction,
            sig=rules.sig,
            instantiation=step.instantiation or None,
        )
    return current


def format_derivation(derivation: Derivation, *, with_instantiation: bool = False) -> str:
    """One ``step <n>: <rule> at <path> <dir>`` line per step.

    With ``with_instantiation`` each line carries a trailing ``#`` comment
    listing the bindings; the comment is ignored when parsing.
    """
    lines = []
    for i, step in enumerate(derivation.steps, start=1):
        line = f"step {i}: {step}"
        if with_instantiation and step.instantiation:
            line += "  # " + " ".join(f"{k}={v}" for k, v in step.instantiation)
        lines.append(line)
    return "\n".join(lines)


_STEP_LINE = re.compile(r"step\s+([0-9]+):\s+(\S+)\s+at\s+(\S+)\s+(L>R|R>L)\s*(?:#.*)?")


def parse_derivation(text: str) -> list[Step]:
    """Inverse of :func:`format_derivation` (instantiations are not recovered).

    Raises:
        ParseError: A malformed line or out-of-order step number.
    """
    steps: list[Step] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _STEP_LINE.fullmatch(line)
        if m is None:
            raise ParseError(f"line {lineno}: expected 'step <n>: <rule> at <path> <dir>'")
        if int(m.group(1)) != len(steps) + 1:
            raise ParseError(f"line {lineno}: expected step {len(steps) + 1}")
        steps.append(Step(m.group(2), Position.parse(m.group(3)), Direction(m.group(4))))
    return steps


# ---- Search ----


class _Budget:
    def __init__(self, max_nodes: int) -> None:
        self.max_nodes = max_nodes
        self.explored = 0

    def spend(self) -> bool:
        self.explored += 1
        return self.explored <= self.max_nodes


def _first_permapp(t: Term) -> Position | None:
    for pos in positions(t):
        if not pos.focus and isinstance(_node_at(t, pos.path), nmt.PermApp):
            return pos
    return None


def _push_permutations(t: Term, rules: RuleSet) -> list[tuple[Term, Step]]:
    """Eliminate permutation applications with the action rules, outermost first."""
    trail: list[tuple[Term, Step]] = []
    act_rules = sorted((r for r in rules if isinstance(r.lhs, ActP)), key=lambda r: r.name)
    current = t
    while (pos := _first_permapp(current)) is not None:
        for rule in act_rules:
            found = next(
                ((res, step) for res, step in _candidates(current, rule, pos, Direction.LR, rules.sig) if res is not None),
                None,
            )
            if found is not None:
                current = found[0]
                trail.append(found)
                break
        else:
            break
    return trail


def _normalize(t: Term, rules: RuleSet, budget: _Budget) -> list[tuple[Term, Step]]:
    """Greedy rewriting along the oriented rules, never growing the term or revisiting a key."""
    trail = _push_permutations(t, rules)
    current = trail[-1][0] if trail else t
    seen = {term_key(current)}
    while True:
        best: tuple[int, int, Term, Step] | None = None
        size = term_size(current)
        for order, (successor, step) in enumerate(_successors(current, rules, oriented=True, size_cap=size)):
            if not budget.spend():
                return trail
            key = term_key(successor)
            if key in seen:
                continue
            candidate = (term_size(successor), order, successor, step)
            if best is None or candidate[:2] < best[:2]:
                best = candidate
        if best is None:
            return trail
        current = best[2]
        seen.add(term_key(current))
        trail.append((current, best[3]))


def _refind(start: Term, keys: list[str], rules: RuleSet) -> list[tuple[Term, Step]] | None:
    """Re-derive concrete steps from ``start`` through the given sequence of keys."""
    trail: list[tuple[Term, Step]] = []
    current = start
    for key in keys:
        if term_key(current) == key:
            continue
        found = next(((s, step) for s, step in _successors(current, rules) if term_key(s) == key), None)
        if found is None:
            return None
        current = found[0]
        trail.append(found)
    return trail


def search_eq(
    t: Term,
    u: Term,
    rules: RuleSet,
    *,
    max_depth: int = DEFAULT_MAX_DEPTH,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> Derivation | NotFoundWithinBudget:
    """Look for a derivation ``t = u``.

    Both sides are first normalised along the oriented rules. If the normal
    forms differ a bidirectional breadth-first search over search keys
    continues from them, bounded by ``max_depth`` and with terms capped at
    twice the larger input size. ``max_nodes`` bounds the successors
    generated in both phases together. Ties are broken by (depth, rule
    name, position).

    Raises:
        TypeMismatch: The interfaces of ``t`` and ``u`` differ.
    """
    if typecheck(t, rules.sig) != typecheck(u, rules.sig):
        raise TypeMismatch("terms have different interfaces")
    budget = _Budget(max_nodes)

    def exhausted(reason: str = "budget exhausted") -> NotFoundWithinBudget:
        logger.warning(
            "search_eq gave up reason=%r explored=%d max_depth=%d max_nodes=%d",
            reason, budget.explored, max_depth, max_nodes,
        )
        return NotFoundWithinBudget(budget.explored, max_depth, max_nodes, reason)

    def finish(steps: list[Step], end: Term) -> Derivation:
        logger.info("search_eq found steps=%d explored=%d", len(steps), budget.explored)
        return Derivation(t, end, tuple(steps))

    if term_key(t) == term_key(u):
        return finish([], t)

    # forward: key -> (actual term, parent key, steps from the parent's term)
    forward: dict[str, tuple[Term, str | None, tuple[Step, ...]]] = {}
    previous: str | None = None
    for term, step in [(t, None)] + _normalize(t, rules, budget):
        key = term_key(term)
        if key == previous:
            # key-invisible steps (permutation pushing) extend the current entry
            _, parent, steps = forward[key]
            forward[key] = (term, parent, steps + (step,))
        elif key not in forward:
            forward[key] = (term, previous, () if step is None else (step,))
        previous = key
    tip_f = forward[previous][0]
    # backward: key -> parent key on the way to u
    backward: dict[str, str | None] = {}
    previous = None
    tip_b = u
    for term, _ in [(u, None)] + _normalize(u, rules, budget):
        key = term_key(term)
        backward.setdefault(key, previous)
        previous, tip_b = key, term

    def path_to(meet: str) -> Derivation | NotFoundWithinBudget:
        segments: list[tuple[Step, ...]] = []
        key: str | None = meet
        while key is not None:
            _, parent, steps = forward[key]
            segments.append(steps)
            key = parent
        steps = [step for segment in reversed(segments) for step in segment]
        keys: list[str] = []
        key = backward[meet]
        while key is not None:
            keys.append(key)
            key = backward[key]
        tail = _refind(forward[meet][0], keys, rules)
        if tail is None:
            return exhausted("could not replay the backward half")
        end = tail[-1][0] if tail else forward[meet][0]
        return finish(steps + [step for _, step in tail], end)

    for key in forward:
        if key in backward:
            return path_to(key)

    cap = SIZE_FACTOR * max(term_size(t), term_size(u), 1)
    front_f, front_b = [tip_f], [tip_b]
    depth_f = depth_b = 0
    while depth_f + depth_b < max_depth and front_f and front_b:
        expand_forward = len(front_f) <= len(front_b)
        frontier = front_f if expand_forward else front_b
        logger.debug(
            "search_eq layer side=%s depth=%d frontier=%d explored=%d",
            "forward" if expand_forward else "backward", depth_f + depth_b, len(frontier), budget.explored,
        )
        next_front: list[Term] = []
        for node in frontier:
            parent = term_key(node)
            for successor, step in _successors(node, rules, size_cap=cap):
                if not budget.spend():
                    return exhausted()
                key = term_key(successor)
                if expand_forward:
                    if key in forward:
                        continue
                    forward[key] = (successor, parent, (step,))
                    if key in backward:
                        return path_to(key)
                else:
                    if key in backward:
                        continue
                    backward[key] = parent
                    if key in forward:
                        return path_to(key)
                next_front.append(successor)
        if expand_forward:
            front_f, depth_f = next_front, depth_f + 1
        else:
            front_b, depth_b = next_front, depth_b + 1
    return exhausted()


# ---- Rule soundness ----


@dataclass(frozen=True)
class RuleReport:
    rule: str
    samples: int
    skipped: int
    failures: int
    counterexample: str | None = None


@dataclass(frozen=True)
class SoundnessReport:
    theory: Theory
    entries: tuple[RuleReport, ...]

    @property
    def failures(self) -> int:
        return sum(e.failures for e in self.entries)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def failing(self) -> list[RuleReport]:
        return [e for e in self.entries if e.failures]


def _signature_for(rule: Rule, theory: Theory) -> Signature:
    if rule.nominal:
        return nmt.nmt_theory_signature(theory.nominal)
    return smt.smt_theory_signature(theory.ordered)


def _evaluate(t: Term, theory: Theory) -> object:
    if _nominal(t):
        return semantics.eval_nmt(t, theory.nominal)
    return semantics.eval_smt(t, theory.ordered)


def _check_instance(rule: Rule, bind: Binding, sig: Signature, theory: Theory) -> tuple[bool, str | None]:
    """``(checked, problem)``; ``checked`` is False when the side condition has no instance."""
    try:
        lhs = build(rule.lhs, bind, rule.nominal)
    except KeyError as exc:
        return True, f"sampler left {exc} unbound"
    ctx = RewriteContext(lhs, sig)
    complete = list(itertools.islice(rule.where(bind, ctx, Direction.LR), 1)) if rule.where else [bind]
    if not complete:
        return False, None
    rhs = build(rule.rhs, complete[0], rule.nominal)
    try:
        left_type, right_type = typecheck(lhs, sig), typecheck(rhs, sig)
    except TermTypeError as exc:
        return True, f"{lhs}  vs  {rhs}: {exc}"
    if left_type != right_type:
        return True, f"{lhs}  vs  {rhs}: interfaces differ"
    try:
        if _evaluate(lhs, theory) != _evaluate(rhs, theory):
            return True, f"{lhs}  vs  {rhs}: denotations differ"
    except NomdiagError as exc:
        return True, f"{lhs}  vs  {rhs}: {exc}"
    return True, None


def check_rule_soundness(
    rules: Iterable[Rule],
    theory: Theory | str,
    samples: int = RULE_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> SoundnessReport:
    """Evaluate both sides of every rule on random instantiations.

    Args:
        rules: Rules to check.
        theory: Theory whose semantics is used.
        samples: Instantiations drawn per rule.
        seed: Seed of the sampler.

    Returns:
        One entry per rule with the first counterexample found, if any.
    """
    theory = Theory(theory)
    rng = random.Random(seed)
    entries = []
    for rule in rules:
        sig = _signature_for(rule, theory)
        ran = skipped = failures = 0
        witness: str | None = None
        for _ in range(samples):
            bind = rule.sampler(rng, sig) if rule.sampler is not None else None
            if bind is None:
                skipped += 1
                continue
            checked, problem = _check_instance(rule, bind, sig, theory)
            if not checked:
                skipped += 1
                continue
            ran += 1
            if problem is not None:
                failures += 1
                witness = witness or problem
        if failures:
            logger.warning("unsound rule=%s theory=%s failures=%d witness=%s", rule.name, theory.value, failures, witness)
        entries.append(RuleReport(rule.name, ran, skipped, failures, witness))
    report = SoundnessReport(theory, tuple(entries))
    logger.info("soundness theory=%s rules=%d failures=%d", theory.value, len(entries), report.failures)
    return report
