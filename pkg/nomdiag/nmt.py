"""Nominal terms: named interfaces, partial tensor, permutation action, support and alpha-equivalence."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

from nomdiag.constants import MAX_BRUTE_FORCE_INTERNALS
from nomdiag.errors import (
    ArityMismatch,
    DuplicateName,
    OverlapError,
    SeqMismatch,
    TypeMismatch,
    UnknownGenerator,
)
from nomdiag.names import (
    FinPerm,
    FreshSupply,
    Name,
    NameSet,
    as_name,
    enumerate_names,
    fresh_names,
    perm_apply_set,
    perm_compose,
    perm_extending,
    perm_inverse,
    transposition,
    transpositions_of,
)
from nomdiag.smt import THEORY_GENERATORS, Theory

logger = logging.getLogger(__name__)


# ---- Syntax ----


@dataclass(frozen=True)
class GenInstance:
    """A generator applied to ordered lists of distinct names."""

    label: str
    dom: tuple[Name, ...]
    cod: tuple[Name, ...]

    def act(self, p: FinPerm) -> GenInstance:
        return GenInstance(self.label, tuple(p(a) for a in self.dom), tuple(p(b) for b in self.cod))


class NmtTerm:
    """Base class of nominal term nodes."""

    def __str__(self) -> str:
        return format_nmt(self)


@dataclass(frozen=True)
class Empty(NmtTerm):
    """``id`` of the empty set, the unit of the tensor."""


@dataclass(frozen=True)
class IdName(NmtTerm):
    a: Name


@dataclass(frozen=True)
class Delta(NmtTerm):
    """The renaming wire ``{a} -> {b}``."""

    a: Name
    b: Name


@dataclass(frozen=True)
class Gen(NmtTerm):
    inst: GenInstance


@dataclass(frozen=True)
class Par(NmtTerm):
    left: NmtTerm
    right: NmtTerm


@dataclass(frozen=True)
class Seq(NmtTerm):
    first: NmtTerm
    second: NmtTerm


@dataclass(frozen=True)
class PermApp(NmtTerm):
    perm: FinPerm
    body: NmtTerm


AnyNmt = Union[Empty, IdName, Delta, Gen, Par, Seq, PermApp]


def ident(a: Name | str) -> IdName:
    return IdName(as_name(a))


def delta(a: Name | str, b: Name | str) -> Delta:
    return Delta(as_name(a), as_name(b))


def gen(label: str, dom: Iterable[Name | str], cod: Iterable[Name | str]) -> Gen:
    return Gen(GenInstance(label, tuple(as_name(a) for a in dom), tuple(as_name(b) for b in cod)))


def par_children(t: NmtTerm) -> list[NmtTerm]:
    """Tensor factors left to right, ``Empty`` dropped."""
    if isinstance(t, Par):
        return par_children(t.left) + par_children(t.right)
    if isinstance(t, Empty):
        return []
    return [t]


def seq_children(t: NmtTerm) -> list[NmtTerm]:
    if isinstance(t, Seq):
        return seq_children(t.first) + seq_children(t.second)
    return [t]


def par(*terms: NmtTerm) -> NmtTerm:
    """Right-nested tensor in the given order; ``par()`` is ``Empty``."""
    factors = [f for t in terms for f in par_children(t)]
    if not factors:
        return Empty()
    result = factors[-1]
    for f in reversed(factors[:-1]):
        result = Par(f, result)
    return result


def seq(*terms: NmtTerm) -> NmtTerm:
    if not terms:
        raise ValueError("seq() needs at least one term")
    chain = [c for t in terms for c in seq_children(t)]
    result = chain[-1]
    for c in reversed(chain[:-1]):
        result = Seq(c, result)
    return result


def sorted_par(terms: Iterable[NmtTerm], key: Callable[[NmtTerm], str] | None = None) -> NmtTerm:
    """Tensor with factors sorted by their text (commutativity made canonical)."""
    factors = [f for t in terms for f in par_children(t)]
    return par(*sorted(factors, key=key or format_nmt))


def ac_normal(t: NmtTerm, key: Callable[[NmtTerm], str] | None = None) -> NmtTerm:
    """Flatten both compositions, drop tensor units, sort tensor factors."""
    if isinstance(t, Par):
        return sorted_par((ac_normal(c, key) for c in par_children(t)), key)
    if isinstance(t, Seq):
        return seq(*[ac_normal(c, key) for c in seq_children(t)])
    if isinstance(t, PermApp):
        return PermApp(t.perm, ac_normal(t.body, key))
    return t


def ac_key(t: NmtTerm) -> str:
    return format_nmt(ac_normal(t))


def term_size(t: NmtTerm) -> int:
    """Number of leaves other than ``Empty``."""
    if isinstance(t, Par):
        return term_size(t.left) + term_size(t.right)
    if isinstance(t, Seq):
        return term_size(t.first) + term_size(t.second)
    if isinstance(t, PermApp):
        return term_size(t.body)
    return 0 if isinstance(t, Empty) else 1


def names_in_order(t: NmtTerm) -> list[Name]:
    """Every name occurrence, left to right (pre-order)."""
    if isinstance(t, IdName):
        return [t.a]
    if isinstance(t, Delta):
        return [t.a, t.b]
    if isinstance(t, Gen):
        return list(t.inst.dom) + list(t.inst.cod)
    if isinstance(t, (Par, Seq)):
        left, right = (t.left, t.right) if isinstance(t, Par) else (t.first, t.second)
        return names_in_order(left) + names_in_order(right)
    if isinstance(t, PermApp):
        return [a for pair in t.perm.moved for a in pair] + names_in_order(t.body)
    return []


def names_in(t: NmtTerm) -> NameSet:
    return frozenset(names_in_order(t))


# ---- Signatures ----


@dataclass(frozen=True)
class NmtSignature:
    """Generator schemas ``label -> (dom arity, cod arity)``, closed under renaming."""

    schemas: dict[str, tuple[int, int]] = field(default_factory=dict)
    theory_id: Theory = Theory.FREE

    def __hash__(self) -> int:
        return hash((self.theory_id, tuple(sorted(self.schemas.items()))))


def nmt_theory_signature(theory: Theory | str) -> NmtSignature:
    theory = Theory(theory)
    if theory is Theory.FREE:
        return NmtSignature({}, Theory.FREE)
    return NmtSignature(dict(THEORY_GENERATORS[theory.ordered.value]), theory.nominal)


# ---- Typing ----


def nmt_typecheck(t: NmtTerm, sig: NmtSignature | None = None) -> tuple[NameSet, NameSet]:
    """Domain and codomain name sets of ``t``.

    Args:
        t: The term.
        sig: When given, generator labels and arities are checked against it.

    Raises:
        OverlapError: A tensor's domains or codomains intersect.
        SeqMismatch: A composition's middle interfaces differ.
        DuplicateName: A generator instance repeats a name.
        UnknownGenerator: A label is not in ``sig``.
        ArityMismatch: An instance has the wrong number of names for its schema.
    """
    if sig is not None and (sig.schemas or sig.theory_id is not Theory.FREE):
        _check_labels(t, sig)
    return _infer(t)


def _check_labels(t: NmtTerm, sig: NmtSignature) -> None:
    if isinstance(t, Gen):
        schema = sig.schemas.get(t.inst.label)
        if schema is None:
            raise UnknownGenerator(f"unknown generator {t.inst.label!r}")
        if schema != (len(t.inst.dom), len(t.inst.cod)):
            raise ArityMismatch(
                f"{t.inst.label} expects {schema[0]} -> {schema[1]} names, "
                f"got {len(t.inst.dom)} -> {len(t.inst.cod)}"
            )
    elif isinstance(t, Par):
        _check_labels(t.left, sig)
        _check_labels(t.right, sig)
    elif isinstance(t, Seq):
        _check_labels(t.first, sig)
        _check_labels(t.second, sig)
    elif isinstance(t, PermApp):
        _check_labels(t.body, sig)


def _fmt_set(names: Iterable[Name]) -> str:
    return "{" + ", ".join(str(a) for a in enumerate_names(names)) + "}"


@lru_cache(maxsize=65536)
def _infer(t: NmtTerm) -> tuple[NameSet, NameSet]:
    if isinstance(t, Empty):
        return frozenset(), frozenset()
    if isinstance(t, IdName):
        return frozenset({t.a}), frozenset({t.a})
    if isinstance(t, Delta):
        return frozenset({t.a}), frozenset({t.b})
    if isinstance(t, Gen):
        inst = t.inst
        if len(set(inst.dom)) != len(inst.dom) or len(set(inst.cod)) != len(inst.cod):
            raise DuplicateName(f"repeated name in generator instance {format_nmt(t)}")
        return frozenset(inst.dom), frozenset(inst.cod)
    if isinstance(t, Par):
        a1, b1 = _infer(t.left)
        a2, b2 = _infer(t.right)
        if not a1.isdisjoint(a2):
            raise OverlapError(f"tensor domains overlap on {_fmt_set(a1 & a2)}")
        if not b1.isdisjoint(b2):
            raise OverlapError(f"tensor codomains overlap on {_fmt_set(b1 & b2)}")
        return a1 | a2, b1 | b2
    if isinstance(t, Seq):
        a1, b1 = _infer(t.first)
        a2, b2 = _infer(t.second)
        if b1 != a2:
            raise SeqMismatch(f"cannot compose {_fmt_set(b1)} with {_fmt_set(a2)}")
        return a1, b2
    if isinstance(t, PermApp):
        a, b = _infer(t.body)
        return perm_apply_set(t.perm, a), perm_apply_set(t.perm, b)
    raise TypeError(f"not an NMT term: {t!r}")


def term_support(t: NmtTerm) -> NameSet:
    """``dom ∪ cod``; names used only internally are not in the support."""
    a, b = nmt_typecheck(t)
    return a | b


# ---- Permutation action ----


def perm_act_term(p: FinPerm, t: NmtTerm) -> NmtTerm:
    """Push ``p`` to the leaves, eliminating every ``PermApp`` node."""
    if isinstance(t, Empty):
        return t
    if isinstance(t, IdName):
        return IdName(p(t.a))
    if isinstance(t, Delta):
        return Delta(p(t.a), p(t.b))
    if isinstance(t, Gen):
        return Gen(t.inst.act(p))
    if isinstance(t, Par):
        return Par(perm_act_term(p, t.left), perm_act_term(p, t.right))
    if isinstance(t, Seq):
        return Seq(perm_act_term(p, t.first), perm_act_term(p, t.second))
    if isinstance(t, PermApp):
        return perm_act_term(perm_compose(p, t.perm), t.body)
    raise TypeError(f"not an NMT term: {t!r}")


def renaming_bundle(p: FinPerm, names: Iterable[Name]) -> NmtTerm:
    """``⊎ δ_{a p(a)}`` over ``names`` in name order; ``Empty`` for no names."""
    return par(*[Delta(a, p(a)) for a in enumerate_names(names)])


def conjugation_form(p: FinPerm, t: NmtTerm) -> NmtTerm:
    """``p·t`` written as ``(p_A)⁻¹ ; t ; p_B`` for ``t : A -> B``."""
    a, b = nmt_typecheck(t)
    inverse = perm_inverse(p)
    return Seq(renaming_bundle(inverse, perm_apply_set(p, a)), Seq(t, renaming_bundle(p, b)))


def bundle_map(t: NmtTerm) -> dict[Name, Name] | None:
    """The renaming computed by a tensor of ``IdName``/``Delta`` leaves, else None."""
    mapping: dict[Name, Name] = {}
    for leaf in par_children(t):
        if isinstance(leaf, IdName):
            mapping[leaf.a] = leaf.a
        elif isinstance(leaf, Delta):
            mapping[leaf.a] = leaf.b
        else:
            return None
    return mapping


def bundle_term(mapping: dict[Name, Name]) -> NmtTerm:
    """Canonical bundle: ``id(a)`` for fixed names, ``d(a>b)`` otherwise, in name order."""
    return par(*[IdName(a) if mapping[a] == a else Delta(a, mapping[a]) for a in sorted(mapping)])


# ---- Alpha-equivalence ----


def freshen_internals(t: NmtTerm) -> NmtTerm:
    """Rename every internal name to a distinct machine-fresh name.

    A composition's internal names are the middle names outside its own
    domain and codomain; they are renamed outermost first, in order of
    first occurrence.
    """
    t = perm_act_term(FinPerm.identity(), t)
    supply = FreshSupply(names_in(t))
    return _freshen(t, supply)


def _freshen(t: NmtTerm, supply: FreshSupply) -> NmtTerm:
    if isinstance(t, Par):
        return Par(_freshen(t.left, supply), _freshen(t.right, supply))
    if not isinstance(t, Seq):
        return t
    first, second = t.first, t.second
    a, middle = _infer(first)
    _, c = _infer(second)
    internal = middle - a - c
    if internal:
        order = {n: i for i, n in reversed(list(enumerate(names_in_order(first))))}
        for x in sorted(internal, key=lambda n: order[n]):
            p = transposition(x, supply.take())
            first = perm_act_term(p, first)
            second = perm_act_term(p, second)
    return Seq(_freshen(first, supply), _freshen(second, supply))


def _spell_internals(t: NmtTerm) -> NmtTerm:
    """Freshen, then respell the internal names as the first machine names off the interface.

    The result depends only on where internal names are bound, not on how
    they were spelled.
    """
    freshened = _freshen(t, FreshSupply(names_in(t)))
    dom, cod = _infer(t)
    interface = dom | cod
    bound: list[Name] = []
    for a in names_in_order(freshened):
        if a not in interface and a not in bound:
            bound.append(a)
    if not bound:
        return freshened
    pi = perm_extending(dict(zip(bound, fresh_names(interface, len(bound)))))
    assert pi is not None
    return perm_act_term(pi, freshened)


def _contract(t: NmtTerm) -> NmtTerm:
    """Compose adjacent renaming bundles, drop identities, absorb bundles into neighbours."""
    if isinstance(t, Delta):
        return IdName(t.a) if t.a == t.b else t
    if isinstance(t, Par):
        return par(*[_contract(c) for c in par_children(t)])
    if not isinstance(t, Seq):
        return t
    dom, cod = _infer(t)
    chain = [c for child in seq_children(t) for c in seq_children(_contract(child))]
    changed = True
    while changed:
        changed = False
        for i in range(len(chain) - 1):
            merged = _merge_pair(chain[i], chain[i + 1])
            if merged is not None:
                chain[i : i + 2] = [merged]
                changed = True
                break
        else:
            kept = [c for c in chain if not _is_identity(c)]
            if len(kept) != len(chain):
                chain = kept
                changed = bool(chain)
    if not chain:
        return bundle_term({a: a for a in dom})
    return seq(*chain)


def _is_identity(t: NmtTerm) -> bool:
    mapping = bundle_map(t)
    return mapping is not None and all(a == b for a, b in mapping.items())


def _merge_pair(f: NmtTerm, g: NmtTerm) -> NmtTerm | None:
    fmap, gmap = bundle_map(f), bundle_map(g)
    if fmap is not None and gmap is not None:
        return bundle_term({a: gmap[b] for a, b in fmap.items()})
    if gmap is not None:
        # f ; π_B = π·f when π fixes dom f
        a, b = _infer(f)
        partial = {x: gmap[x] for x in b} | {x: x for x in a - b}
        if any(gmap[x] != x for x in a & b):
            return None
        pi = perm_extending(partial)
        return None if pi is None else perm_act_term(pi, f)
    if fmap is not None:
        # (π_A)⁻¹ ; g = π·g when π fixes cod g
        a, b = _infer(g)
        inverse = {y: x for x, y in fmap.items()}
        partial = {x: inverse[x] for x in a} | {x: x for x in b - a}
        if any(inverse[x] != x for x in a & b):
            return None
        pi = perm_extending(partial)
        return None if pi is None else perm_act_term(pi, g)
    return None


def _rename(t: NmtTerm, mapping: dict[Name, Name], key: Callable[[NmtTerm], str] | None = None) -> NmtTerm:
    pi = perm_extending(mapping)
    assert pi is not None
    return ac_normal(perm_act_term(pi, t), key)


def _erasing_key(hidden: NameSet) -> Callable[[NmtTerm], str]:
    def key(t: NmtTerm) -> str:
        return format_nmt(t, hide=hidden)

    return key


def canonical_form(t: NmtTerm, *, contract: bool = True, exhaustive: bool = True) -> NmtTerm:
    """Alpha-canonical representative of ``t``.

    Args:
        t: A well-typed term.
        contract: Also compose renaming chains and absorb them into generators.
        exhaustive: Minimise over all internal renamings when there are few
            internal names; otherwise a first-occurrence numbering is used.
    """
    t = _spell_internals(perm_act_term(FinPerm.identity(), t))
    if contract:
        t = _contract(t)
    t = freshen_internals(ac_normal(t))
    dom, cod = _infer(t)
    interface = dom | cod
    internal = sorted(names_in(t) - interface)
    if not internal:
        return ac_normal(t)
    targets = fresh_names(interface, len(internal))
    if exhaustive and len(internal) <= MAX_BRUTE_FORCE_INTERNALS:
        best: NmtTerm | None = None
        best_key = ""
        for image in itertools.permutations(targets):
            candidate = _rename(t, dict(zip(internal, image)))
            text = format_nmt(candidate)
            if best is None or text < best_key:
                best, best_key = candidate, text
        assert best is not None
        return best
    current = ac_normal(t, _erasing_key(frozenset(internal)))
    hidden = frozenset(internal)
    for _ in range(4):
        seen: list[Name] = []
        for a in names_in_order(current):
            if a in hidden and a not in seen:
                seen.append(a)
        renamed = _rename(current, dict(zip(seen, targets)))
        if renamed == current:
            break
        current, hidden = renamed, frozenset(targets)
    return current


def canonical_key(t: NmtTerm, *, contract: bool = True, exhaustive: bool = True) -> str:
    return format_nmt(canonical_form(t, contract=contract, exhaustive=exhaustive))


def alpha_eq(t: NmtTerm, u: NmtTerm, *, strict: bool = False) -> bool:
    """Diagrammatic alpha-equivalence, decided by canonicalisation.

    Args:
        t: First term.
        u: Second term.
        strict: Raise instead of returning False when the interfaces differ.

    Raises:
        TypeMismatch: Interfaces differ and ``strict`` is set.
    """
    if nmt_typecheck(t) != nmt_typecheck(u):
        if strict:
            raise TypeMismatch("terms have different interfaces")
        return False
    return canonical_key(t) == canonical_key(u)


# ---- Text ----


def format_nmt(t: NmtTerm, hide: NameSet | None = None) -> str:
    """Render in the ``id(a)``, ``d(a>b)``, ``label(a,b>c)``, ``|``, ``;``, ``(a b) t`` grammar.

    Names in ``hide`` print as ``_``; used for ordering keys only.
    """
    return _fmt(t, hide or frozenset())


@lru_cache(maxsize=131072)
def _fmt(t: NmtTerm, hide: NameSet) -> str:
    def n(a: Name) -> str:
        return "_" if a in hide else str(a)

    if isinstance(t, Empty):
        return "nil"
    if isinstance(t, IdName):
        return f"id({n(t.a)})"
    if isinstance(t, Delta):
        return f"d({n(t.a)}>{n(t.b)})"
    if isinstance(t, Gen):
        dom = ",".join(n(a) for a in t.inst.dom)
        cod = ",".join(n(b) for b in t.inst.cod)
        return f"{t.inst.label}({dom}>{cod})"
    if isinstance(t, Par):
        left, right = _fmt(t.left, hide), _fmt(t.right, hide)
        if isinstance(t.left, (Seq, Par)):
            left = f"({left})"
        if isinstance(t.right, Seq):
            right = f"({right})"
        return f"{left} | {right}"
    if isinstance(t, Seq):
        first = _fmt(t.first, hide)
        if isinstance(t.first, Seq):
            first = f"({first})"
        return f"{first} ; {_fmt(t.second, hide)}"
    if isinstance(t, PermApp):
        prefix = "".join(f"({n(a)} {n(b)})" for a, b in transpositions_of(t.perm))
        body = _fmt(t.body, hide)
        if isinstance(t.body, (Par, Seq)):
            body = f"({body})"
        return f"{prefix} {body}" if prefix else body
    raise TypeError(f"not an NMT term: {t!r}")


def format_names(names: Sequence[Name] | NameSet) -> str:
    """``{a, b}`` for sets (in name order), used by reports."""
    return _fmt_set(names)
