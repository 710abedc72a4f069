"""Translations between the ordered and nominal calculi, their round trips, and signature morphisms."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from nomdiag import nmt, semantics, smt
from nomdiag.constants import ORDINAL_PREFIX
from nomdiag.errors import ArityMismatch, DuplicateName, InterfaceMismatch, TermTypeError, TypeViolation
from nomdiag.names import FreshSupply, Name, NameSet, as_name, enumerate_names
from nomdiag.smt import SmtSignature, Theory

logger = logging.getLogger(__name__)

Enumeration = Callable[[Iterable[Name]], list[Name]]


def default_enumeration(names: Iterable[Name]) -> list[Name]:
    """Name order."""
    return enumerate_names(names)


def ordinal_names(n: int) -> list[Name]:
    """``_p0 .. _p(n-1)``, the names standing for positions of an ordered interface."""
    return [Name(ORDINAL_PREFIX, i) for i in range(n)]


def builtin_signature() -> SmtSignature:
    """Every built-in generator, for typing terms whose theory is not given."""
    return smt.smt_theory_signature(Theory.R)


def _enumerate(e: Enumeration, names: NameSet) -> list[Name]:
    listed = list(e(names))
    if len(listed) != len(names) or set(listed) != names:
        raise InterfaceMismatch(f"enumeration {listed} does not list {nmt.format_names(names)}")
    return listed


def _distinct(names: Sequence[Name | str], what: str) -> list[Name]:
    listed = [as_name(a) for a in names]
    if len(set(listed)) != len(listed):
        raise DuplicateName(f"{what} list {', '.join(map(str, listed))} repeats a name")
    return listed


# ---- Ordered to nominal ----


def nom_term(
    t: smt.SmtTerm,
    dom: Sequence[Name | str],
    cod: Sequence[Name | str],
    sig: SmtSignature | None = None,
    *,
    avoid: Iterable[Name] = (),
) -> nmt.NmtTerm:
    """Name the wires of an ordered term.

    Inputs are named along ``dom`` and outputs along ``cod``; the wires
    between composed parts get machine-fresh names.

    Args:
        t: Ordered term.
        dom: Names for the input positions, one per position.
        cod: Names for the output positions.
        sig: Signature for typing generators (defaults to the built-in ones).
        avoid: Names the fresh middle wires must not reuse.

    Raises:
        ArityMismatch: A list has the wrong length.
        DuplicateName: A list repeats a name.
    """
    sig = sig or builtin_signature()
    a, b = _distinct(dom, "domain"), _distinct(cod, "codomain")
    m, n = smt.smt_typecheck(t, sig)
    if (len(a), len(b)) != (m, n):
        raise ArityMismatch(f"term has type {m} -> {n} but got {len(a)} -> {len(b)} names")
    return _nom(t, a, b, sig, FreshSupply([*a, *b, *avoid]))


def _nom(t: smt.SmtTerm, a: list[Name], b: list[Name], sig: SmtSignature, supply: FreshSupply) -> nmt.NmtTerm:
    if isinstance(t, smt.Unit):
        return nmt.Empty()
    if isinstance(t, smt.Id):
        return nmt.Delta(a[0], b[0])
    if isinstance(t, smt.Sym):
        return nmt.Par(nmt.Delta(a[0], b[1]), nmt.Delta(a[1], b[0]))
    if isinstance(t, smt.Gen):
        return nmt.Gen(nmt.GenInstance(t.label, tuple(a), tuple(b)))
    if isinstance(t, smt.Par):
        m1, n1 = smt.smt_typecheck(t.left, sig)
        return nmt.Par(_nom(t.left, a[:m1], b[:n1], sig, supply), _nom(t.right, a[m1:], b[n1:], sig, supply))
    if isinstance(t, smt.Seq):
        _, k = smt.smt_typecheck(t.first, sig)
        middle = [supply.take() for _ in range(k)]
        return nmt.Seq(_nom(t.first, a, middle, sig, supply), _nom(t.second, middle, b, sig, supply))
    raise TypeError(f"not an SMT term: {t!r}")


# ---- Nominal to ordered ----


def _align(source: list[Name], target: list[Name]) -> smt.SmtTerm | None:
    """Wiring carrying each name's position in ``source`` to its position in ``target``."""
    where = {x: j for j, x in enumerate(target)}
    images = [where[x] for x in source]
    if images == list(range(len(images))):
        return None
    return smt.wiring_from_images(images)


def _framed(pre: smt.SmtTerm | None, body: smt.SmtTerm, post: smt.SmtTerm | None) -> smt.SmtTerm:
    return smt.seq(*[part for part in (pre, body, post) if part is not None])


def ord_term(t: nmt.NmtTerm, enumeration: Enumeration | None = None) -> smt.SmtTerm:
    """Forget the names of a nominal term, reading interfaces along ``enumeration``.

    The result read along the enumerations of ``dom t`` and ``cod t`` has
    the same meaning as ``t``; generator instances are conjugated by the
    wirings that put their names in enumeration order.

    Args:
        t: Well-typed nominal term.
        enumeration: Lists each interface; name order by default.
    """
    e = enumeration or default_enumeration
    nmt.nmt_typecheck(t)
    return _ord(t, e)


def _ord(t: nmt.NmtTerm, e: Enumeration) -> smt.SmtTerm:
    if isinstance(t, nmt.Empty):
        return smt.Unit()
    if isinstance(t, (nmt.IdName, nmt.Delta)):
        return smt.Id()
    if isinstance(t, nmt.Gen):
        inst = t.inst
        return _framed(
            _align(_enumerate(e, frozenset(inst.dom)), list(inst.dom)),
            smt.Gen(inst.label),
            _align(list(inst.cod), _enumerate(e, frozenset(inst.cod))),
        )
    if isinstance(t, nmt.Par):
        (a_l, b_l), (a_r, b_r) = nmt.nmt_typecheck(t.left), nmt.nmt_typecheck(t.right)
        split_dom = _enumerate(e, a_l) + _enumerate(e, a_r)
        split_cod = _enumerate(e, b_l) + _enumerate(e, b_r)
        return _framed(
            _align(_enumerate(e, a_l | a_r), split_dom),
            smt.Par(_ord(t.left, e), _ord(t.right, e)),
            _align(split_cod, _enumerate(e, b_l | b_r)),
        )
    if isinstance(t, nmt.Seq):
        return smt.Seq(_ord(t.first, e), _ord(t.second, e))
    if isinstance(t, nmt.PermApp):
        return _ord(nmt.conjugation_form(t.perm, t.body), e)
    raise TypeError(f"not an NMT term: {t!r}")


# ---- Round trips ----


def delta_round(t: smt.SmtTerm, sig: SmtSignature | None = None) -> smt.SmtTerm:
    """Ordered term to nominal along ordinal names and back."""
    m, n = smt.smt_typecheck(t, sig or builtin_signature())
    named = nom_term(t, ordinal_names(m), ordinal_names(n), sig)
    return ord_term(named)


def gamma_round(t: nmt.NmtTerm, enumeration: Enumeration | None = None) -> nmt.NmtTerm:
    """Nominal term to ordered and back along the enumerations of its interfaces."""
    e = enumeration or default_enumeration
    a, b = nmt.nmt_typecheck(t)
    sig = _signature_of(t)
    return nom_term(ord_term(t, e), _enumerate(e, a), _enumerate(e, b), sig)


def _instances(t: nmt.NmtTerm) -> Iterable[tuple[str, int, int]]:
    if isinstance(t, nmt.Gen):
        yield t.inst.label, len(t.inst.dom), len(t.inst.cod)
    elif isinstance(t, nmt.Par):
        yield from _instances(t.left)
        yield from _instances(t.right)
    elif isinstance(t, nmt.Seq):
        yield from _instances(t.first)
        yield from _instances(t.second)
    elif isinstance(t, nmt.PermApp):
        yield from _instances(t.body)


def _signature_of(t: nmt.NmtTerm) -> SmtSignature:
    generators: dict[str, tuple[int, int]] = {}
    for label, m, n in _instances(t):
        generators.setdefault(label, (m, n))
    return SmtSignature(generators)


# ---- Signature morphisms ----


@dataclass(frozen=True)
class SigMorphism:
    """Generator-wise assignment of ordered terms, identity on objects.

    Raises:
        TypeViolation: An image is missing, ill-typed, or of the wrong arity.
    """

    source: SmtSignature
    target: SmtSignature
    images: dict[str, smt.SmtTerm] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for label, arity in self.source.generators.items():
            image = self.images.get(label)
            if image is None:
                raise TypeViolation(f"no image for generator {label!r}")
            try:
                found = smt.smt_typecheck(image, self.target)
            except TermTypeError as exc:
                raise TypeViolation(f"image of {label!r} is ill-typed: {exc}") from exc
            if found != arity:
                raise TypeViolation(f"image of {label!r} has type {found[0]} -> {found[1]}, expected {arity[0]} -> {arity[1]}")

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(sorted((k, str(v)) for k, v in self.images.items()))))

    @classmethod
    def identity(cls, sig: SmtSignature) -> SigMorphism:
        return cls(sig, sig, {label: smt.Gen(label) for label in sig.generators})

    def then(self, other: SigMorphism) -> SigMorphism:
        """``other ∘ self``."""
        return SigMorphism(
            self.source,
            other.target,
            {label: transport_morphism(other, image) for label, image in self.images.items()},
        )


def transport_morphism(f: SigMorphism, t: smt.SmtTerm) -> smt.SmtTerm:
    """Replace every generator of ``t`` by its image."""
    if isinstance(t, smt.Gen):
        image = f.images.get(t.label)
        if image is None:
            raise TypeViolation(f"generator {t.label!r} is outside the morphism's source")
        return image
    if isinstance(t, smt.Par):
        return smt.Par(transport_morphism(f, t.left), transport_morphism(f, t.right))
    if isinstance(t, smt.Seq):
        return smt.Seq(transport_morphism(f, t.first), transport_morphism(f, t.second))
    return t


def transport_nominal(f: SigMorphism, t: nmt.NmtTerm) -> nmt.NmtTerm:
    """Replace every generator instance by the image named along the instance's lists."""
    return _transport(f, t, nmt.names_in(t))


def _transport(f: SigMorphism, t: nmt.NmtTerm, avoid: NameSet) -> nmt.NmtTerm:
    if isinstance(t, nmt.Gen):
        image = f.images.get(t.inst.label)
        if image is None:
            raise TypeViolation(f"generator {t.inst.label!r} is outside the morphism's source")
        return nom_term(image, t.inst.dom, t.inst.cod, f.target, avoid=avoid)
    if isinstance(t, nmt.Par):
        return nmt.Par(_transport(f, t.left, avoid), _transport(f, t.right, avoid))
    if isinstance(t, nmt.Seq):
        return nmt.Seq(_transport(f, t.first, avoid), _transport(f, t.second, avoid))
    if isinstance(t, nmt.PermApp):
        return _transport(f, nmt.perm_act_term(t.perm, t.body), avoid)
    return t


# ---- Derived equations ----


Term = Union[nmt.NmtTerm, smt.SmtTerm]


@dataclass(frozen=True)
class DerivedEquation:
    name: str
    lhs: Term
    rhs: Term
    holds: bool


def _same(lhs: Term, rhs: Term) -> bool:
    if isinstance(lhs, nmt.NmtTerm):
        return semantics.nmt_eq(lhs, rhs, Theory.FREE)
    return semantics.eval_smt(lhs, Theory.FREE) == semantics.eval_smt(rhs, Theory.FREE)


def derived_equations() -> list[DerivedEquation]:
    """Equations between translated identities and symmetries, each checked by evaluation."""
    a, b, c, d = (Name(x) for x in "abcd")
    one, two = smt.Id(), smt.smt_id(2)
    cases: list[tuple[str, Term, Term]] = [
        ("nom-of-ord-identity", gamma_round(nmt.IdName(a)), nmt.IdName(a)),
        ("ord-of-nom-identity", ord_term(nom_term(one, [a], [a])), one),
        ("renaming-chain", nmt.Seq(nom_term(one, [a], [b]), nom_term(one, [b], [c])), nom_term(one, [a], [c])),
        (
            "renaming-split",
            nom_term(two, [a, c], [b, d]),
            nmt.Par(nom_term(one, [a], [b]), nom_term(one, [c], [d])),
        ),
        ("symmetry-absorption", nom_term(smt.Sym(), [a, b], [c, d]), nom_term(two, [a, b], [d, c])),
    ]
    result = [DerivedEquation(name, lhs, rhs, _same(lhs, rhs)) for name, lhs, rhs in cases]
    logger.debug("derived equations checked=%d failing=%d", len(result), sum(not e.holds for e in result))
    return result
