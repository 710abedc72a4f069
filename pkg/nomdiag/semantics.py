"""Evaluation into finite maps and relations, canonical readback, and substitution application."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

from nomdiag import nmt, smt
from nomdiag.constants import LABEL_COMULT, LABEL_COUNIT, LABEL_MULT, LABEL_UNIT
from nomdiag.errors import (
    InterfaceMismatch,
    KindMismatch,
    NameNotInDomain,
    OverlapError,
    TypeMismatch,
    UnsupportedGenerator,
)
from nomdiag.names import FinPerm, FreshSupply, Name, NameSet, as_name, enumerate_names, perm_apply_set
from nomdiag.smt import THEORY_GENERATORS, Theory

logger = logging.getLogger(__name__)


class Kind(str, Enum):
    """Classes of arrows, from bijections up to relations."""

    BIJ = "bij"
    INJ = "inj"
    SURJ = "surj"
    FUN = "fun"
    PFUN = "pfun"
    REL = "rel"

    @property
    def constraints(self) -> frozenset[str]:
        return _CONSTRAINTS[self]

    def join(self, other: Kind) -> Kind:
        """Smallest kind containing both."""
        common = self.constraints & other.constraints
        return next(k for k, c in _CONSTRAINTS.items() if c == common)


_CONSTRAINTS: dict[Kind, frozenset[str]] = {
    Kind.BIJ: frozenset({"total", "functional", "injective", "surjective"}),
    Kind.INJ: frozenset({"total", "functional", "injective"}),
    Kind.SURJ: frozenset({"total", "functional", "surjective"}),
    Kind.FUN: frozenset({"total", "functional"}),
    Kind.PFUN: frozenset({"functional"}),
    Kind.REL: frozenset(),
}

THEORY_KINDS: dict[str, Kind] = {
    "B": Kind.BIJ,
    "I": Kind.INJ,
    "S": Kind.SURJ,
    "F": Kind.FUN,
    "P": Kind.PFUN,
    "R": Kind.REL,
    "free": Kind.REL,
}


def theory_kind(theory: Theory | str) -> Kind:
    return THEORY_KINDS[Theory(theory).ordered.value]


def _violations(dom: Iterable[object], cod: Iterable[object], pairs: frozenset[tuple], kind: Kind) -> list[str]:
    out: dict[object, int] = {x: 0 for x in dom}
    inc: dict[object, int] = {y: 0 for y in cod}
    for x, y in pairs:
        out[x] += 1
        inc[y] += 1
    problems = []
    constraints = kind.constraints
    if "total" in constraints and any(v == 0 for v in out.values()):
        problems.append("not total")
    if "functional" in constraints and any(v > 1 for v in out.values()):
        problems.append("not functional")
    if "injective" in constraints and any(v > 1 for v in inc.values()):
        problems.append("not injective")
    if "surjective" in constraints and any(v == 0 for v in inc.values()):
        problems.append("not surjective")
    return problems


def _compose_pairs(first: frozenset[tuple], second: frozenset[tuple]) -> frozenset[tuple]:
    forward: dict[object, list[object]] = {}
    for y, z in second:
        forward.setdefault(y, []).append(z)
    return frozenset((x, z) for x, y in first for z in forward.get(y, ()))


@dataclass(frozen=True)
class SemMap:
    """A relation between finite name sets, tagged with the class it is meant to lie in.

    Equality ignores ``kind``: two maps are equal when their interfaces and
    graphs are.

    Raises:
        InterfaceMismatch: A pair lies outside ``dom × cod``.
        KindMismatch: The graph violates the constraints of ``kind``.
    """

    dom: NameSet
    cod: NameSet
    pairs: frozenset[tuple[Name, Name]]
    kind: Kind = field(default=Kind.REL, compare=False)

    def __post_init__(self) -> None:
        for x, y in self.pairs:
            if x not in self.dom or y not in self.cod:
                raise InterfaceMismatch(f"pair ({x}, {y}) outside the interfaces")
        problems = _violations(self.dom, self.cod, self.pairs, self.kind)
        if problems:
            raise KindMismatch(f"map is {', '.join(problems)} but declared {self.kind.value}")

    @classmethod
    def build(
        cls,
        dom: Iterable[Name | str],
        cod: Iterable[Name | str],
        pairs: Iterable[tuple[Name | str, Name | str]],
        kind: Kind | str = Kind.REL,
    ) -> SemMap:
        return cls(
            frozenset(as_name(a) for a in dom),
            frozenset(as_name(b) for b in cod),
            frozenset((as_name(a), as_name(b)) for a, b in pairs),
            Kind(kind),
        )

    @classmethod
    def identity(cls, names: Iterable[Name], kind: Kind = Kind.BIJ) -> SemMap:
        names = frozenset(names)
        return cls(names, names, frozenset((a, a) for a in names), kind)

    def satisfies(self, kind: Kind) -> bool:
        return not _violations(self.dom, self.cod, self.pairs, kind)

    def with_kind(self, kind: Kind) -> SemMap:
        return SemMap(self.dom, self.cod, self.pairs, kind)

    def act(self, p: FinPerm) -> SemMap:
        """Pointwise permutation action on interfaces and graph."""
        return SemMap(
            perm_apply_set(p, self.dom),
            perm_apply_set(p, self.cod),
            frozenset((p(a), p(b)) for a, b in self.pairs),
            self.kind,
        )

    def image(self, a: Name) -> list[Name]:
        return sorted(b for x, b in self.pairs if x == a)

    def sorted_pairs(self) -> list[tuple[Name, Name]]:
        return sorted(self.pairs)

    def __str__(self) -> str:
        body = ", ".join(f"{a}->{b}" for a, b in self.sorted_pairs())
        return f"{self.kind.value} {nmt.format_names(self.dom)} -> {nmt.format_names(self.cod)} [{body}]"


@dataclass(frozen=True)
class OrdSem:
    """A relation between ordinals ``m`` and ``n``; positions are 0-based."""

    m: int
    n: int
    pairs: frozenset[tuple[int, int]]
    kind: Kind = field(default=Kind.REL, compare=False)

    def __post_init__(self) -> None:
        for i, j in self.pairs:
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise InterfaceMismatch(f"pair ({i}, {j}) outside {self.m} -> {self.n}")
        problems = _violations(range(self.m), range(self.n), self.pairs, self.kind)
        if problems:
            raise KindMismatch(f"map is {', '.join(problems)} but declared {self.kind.value}")

    def satisfies(self, kind: Kind) -> bool:
        return not _violations(range(self.m), range(self.n), self.pairs, kind)

    def __str__(self) -> str:
        body = ", ".join(f"{i}->{j}" for i, j in sorted(self.pairs))
        return f"{self.kind.value} {self.m} -> {self.n} [{body}]"


# ---- Composition and tensor ----


def compose_sem(f: SemMap, g: SemMap) -> SemMap:
    """Relational composition ``f ; g``.

    Raises:
        InterfaceMismatch: ``cod f`` differs from ``dom g``.
    """
    if f.cod != g.dom:
        raise InterfaceMismatch(
            f"cannot compose {nmt.format_names(f.cod)} with {nmt.format_names(g.dom)}"
        )
    return SemMap(f.dom, g.cod, _compose_pairs(f.pairs, g.pairs), f.kind.join(g.kind))


def tensor_sem(f: SemMap, g: SemMap) -> SemMap:
    """Disjoint union of graphs.

    Raises:
        OverlapError: The domains or the codomains intersect.
    """
    if not f.dom.isdisjoint(g.dom) or not f.cod.isdisjoint(g.cod):
        raise OverlapError("tensor of maps with overlapping interfaces")
    return SemMap(f.dom | g.dom, f.cod | g.cod, f.pairs | g.pairs, f.kind.join(g.kind))


def separated_arrows(f: SemMap, g: SemMap) -> bool:
    """True iff the full supports ``dom ∪ cod`` of the two maps are disjoint."""
    return (f.dom | f.cod).isdisjoint(g.dom | g.cod)


def compose_ord(f: OrdSem, g: OrdSem) -> OrdSem:
    if f.n != g.m:
        raise InterfaceMismatch(f"cannot compose {f.n} outputs with {g.m} inputs")
    return OrdSem(f.m, g.n, _compose_pairs(f.pairs, g.pairs), f.kind.join(g.kind))


def tensor_ord(f: OrdSem, g: OrdSem) -> OrdSem:
    shifted = frozenset((i + f.m, j + f.n) for i, j in g.pairs)
    return OrdSem(f.m + g.m, f.n + g.n, f.pairs | shifted, f.kind.join(g.kind))


def to_positions(s: SemMap, dom: Sequence[Name], cod: Sequence[Name]) -> OrdSem:
    """Read a named map along enumerations of its interfaces."""
    if set(dom) != s.dom or set(cod) != s.cod:
        raise InterfaceMismatch("enumerations do not match the interfaces")
    di = {a: i for i, a in enumerate(dom)}
    ci = {b: j for j, b in enumerate(cod)}
    return OrdSem(len(dom), len(cod), frozenset((di[a], ci[b]) for a, b in s.pairs), s.kind)


# ---- Evaluation ----


def _generators(theory: Theory) -> dict[str, tuple[int, int]]:
    if theory is Theory.FREE:
        return {}
    return THEORY_GENERATORS[theory.ordered.value]


def eval_nmt(t: nmt.NmtTerm, theory: Theory | str) -> SemMap:
    """Evaluate a nominal term homomorphically.

    Raises:
        UnsupportedGenerator: A generator is not in the theory.
        OverlapError, SeqMismatch: The term is ill-typed.
    """
    theory = Theory(theory)
    nmt.nmt_typecheck(t)
    return _eval_nmt(t, theory)


@lru_cache(maxsize=65536)
def _eval_nmt(t: nmt.NmtTerm, theory: Theory) -> SemMap:
    kind = theory_kind(theory)
    if isinstance(t, nmt.Empty):
        return SemMap(frozenset(), frozenset(), frozenset(), kind)
    if isinstance(t, nmt.IdName):
        return SemMap.identity({t.a}, kind)
    if isinstance(t, nmt.Delta):
        return SemMap(frozenset({t.a}), frozenset({t.b}), frozenset({(t.a, t.b)}), kind)
    if isinstance(t, nmt.Gen):
        inst = t.inst
        arity = _generators(theory).get(inst.label)
        if arity is None:
            raise UnsupportedGenerator(f"generator {inst.label!r} is not part of theory {theory.value}")
        if arity != (len(inst.dom), len(inst.cod)):
            raise TypeMismatch(f"{inst.label} expects {arity[0]} -> {arity[1]} names")
        pairs = frozenset((a, b) for a in inst.dom for b in inst.cod)
        return SemMap(frozenset(inst.dom), frozenset(inst.cod), pairs, kind)
    if isinstance(t, nmt.Par):
        return tensor_sem(_eval_nmt(t.left, theory), _eval_nmt(t.right, theory))
    if isinstance(t, nmt.Seq):
        return compose_sem(_eval_nmt(t.first, theory), _eval_nmt(t.second, theory))
    if isinstance(t, nmt.PermApp):
        return _eval_nmt(nmt.perm_act_term(t.perm, t.body), theory)
    raise TypeError(f"not an NMT term: {t!r}")


def eval_smt(t: smt.SmtTerm, theory: Theory | str) -> OrdSem:
    """Evaluate an ordered term; ``Sym`` is the swap of two positions.

    Raises:
        UnsupportedGenerator: A generator is not in the theory.
    """
    theory = Theory(theory)
    return _eval_smt(t, theory)


@lru_cache(maxsize=65536)
def _eval_smt(t: smt.SmtTerm, theory: Theory) -> OrdSem:
    kind = theory_kind(theory)
    if isinstance(t, smt.Unit):
        return OrdSem(0, 0, frozenset(), kind)
    if isinstance(t, smt.Id):
        return OrdSem(1, 1, frozenset({(0, 0)}), kind)
    if isinstance(t, smt.Sym):
        return OrdSem(2, 2, frozenset({(0, 1), (1, 0)}), kind)
    if isinstance(t, smt.Gen):
        arity = _generators(theory).get(t.label)
        if arity is None:
            raise UnsupportedGenerator(f"generator {t.label!r} is not part of theory {theory.value}")
        m, n = arity
        return OrdSem(m, n, frozenset((i, j) for i in range(m) for j in range(n)), kind)
    if isinstance(t, smt.Par):
        return tensor_ord(_eval_smt(t.left, theory), _eval_smt(t.right, theory))
    if isinstance(t, smt.Seq):
        return compose_ord(_eval_smt(t.first, theory), _eval_smt(t.second, theory))
    raise TypeError(f"not an SMT term: {t!r}")


# ---- Readback ----


def _component_key(t: nmt.NmtTerm) -> tuple[list[Name], list[Name]]:
    a, b = nmt.nmt_typecheck(t)
    return enumerate_names(a), enumerate_names(b)


def _components(terms: list[nmt.NmtTerm]) -> nmt.NmtTerm:
    return nmt.par(*sorted(terms, key=_component_key))


def _merge_tree(inputs: list[Name], target: Name, supply: FreshSupply) -> nmt.NmtTerm:
    if len(inputs) == 2:
        return nmt.gen(LABEL_MULT, inputs, [target])
    middle = supply.take()
    head = nmt.Par(_merge_tree(inputs[:-1], middle, supply), nmt.IdName(inputs[-1]))
    return nmt.Seq(head, nmt.gen(LABEL_MULT, [middle, inputs[-1]], [target]))


def _copy_tree(source: Name, outputs: list[Name], supply: FreshSupply) -> nmt.NmtTerm:
    if len(outputs) == 2:
        return nmt.gen(LABEL_COMULT, [source], outputs)
    middle = supply.take()
    tail = nmt.Par(_copy_tree(middle, outputs[:-1], supply), nmt.IdName(outputs[-1]))
    return nmt.Seq(nmt.gen(LABEL_COMULT, [source], [middle, outputs[-1]]), tail)


def readback_nmt(s: SemMap, theory: Theory | str) -> nmt.NmtTerm:
    """Canonical term denoting ``s``.

    Codomain names are visited in name order: unreached ones get a unit,
    single preimages a renaming, several preimages a left-nested merge tree.
    Dropped domain names get a counit. Only when some name is copied is a
    separate copy layer of left-nested comultiplication trees put in front.
    Intermediate wires are machine-fresh names numbered in traversal order.

    Raises:
        KindMismatch: ``s`` is not in the theory's class.
    """
    theory = Theory(theory)
    kind = theory_kind(theory)
    if not s.satisfies(kind):
        raise KindMismatch(f"map is not a {kind.value} arrow")
    supply = FreshSupply(s.dom | s.cod)
    dom = enumerate_names(s.dom)
    cod = enumerate_names(s.cod)
    out = {a: s.image(a) for a in dom}
    inc = {b: sorted(a for a, y in s.pairs if y == b) for b in cod}
    copying = any(len(v) >= 2 for v in out.values())

    wire: dict[tuple[Name, Name], Name] = {}
    first_layer: list[nmt.NmtTerm] = []
    discards = [nmt.gen(LABEL_COUNIT, [a], []) for a in dom if not out[a]]
    if copying:
        for a in dom:
            if len(out[a]) == 1:
                wire[(a, out[a][0])] = a
                first_layer.append(nmt.IdName(a))
            elif len(out[a]) >= 2:
                outputs = [supply.take() for _ in out[a]]
                wire.update({(a, b): w for b, w in zip(out[a], outputs)})
                first_layer.append(_copy_tree(a, outputs, supply))
        first_layer.extend(discards)
    else:
        wire = {(a, b): a for a, b in s.pairs}

    second_layer: list[nmt.NmtTerm] = []
    for b in cod:
        inputs = [wire[(a, b)] for a in inc[b]]
        if not inputs:
            second_layer.append(nmt.gen(LABEL_UNIT, [], [b]))
        elif len(inputs) == 1:
            second_layer.append(nmt.Delta(inputs[0], b))
        else:
            second_layer.append(_merge_tree(inputs, b, supply))
    if not copying:
        return _components(second_layer + discards)
    return nmt.Seq(_components(first_layer), _components(second_layer))


def normalize_nmt(t: nmt.NmtTerm, theory: Theory | str) -> nmt.NmtTerm:
    """``readback(eval(t))``."""
    return readback_nmt(eval_nmt(t, theory), theory)


def nmt_eq(t: nmt.NmtTerm, u: nmt.NmtTerm, theory: Theory | str, *, strict: bool = False) -> bool:
    """Decide equality in a built-in theory by comparing denotations.

    Args:
        t: First term.
        u: Second term.
        theory: Theory to decide in.
        strict: Raise instead of returning False when the interfaces differ.

    Raises:
        TypeMismatch: Interfaces differ and ``strict`` is set.
    """
    if nmt.nmt_typecheck(t) != nmt.nmt_typecheck(u):
        if strict:
            raise TypeMismatch("terms have different interfaces")
        logger.debug("nmt_eq interfaces differ verdict=not-equal")
        return False
    return eval_nmt(t, theory) == eval_nmt(u, theory)


# ---- Substitutions ----


def apply_subst(s: SemMap, targets: Iterable[Name | str]) -> list[Name]:
    """Pointwise image of ``targets`` under a total function.

    Raises:
        KindMismatch: ``s`` is not a total function.
        NameNotInDomain: A target is outside ``dom s``.
    """
    if not s.satisfies(Kind.FUN):
        raise KindMismatch("substitution must be a total function")
    result = []
    for target in targets:
        a = as_name(target)
        if a not in s.dom:
            raise NameNotInDomain(f"{a} is not in the domain {nmt.format_names(s.dom)}")
        result.append(s.image(a)[0])
    return result


def subst_from_pairs(pairs: Iterable[tuple[Name | str, Name | str]]) -> nmt.NmtTerm:
    """``[a↦b, c↦d, ...]`` as a tensor of renamings.

    Raises:
        OverlapError: Two pairs share a source or a target.
    """
    term = nmt.par(*[nmt.delta(a, b) for a, b in pairs])
    nmt.nmt_typecheck(term)
    return term
