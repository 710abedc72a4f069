"""Ordered (PROP) terms: syntax, typing, identities, block symmetries and theory signatures."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Union

from nomdiag.constants import LABEL_COMULT, LABEL_COUNIT, LABEL_MULT, LABEL_UNIT
from nomdiag.errors import NotAPermutationTerm, SeqMismatch, UnknownGenerator

logger = logging.getLogger(__name__)


class Theory(str, Enum):
    """The built-in theories; ``n``-prefixed members are the nominal ones."""

    B = "B"
    I = "I"  # noqa: E741
    S = "S"
    F = "F"
    P = "P"
    R = "R"
    NB = "nB"
    NI = "nI"
    NS = "nS"
    NF = "nF"
    NP = "nP"
    NR = "nR"
    FREE = "free"

    @property
    def is_nominal(self) -> bool:
        return self.value.startswith("n")

    @property
    def ordered(self) -> Theory:
        """The ordered counterpart (``nF`` -> ``F``)."""
        return Theory(self.value[1:]) if self.is_nominal else self

    @property
    def nominal(self) -> Theory:
        """The nominal counterpart (``F`` -> ``nF``)."""
        if self is Theory.FREE or self.is_nominal:
            return self
        return Theory("n" + self.value)

    @classmethod
    def parse(cls, text: str) -> Theory:
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown theory {text!r}") from None


# Generator arities per ordered theory; nominal theories share the same table.
THEORY_GENERATORS: dict[str, dict[str, tuple[int, int]]] = {
    "B": {},
    "I": {LABEL_UNIT: (0, 1)},
    "S": {LABEL_MULT: (2, 1)},
    "F": {LABEL_UNIT: (0, 1), LABEL_MULT: (2, 1)},
    "P": {LABEL_UNIT: (0, 1), LABEL_MULT: (2, 1), LABEL_COUNIT: (1, 0)},
    "R": {LABEL_UNIT: (0, 1), LABEL_MULT: (2, 1), LABEL_COUNIT: (1, 0), LABEL_COMULT: (1, 2)},
}


@dataclass(frozen=True)
class SmtSignature:
    """Generators with arity and coarity."""

    generators: dict[str, tuple[int, int]] = field(default_factory=dict)
    theory_id: Theory = Theory.FREE

    def __hash__(self) -> int:
        return hash((self.theory_id, tuple(sorted(self.generators.items()))))


def smt_theory_signature(theory: Theory | str) -> SmtSignature:
    theory = Theory(theory).ordered
    if theory is Theory.FREE:
        return SmtSignature({}, Theory.FREE)
    return SmtSignature(dict(THEORY_GENERATORS[theory.value]), theory)


class SmtTerm:
    """Base class of ordered term nodes."""

    def __str__(self) -> str:
        return format_smt(self)


@dataclass(frozen=True)
class Gen(SmtTerm):
    label: str


@dataclass(frozen=True)
class Id(SmtTerm):
    pass


@dataclass(frozen=True)
class Sym(SmtTerm):
    pass


@dataclass(frozen=True)
class Unit(SmtTerm):
    """The 0 -> 0 tensor unit."""


@dataclass(frozen=True)
class Par(SmtTerm):
    left: SmtTerm
    right: SmtTerm


@dataclass(frozen=True)
class Seq(SmtTerm):
    first: SmtTerm
    second: SmtTerm


AnySmt = Union[Gen, Id, Sym, Unit, Par, Seq]


# ---- Flattened views ----


def par_children(t: SmtTerm) -> list[SmtTerm]:
    """Tensor factors left to right, units dropped."""
    if isinstance(t, Par):
        return par_children(t.left) + par_children(t.right)
    if isinstance(t, Unit):
        return []
    return [t]


def seq_children(t: SmtTerm) -> list[SmtTerm]:
    if isinstance(t, Seq):
        return seq_children(t.first) + seq_children(t.second)
    return [t]


def par(*terms: SmtTerm) -> SmtTerm:
    """Right-nested tensor; ``par()`` is the unit."""
    factors = [f for t in terms for f in par_children(t)]
    if not factors:
        return Unit()
    result = factors[-1]
    for f in reversed(factors[:-1]):
        result = Par(f, result)
    return result


def seq(*terms: SmtTerm) -> SmtTerm:
    """Right-nested composition of one or more terms."""
    if not terms:
        raise ValueError("seq() needs at least one term")
    chain = [c for t in terms for c in seq_children(t)]
    result = chain[-1]
    for c in reversed(chain[:-1]):
        result = Seq(c, result)
    return result


def ac_normal(t: SmtTerm) -> SmtTerm:
    """Flatten both compositions into right-nested form and drop tensor units."""
    if isinstance(t, Par):
        return par(*[ac_normal(c) for c in par_children(t)])
    if isinstance(t, Seq):
        return seq(*[ac_normal(c) for c in seq_children(t)])
    return t


def term_size(t: SmtTerm) -> int:
    """Number of leaves other than units."""
    if isinstance(t, Par):
        return term_size(t.left) + term_size(t.right)
    if isinstance(t, Seq):
        return term_size(t.first) + term_size(t.second)
    return 0 if isinstance(t, Unit) else 1


# ---- Typing ----


def smt_typecheck(t: SmtTerm, sig: SmtSignature | None = None) -> tuple[int, int]:
    """Arity and coarity of ``t``.

    Args:
        t: The term.
        sig: Signature for generator labels; ``None`` admits none.

    Raises:
        UnknownGenerator: A label is not in ``sig``.
        SeqMismatch: A composition's middle arities differ.
    """
    generators = sig.generators if sig is not None else {}
    return _typecheck(t, tuple(sorted(generators.items())))


@lru_cache(maxsize=65536)
def _typecheck(t: SmtTerm, generators: tuple[tuple[str, tuple[int, int]], ...]) -> tuple[int, int]:
    if isinstance(t, Id):
        return (1, 1)
    if isinstance(t, Sym):
        return (2, 2)
    if isinstance(t, Unit):
        return (0, 0)
    if isinstance(t, Gen):
        for label, arity in generators:
            if label == t.label:
                return arity
        raise UnknownGenerator(f"unknown generator {t.label!r}")
    if isinstance(t, Par):
        m1, n1 = _typecheck(t.left, generators)
        m2, n2 = _typecheck(t.right, generators)
        return (m1 + m2, n1 + n2)
    if isinstance(t, Seq):
        m1, n1 = _typecheck(t.first, generators)
        m2, n2 = _typecheck(t.second, generators)
        if n1 != m2:
            raise SeqMismatch(f"cannot compose {n1} outputs with {m2} inputs")
        return (m1, n2)
    raise TypeError(f"not an SMT term: {t!r}")


# ---- Identities and symmetries ----


def smt_id(n: int) -> SmtTerm:
    """``id_n`` as a right-nested tensor of ``Id``; ``Unit`` for ``n = 0``."""
    if n < 0:
        raise ValueError("arity must be non-negative")
    return par(*[Id() for _ in range(n)])


def smt_sym(m: int, n: int) -> SmtTerm:
    """Block symmetry ``m + n -> n + m`` built from ``Sym``, ``Id``, tensor and composition."""
    if m < 0 or n < 0:
        raise ValueError("arities must be non-negative")
    if m == 0 or n == 0:
        return smt_id(m + n)
    if m == 1:
        if n == 1:
            return Sym()
        return seq(par(Sym(), smt_id(n - 1)), par(Id(), smt_sym(1, n - 1)))
    return seq(par(Id(), smt_sym(m - 1, n)), par(smt_sym(1, n), smt_id(m - 1)))


def is_wiring(t: SmtTerm) -> bool:
    """True when ``t`` contains no generators."""
    if isinstance(t, Gen):
        return False
    if isinstance(t, Par):
        return is_wiring(t.left) and is_wiring(t.right)
    if isinstance(t, Seq):
        return is_wiring(t.first) and is_wiring(t.second)
    return True


def sym_as_permutation(t: SmtTerm) -> tuple[int, ...]:
    """The bijection computed by a wiring term, as ``images[i]`` for 0-based position ``i``.

    Raises:
        NotAPermutationTerm: ``t`` contains a generator.
        SeqMismatch: ``t`` is ill-typed.
    """
    if isinstance(t, Gen):
        raise NotAPermutationTerm(f"generator {t.label!r} in a wiring term")
    if isinstance(t, Id):
        return (0,)
    if isinstance(t, Sym):
        return (1, 0)
    if isinstance(t, Unit):
        return ()
    if isinstance(t, Par):
        left = sym_as_permutation(t.left)
        right = sym_as_permutation(t.right)
        return left + tuple(len(left) + i for i in right)
    if isinstance(t, Seq):
        first = sym_as_permutation(t.first)
        second = sym_as_permutation(t.second)
        if len(first) != len(second):
            raise SeqMismatch(f"cannot compose {len(first)} outputs with {len(second)} inputs")
        return tuple(second[first[i]] for i in range(len(first)))
    raise TypeError(f"not an SMT term: {t!r}")


def block_symmetry_images(m: int, n: int) -> tuple[int, ...]:
    """Images of the block symmetry ``m + n -> n + m``."""
    return tuple(i + n for i in range(m)) + tuple(range(n))


def wiring_from_images(images: Iterable[int]) -> SmtTerm:
    """A wiring term realising the given 0-based position bijection.

    Built as a bubble sort: adjacent transpositions, each a tensor of
    ``Id``s around one ``Sym``.
    """
    images = list(images)
    n = len(images)
    if sorted(images) != list(range(n)):
        raise ValueError(f"not a permutation: {images}")
    # current[p] = target of the wire now at position p
    current = list(images)
    layers: list[SmtTerm] = []
    changed = True
    while changed:
        changed = False
        for p in range(n - 1):
            if current[p] > current[p + 1]:
                current[p], current[p + 1] = current[p + 1], current[p]
                layers.append(par(smt_id(p), Sym(), smt_id(n - p - 2)))
                changed = True
    if not layers:
        return smt_id(n)
    return seq(*layers)


# ---- Text ----


def format_smt(t: SmtTerm) -> str:
    """Render in the ``id``/``sym``/``unit``/label, ``+``, ``;`` grammar."""
    return _fmt(t)


@lru_cache(maxsize=65536)
def _fmt(t: SmtTerm) -> str:
    if isinstance(t, Id):
        return "id"
    if isinstance(t, Sym):
        return "sym"
    if isinstance(t, Unit):
        return "unit"
    if isinstance(t, Gen):
        return t.label
    if isinstance(t, Par):
        left = _fmt(t.left)
        right = _fmt(t.right)
        if isinstance(t.left, (Seq, Par)):
            left = f"({left})"
        if isinstance(t.right, Seq):
            right = f"({right})"
        return f"{left} + {right}"
    if isinstance(t, Seq):
        first = _fmt(t.first)
        if isinstance(t.first, Seq):
            first = f"({first})"
        return f"{first} ; {_fmt(t.second)}"
    raise TypeError(f"not an SMT term: {t!r}")
