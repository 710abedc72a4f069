"""Atoms, finite permutations, support and separatedness."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator, Mapping

from nomdiag.constants import MACHINE_PREFIX
from nomdiag.errors import ParseError

logger = logging.getLogger(__name__)

_USER_NAME = re.compile(r"^([a-z][a-z0-9]*?)(0|[1-9][0-9]*)?$")
_MACHINE_NAME = re.compile(r"^(_[a-z]*)(0|[1-9][0-9]*)$")


@total_ordering
@dataclass(frozen=True)
class Name:
    """An atom: a lowercase base plus an optional numeric index.

    Names are ordered by base, then by index (a bare base sorts first), so
    ``a < a1 < a2 < b``. Bases starting with ``_`` are reserved for
    machine-generated names.
    """

    base: str
    index: int | None = None

    @classmethod
    def parse(cls, text: str, *, allow_machine: bool = True) -> Name:
        """Parse ``a``, ``x12`` or (when allowed) ``_3`` / ``_p0``.

        Raises:
            ParseError: If the text is not a valid name literal.
        """
        if text.startswith(MACHINE_PREFIX):
            m = _MACHINE_NAME.match(text)
            if not allow_machine or m is None:
                raise ParseError(f"reserved or malformed machine name {text!r}")
            return cls(m.group(1), int(m.group(2)))
        m = _USER_NAME.match(text)
        if m is None:
            raise ParseError(f"malformed name {text!r}")
        index = m.group(2)
        return cls(m.group(1), int(index) if index is not None else None)

    @property
    def is_machine(self) -> bool:
        return self.base.startswith(MACHINE_PREFIX)

    def sort_key(self) -> tuple[str, int]:
        return (self.base, -1 if self.index is None else self.index)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, Name):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return self.base if self.index is None else f"{self.base}{self.index}"

    def __repr__(self) -> str:
        return f"Name({str(self)!r})"


NameSet = frozenset[Name]


def as_name(value: Name | str) -> Name:
    """Coerce a string literal to a Name; Names pass through."""
    return value if isinstance(value, Name) else Name.parse(value)


def name_set(values: Iterable[Name | str] | str = ()) -> NameSet:
    """Build a NameSet from names, literals, or one whitespace/comma separated string."""
    if isinstance(values, str):
        values = [v for v in re.split(r"[\s,]+", values) if v]
    return frozenset(as_name(v) for v in values)


def name_list(values: Iterable[Name | str] | str = ()) -> list[Name]:
    """Like :func:`name_set` but keeps order and duplicates."""
    if isinstance(values, str):
        values = [v for v in re.split(r"[\s,]+", values) if v]
    return [as_name(v) for v in values]


def enumerate_names(names: Iterable[Name]) -> list[Name]:
    """Elements of a name set in the total name order."""
    return sorted(set(names))


def separated(a: Iterable[Name], b: Iterable[Name]) -> bool:
    """True iff the two name sets are disjoint."""
    return frozenset(a).isdisjoint(b)


def fresh_names(avoid: Iterable[Name], k: int, *, base: str = MACHINE_PREFIX) -> list[Name]:
    """Return ``k`` distinct machine names with the smallest indices not in ``avoid``."""
    return list(_fresh_iter(frozenset(avoid), base, k))


def _fresh_iter(avoid: frozenset[Name], base: str, k: int) -> Iterator[Name]:
    index = 0
    produced = 0
    while produced < k:
        candidate = Name(base, index)
        index += 1
        if candidate in avoid:
            continue
        produced += 1
        yield candidate


class FreshSupply:
    """Stateful supply of machine names for one construction (readback, freshening)."""

    def __init__(self, avoid: Iterable[Name] = (), base: str = MACHINE_PREFIX) -> None:
        self._avoid = set(avoid)
        self._base = base
        self._next = 0

    def take(self) -> Name:
        while Name(self._base, self._next) in self._avoid:
            self._next += 1
        name = Name(self._base, self._next)
        self._avoid.add(name)
        self._next += 1
        return name

    def avoid(self, names: Iterable[Name]) -> None:
        self._avoid.update(names)


@dataclass(frozen=True)
class FinPerm:
    """A finitely supported permutation, stored as its sorted non-fixed points."""

    moved: tuple[tuple[Name, Name], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[Name, Name]) -> FinPerm:
        """Build from a map; fixed points are dropped.

        Raises:
            ValueError: If the map is not a bijection on its key set.
        """
        pairs = {a: b for a, b in mapping.items() if a != b}
        if set(pairs) != set(pairs.values()):
            raise ValueError("mapping is not a permutation of its moved points")
        return cls(tuple(sorted(pairs.items())))

    @classmethod
    def identity(cls) -> FinPerm:
        return cls()

    def as_dict(self) -> dict[Name, Name]:
        return dict(self.moved)

    def __call__(self, a: Name) -> Name:
        for src, dst in self.moved:
            if src == a:
                return dst
        return a

    def __bool__(self) -> bool:
        return bool(self.moved)

    def __str__(self) -> str:
        if not self.moved:
            return "()"
        return "".join(f"({a} {b})" for a, b in transpositions_of(self))


def transposition(a: Name | str, b: Name | str) -> FinPerm:
    """Swap ``a`` and ``b``; the identity when they coincide."""
    a, b = as_name(a), as_name(b)
    if a == b:
        return FinPerm.identity()
    return FinPerm.from_mapping({a: b, b: a})


def perm_compose(p: FinPerm, q: FinPerm) -> FinPerm:
    """``p ∘ q``: apply ``q`` first, then ``p``."""
    points = {a for a, _ in p.moved} | {a for a, _ in q.moved}
    return FinPerm.from_mapping({x: p(q(x)) for x in points})


def perm_inverse(p: FinPerm) -> FinPerm:
    return FinPerm.from_mapping({b: a for a, b in p.moved})


def perm_apply_set(p: FinPerm, names: Iterable[Name]) -> NameSet:
    return frozenset(p(a) for a in names)


def perm_support(p: FinPerm) -> NameSet:
    return frozenset(a for a, _ in p.moved)


def transpositions_of(p: FinPerm) -> list[tuple[Name, Name]]:
    """Decompose ``p`` into transpositions ``t1, ..., tn`` with ``p = t1 ∘ ... ∘ tn``.

    Each cycle ``(c0 c1 ... ck)`` becomes ``(c0 ck) ... (c0 c1)``.
    """
    mapping = p.as_dict()
    seen: set[Name] = set()
    result: list[tuple[Name, Name]] = []
    for start in sorted(mapping):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        nxt = mapping[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = mapping[nxt]
        head = cycle[0]
        result.extend((head, c) for c in reversed(cycle[1:]))
    return result


def perm_extending(partial: Mapping[Name, Name]) -> FinPerm | None:
    """Extend an injective partial map to a finite permutation, or None if not injective.

    Unmatched images are sent back along the chains they open, so the
    result moves only names in the keys or values of ``partial``.
    """
    forward = {a: b for a, b in partial.items()}
    if len(set(forward.values())) != len(forward):
        return None
    full = dict(forward)
    for a, b in forward.items():
        if b in full:
            continue
        # walk back from the free image to a key that is never hit
        cur = a
        while cur in forward.values():
            cur = next(k for k, v in forward.items() if v == cur)
        full[b] = cur
    return FinPerm.from_mapping(full)
