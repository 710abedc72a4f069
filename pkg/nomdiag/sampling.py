"""Seeded generators of well-typed terms, permutations and semantic maps."""
from __future__ import annotations

import itertools
import logging
import random
from typing import Iterable, Iterator

from nomdiag import nmt, smt
from nomdiag.constants import MAX_SAMPLE_ARITY, NAME_POOL
from nomdiag.names import FinPerm, Name, NameSet, as_name, enumerate_names
from nomdiag.semantics import Kind, SemMap
from nomdiag.smt import SmtSignature

logger = logging.getLogger(__name__)

POOL: tuple[Name, ...] = tuple(as_name(a) for a in NAME_POOL)
# Overflow names once the pool is exhausted inside one layer.
_OVERFLOW: tuple[Name, ...] = tuple(Name("x", i) for i in range(1, 64))


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def random_perm(rng: random.Random, names: Iterable[Name] = POOL) -> FinPerm:
    """A uniformly random permutation of ``names``."""
    names = enumerate_names(names)
    images = list(names)
    rng.shuffle(images)
    return FinPerm.from_mapping(dict(zip(names, images)))


def random_transposition_outside(rng: random.Random, support: NameSet) -> FinPerm:
    """A transposition of two names neither of which is in ``support``."""
    outside = [a for a in POOL + _OVERFLOW if a not in support]
    a, b = rng.sample(outside[:12], 2)
    return FinPerm.from_mapping({a: b, b: a})


def random_subset(rng: random.Random, names: Iterable[Name], max_size: int) -> NameSet:
    names = list(names)
    k = rng.randint(0, min(max_size, len(names)))
    return frozenset(rng.sample(names, k))


def _take_name(rng: random.Random, used: set[Name], avoid: NameSet) -> Name:
    free = [a for a in POOL if a not in used and a not in avoid]
    if free:
        return rng.choice(free)
    return next(a for a in _OVERFLOW if a not in used and a not in avoid)


def random_nmt_layer(
    rng: random.Random,
    sig: nmt.NmtSignature,
    dom: Iterable[Name],
    *,
    avoid_cod: NameSet = frozenset(),
    max_width: int = MAX_SAMPLE_ARITY,
    with_ids: bool = True,
) -> nmt.NmtTerm:
    """One tensor layer consuming exactly ``dom``; codomain names avoid ``avoid_cod``."""
    remaining = enumerate_names(dom)
    rng.shuffle(remaining)
    used: set[Name] = set()
    components: list[nmt.NmtTerm] = []
    width = 0
    schemas = sorted(sig.schemas.items())
    while remaining:
        options: list[tuple[str, int, int]] = [("d", 1, 1)]
        if with_ids and remaining[0] not in avoid_cod:
            options.append(("id", 1, 1))
        for label, (m, n) in schemas:
            if 1 <= m <= len(remaining) and (n <= m or width + n <= max_width):
                options.append((label, m, n))
        label, m, n = rng.choice(options)
        consumed, remaining = remaining[:m], remaining[m:]
        if label == "id" and consumed[0] not in used:
            used.add(consumed[0])
            components.append(nmt.IdName(consumed[0]))
            width += 1
            continue
        if label in ("id", "d"):
            b = _take_name(rng, used, avoid_cod)
            used.add(b)
            components.append(nmt.Delta(consumed[0], b))
            width += 1
            continue
        outputs = []
        for _ in range(n):
            b = _take_name(rng, used, avoid_cod)
            used.add(b)
            outputs.append(b)
        components.append(nmt.Gen(nmt.GenInstance(label, tuple(consumed), tuple(outputs))))
        width += n
    sources = [label for label, (m, n) in schemas if m == 0]
    if sources and width < max_width and rng.random() < 0.3:
        label = rng.choice(sources)
        n = sig.schemas[label][1]
        outputs = []
        for _ in range(n):
            b = _take_name(rng, used, avoid_cod)
            used.add(b)
            outputs.append(b)
        components.append(nmt.Gen(nmt.GenInstance(label, (), tuple(outputs))))
    rng.shuffle(components)
    return nmt.par(*components)


def random_nmt_term(
    rng: random.Random,
    sig: nmt.NmtSignature,
    dom: Iterable[Name],
    *,
    layers: int = 2,
    avoid_cod: NameSet = frozenset(),
    perm_prob: float = 0.0,
) -> nmt.NmtTerm:
    """A well-typed term with the given domain, built from ``layers`` tensor layers.

    Args:
        rng: Source of randomness.
        sig: Generators to draw from.
        dom: Exact domain of the result.
        layers: Number of sequential layers (at least 1).
        avoid_cod: Names the codomain must avoid.
        perm_prob: Chance of wrapping each layer in a permutation application.
    """
    current = frozenset(dom)
    parts: list[nmt.NmtTerm] = []
    for i in range(max(1, layers)):
        last = i == max(1, layers) - 1
        layer = random_nmt_layer(rng, sig, current, avoid_cod=avoid_cod if last else frozenset())
        if perm_prob and rng.random() < perm_prob:
            p = random_perm(rng, nmt.names_in(layer) | set(POOL[:4]))
            # p·(p⁻¹·layer) has the same type as the layer
            layer = nmt.PermApp(p, nmt.perm_act_term(_inverse(p), layer))
        parts.append(layer)
        current = nmt.nmt_typecheck(layer)[1]
    return nmt.seq(*parts)


def _inverse(p: FinPerm) -> FinPerm:
    return FinPerm.from_mapping({b: a for a, b in p.moved})


def random_closed_term(
    rng: random.Random,
    sig: nmt.NmtSignature,
    *,
    max_names: int = 3,
    layers: int = 2,
    perm_prob: float = 0.0,
) -> nmt.NmtTerm:
    """A random term over a random domain drawn from the name pool."""
    dom = random_subset(rng, POOL[:max_names + 1], max_names)
    return random_nmt_term(rng, sig, dom, layers=rng.randint(1, layers), perm_prob=perm_prob)


def random_gen_instance(
    rng: random.Random,
    sig: nmt.NmtSignature,
    *,
    label: str | None = None,
    avoid: NameSet = frozenset(),
) -> nmt.Gen:
    """A generator instance with distinct names drawn outside ``avoid``."""
    if label is None:
        label = rng.choice(sorted(sig.schemas))
    m, n = sig.schemas[label]
    free = [a for a in POOL + _OVERFLOW[:8] if a not in avoid]
    dom = rng.sample(free, m)
    cod = rng.sample(free, n)
    return nmt.Gen(nmt.GenInstance(label, tuple(dom), tuple(cod)))


def random_smt_layer(rng: random.Random, sig: SmtSignature, width: int, *, max_width: int = MAX_SAMPLE_ARITY) -> smt.SmtTerm:
    """One tensor layer of arity ``width``."""
    components: list[smt.SmtTerm] = []
    remaining = width
    out = 0
    schemas = sorted(sig.generators.items())
    while remaining:
        options: list[tuple[str, int, int]] = [("id", 1, 1)]
        if remaining >= 2:
            options.append(("sym", 2, 2))
        for label, (m, n) in schemas:
            if 1 <= m <= remaining and (n <= m or out + n + remaining - m <= max_width):
                options.append((label, m, n))
        label, m, n = rng.choice(options)
        remaining -= m
        out += n
        if label == "id":
            components.append(smt.Id())
        elif label == "sym":
            components.append(smt.Sym())
        else:
            components.append(smt.Gen(label))
    sources = [label for label, (m, n) in schemas if m == 0]
    if sources and out < max_width and rng.random() < 0.3:
        label = rng.choice(sources)
        components.insert(rng.randint(0, len(components)), smt.Gen(label))
    return smt.par(*components)


def random_smt_term(
    rng: random.Random,
    sig: SmtSignature,
    arity: int | None = None,
    *,
    layers: int = 2,
    max_width: int = MAX_SAMPLE_ARITY,
) -> smt.SmtTerm:
    """A well-typed ordered term of the given arity (random when omitted)."""
    width = rng.randint(0, max_width) if arity is None else arity
    parts = []
    for _ in range(max(1, layers)):
        layer = random_smt_layer(rng, sig, width, max_width=max_width)
        parts.append(layer)
        width = smt.smt_typecheck(layer, sig)[1]
    return smt.seq(*parts)


def all_semmaps(kind: Kind, dom: Iterable[Name], cod: Iterable[Name]) -> Iterator[SemMap]:
    """Every map of the given kind between ``dom`` and ``cod``."""
    dom, cod = frozenset(dom), frozenset(cod)
    cells = list(itertools.product(enumerate_names(dom), enumerate_names(cod)))
    for mask in range(1 << len(cells)):
        pairs = frozenset(cell for i, cell in enumerate(cells) if mask >> i & 1)
        candidate = SemMap(dom, cod, pairs)
        if candidate.satisfies(kind):
            yield candidate.with_kind(kind)


def random_semmap(rng: random.Random, kind: Kind, dom: Iterable[Name], cod: Iterable[Name]) -> SemMap | None:
    """A random map of the given kind, or None if none exists between these interfaces."""
    maps = list(all_semmaps(kind, dom, cod))
    return rng.choice(maps) if maps else None
