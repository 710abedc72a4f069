"""Tests for the seeded term and map samplers."""
import random

import pytest

from nomdiag import nmt, smt
from nomdiag.names import name_set, perm_support
from nomdiag.sampling import (
    POOL,
    all_semmaps,
    random_closed_term,
    random_gen_instance,
    random_nmt_term,
    random_perm,
    random_semmap,
    random_smt_term,
    random_transposition_outside,
)
from nomdiag.semantics import Kind
from nomdiag.smt import Theory


@pytest.mark.parametrize("theory", [Theory.FREE, Theory.NB, Theory.NS, Theory.NR])
def test_nominal_samples_are_well_typed(rng: random.Random, theory: Theory) -> None:
    sig = nmt.nmt_theory_signature(theory)
    dom = name_set("a b c")
    for _ in range(30):
        term = random_nmt_term(rng, sig, dom, layers=3, avoid_cod=name_set("z"), perm_prob=0.3)
        got_dom, got_cod = nmt.nmt_typecheck(term, sig)
        assert got_dom == dom
        assert name_set("z").isdisjoint(got_cod)


def test_closed_terms_use_the_pool(rng: random.Random) -> None:
    sig = nmt.nmt_theory_signature(Theory.NF)
    for _ in range(20):
        term = random_closed_term(rng, sig)
        assert nmt.nmt_typecheck(term, sig)[0] <= set(POOL)


@pytest.mark.parametrize("theory", [Theory.B, Theory.F, Theory.R])
def test_ordered_samples_have_requested_arity(rng: random.Random, theory: Theory) -> None:
    sig = smt.smt_theory_signature(theory)
    for arity in range(4):
        term = random_smt_term(rng, sig, arity)
        assert smt.smt_typecheck(term, sig)[0] == arity


def test_same_seed_same_terms() -> None:
    sig = nmt.nmt_theory_signature(Theory.NR)
    first = [random_closed_term(random.Random(7), sig) for _ in range(3)]
    second = [random_closed_term(random.Random(7), sig) for _ in range(3)]
    assert first == second


def test_permutation_samples(rng: random.Random) -> None:
    p = random_perm(rng, name_set("a b c"))
    assert perm_support(p) <= name_set("a b c")
    swap = random_transposition_outside(rng, name_set("a b"))
    assert len(perm_support(swap)) == 2
    assert perm_support(swap).isdisjoint(name_set("a b"))


def test_generator_instance_avoids_names(rng: random.Random) -> None:
    sig = nmt.nmt_theory_signature(Theory.NR)
    g = random_gen_instance(rng, sig, label="m", avoid=name_set("a b"))
    assert len(g.inst.dom) == 2 and len(g.inst.cod) == 1
    assert name_set("a b").isdisjoint(set(g.inst.dom) | set(g.inst.cod))


@pytest.mark.parametrize(
    "kind,dom,cod,count",
    [
        (Kind.BIJ, "a b", "a b", 2),
        (Kind.BIJ, "", "", 1),
        (Kind.INJ, "a b", "a b c", 6),
        (Kind.SURJ, "a b c", "x y", 6),
        (Kind.FUN, "a b", "c", 1),
        (Kind.PFUN, "a", "b c", 3),
        (Kind.REL, "a", "b", 2),
    ],
)
def test_all_semmaps_counts(kind: Kind, dom: str, cod: str, count: int) -> None:
    maps = list(all_semmaps(kind, name_set(dom), name_set(cod)))
    assert len(maps) == count
    assert all(s.kind is kind for s in maps)


def test_random_semmap_none_when_impossible(rng: random.Random) -> None:
    assert random_semmap(rng, Kind.BIJ, name_set("a"), name_set("b c")) is None
    assert random_semmap(rng, Kind.BIJ, name_set("a"), name_set("b")) is not None
