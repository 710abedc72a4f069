"""Tests for the translations between calculi and for signature morphisms."""
import random
from typing import Iterable

import pytest

from nomdiag import nmt, semantics, smt
from nomdiag.bridge import (
    SigMorphism,
    default_enumeration,
    delta_round,
    derived_equations,
    gamma_round,
    nom_term,
    ord_term,
    ordinal_names,
    transport_morphism,
    transport_nominal,
)
from nomdiag.constants import NATURALITY_SAMPLES, ROUND_TRIP_SAMPLES
from nomdiag.errors import ArityMismatch, DuplicateName, TypeViolation
from nomdiag.names import Name, fresh_names, name_list, perm_extending
from nomdiag.sampling import POOL, random_closed_term, random_smt_term
from nomdiag.smt import SmtSignature, Theory

from tests.conftest import nom, ordered

ORDERED_THEORIES = [Theory.B, Theory.I, Theory.S, Theory.F, Theory.P, Theory.R]


class TestNomTerm:
    def test_symmetry(self) -> None:
        term = nom_term(smt.Sym(), ["a", "b"], ["c", "d"])
        assert nmt.format_nmt(term) == "d(a>d) | d(b>c)"

    def test_generator_keeps_the_lists(self) -> None:
        assert nom_term(smt.Gen("m"), ["b", "a"], ["c"]) == nmt.gen("m", ["b", "a"], ["c"])

    def test_composition_names_the_middle_wire(self) -> None:
        term = nom_term(ordered("m ; mc"), ["a", "b"], ["c", "d"])
        middle = Name("_", 0)
        assert term == nmt.Seq(nmt.gen("m", ["a", "b"], [middle]), nmt.gen("mc", [middle], ["c", "d"]))

    def test_composed_identities_keep_their_shape(self) -> None:
        middle = Name("_", 0)
        term = nom_term(ordered("id ; id"), ["a"], ["b"])
        assert term == nmt.Seq(nmt.Delta(Name("a"), middle), nmt.Delta(middle, Name("b")))

    def test_unit_is_empty(self) -> None:
        assert nom_term(ordered("unit"), [], []) == nmt.Empty()

    def test_fresh_wires_avoid_given_names(self) -> None:
        term = nom_term(ordered("id ; id"), ["a"], ["b"], avoid=[Name("_", 0)])
        assert term == nmt.Seq(nmt.Delta(Name("a"), Name("_", 1)), nmt.Delta(Name("_", 1), Name("b")))

    def test_wrong_length(self) -> None:
        with pytest.raises(ArityMismatch):
            nom_term(smt.Id(), ["a", "b"], ["c"])

    def test_repeated_name(self) -> None:
        with pytest.raises(DuplicateName):
            nom_term(smt.Sym(), ["a", "a"], ["c", "d"])

    def test_ordinal_names(self) -> None:
        assert [str(a) for a in ordinal_names(2)] == ["_p0", "_p1"]


class TestOrdTerm:
    def test_swap(self) -> None:
        assert smt.format_smt(ord_term(nom("d(a>b) | d(b>a)"))) == "id + id ; sym"

    def test_renaming_forgets_names(self) -> None:
        assert ord_term(nom("d(a>b)")) == smt.Id()

    def test_generator_is_conjugated(self) -> None:
        t = nom("m(b,a>c)")
        square = semantics.to_positions(semantics.eval_nmt(t, Theory.NS), name_list("a b"), name_list("c"))
        assert semantics.eval_smt(ord_term(t), Theory.S) == square

    def test_custom_enumeration(self) -> None:
        def backwards(names: Iterable[Name]) -> list[Name]:
            return list(reversed(default_enumeration(names)))

        t = nom("d(a>a) | d(b>b)")
        assert semantics.eval_smt(ord_term(t, backwards), Theory.B) == semantics.eval_smt(smt.smt_id(2), Theory.B)


class TestRoundTrips:
    @pytest.mark.parametrize("theory", ORDERED_THEORIES)
    def test_ordered_round_trip_keeps_meaning(self, theory: Theory) -> None:
        rng = random.Random(0)
        sig = smt.smt_theory_signature(theory)
        for _ in range(ROUND_TRIP_SAMPLES):
            t = random_smt_term(rng, sig, rng.randint(0, 3))
            assert semantics.eval_smt(delta_round(t, sig), theory) == semantics.eval_smt(t, theory)

    @pytest.mark.parametrize("theory", [Theory.NB, Theory.NS, Theory.NF, Theory.NR])
    def test_nominal_round_trip_keeps_meaning(self, theory: Theory) -> None:
        rng = random.Random(0)
        sig = nmt.nmt_theory_signature(theory)
        for _ in range(ROUND_TRIP_SAMPLES):
            t = random_closed_term(rng, sig, perm_prob=0.3)
            assert semantics.nmt_eq(gamma_round(t), t, theory, strict=True)

    @pytest.mark.parametrize("theory", [Theory.NB, Theory.NI, Theory.NP, Theory.NR])
    def test_translation_square_commutes(self, theory: Theory) -> None:
        rng = random.Random(1)
        sig = nmt.nmt_theory_signature(theory)
        for _ in range(ROUND_TRIP_SAMPLES):
            t = random_closed_term(rng, sig, perm_prob=0.3)
            dom, cod = nmt.nmt_typecheck(t)
            named = semantics.to_positions(semantics.eval_nmt(t, theory), default_enumeration(dom), default_enumeration(cod))
            assert semantics.eval_smt(ord_term(t), theory.ordered) == named

    @pytest.mark.parametrize("theory", [Theory.NS, Theory.NF, Theory.NR])
    def test_tensor_order_is_forgotten(self, theory: Theory) -> None:
        rng = random.Random(2)
        sig = nmt.nmt_theory_signature(theory)
        for _ in range(ROUND_TRIP_SAMPLES):
            t = random_closed_term(rng, sig)
            s = random_closed_term(rng, sig)
            outside = nmt.term_support(s)
            moved = perm_extending(dict(zip(sorted(outside), fresh_names(nmt.names_in(t) | nmt.names_in(s), len(outside)))))
            assert moved is not None
            s = nmt.perm_act_term(moved, s)
            left, right = ord_term(nmt.Par(t, s)), ord_term(nmt.Par(s, t))
            assert semantics.eval_smt(left, theory.ordered) == semantics.eval_smt(right, theory.ordered)


class TestSigMorphism:
    SOURCE = SmtSignature({"g": (1, 1), "h": (2, 2)})
    TARGET = smt.smt_theory_signature(Theory.B)

    def erase(self) -> SigMorphism:
        return SigMorphism(self.SOURCE, self.TARGET, {"g": smt.Id(), "h": smt.Sym()})

    def test_identity_transport(self) -> None:
        t = ordered("g + id ; h")
        assert transport_morphism(SigMorphism.identity(self.SOURCE), t) == t

    def test_erasing(self) -> None:
        assert transport_morphism(self.erase(), ordered("g + id ; h")) == ordered("id + id ; sym")

    def test_composition_with_identity(self) -> None:
        f = self.erase()
        assert f.then(SigMorphism.identity(self.TARGET)).images == f.images

    def test_missing_image(self) -> None:
        with pytest.raises(TypeViolation):
            SigMorphism(self.SOURCE, self.TARGET, {"g": smt.Id()})

    def test_wrong_arity(self) -> None:
        with pytest.raises(TypeViolation):
            SigMorphism(self.SOURCE, self.TARGET, {"g": smt.Sym(), "h": smt.Sym()})

    def test_generator_outside_source(self) -> None:
        with pytest.raises(TypeViolation):
            transport_morphism(self.erase(), smt.Gen("k"))

    def test_transport_commutes_with_forgetting_names(self) -> None:
        f = self.erase()
        for text in ["g(a>b) | h(c,d>e,x)", "h(a,b>x,y) ; g(x>c) | id(y)", "(a b) g(a>c)"]:
            t = nom(text)
            via_names = ord_term(transport_nominal(f, t))
            via_order = transport_morphism(f, ord_term(t))
            assert semantics.eval_smt(via_names, Theory.B) == semantics.eval_smt(via_order, Theory.B)

    def test_transport_commutes_with_naming(self) -> None:
        f = self.erase()
        rng = random.Random(3)
        for _ in range(NATURALITY_SAMPLES):
            t = random_smt_term(rng, self.SOURCE)
            m, n = smt.smt_typecheck(t, self.SOURCE)
            dom, cod = list(POOL[:m]), list(POOL[m : m + n])
            via_names = transport_nominal(f, nom_term(t, dom, cod, self.SOURCE))
            via_order = nom_term(transport_morphism(f, t), dom, cod, self.TARGET)
            assert semantics.eval_nmt(via_names, Theory.NB) == semantics.eval_nmt(via_order, Theory.NB)

    def test_transport_keeps_image_wires_fresh(self) -> None:
        f = SigMorphism(self.SOURCE, self.TARGET, {"g": ordered("id ; id"), "h": smt.Sym()})
        taken, spare = Name("_", 0), Name("_", 1)
        t = nmt.Par(nmt.gen("g", ["a"], ["b"]), nmt.Delta(taken, Name("c")))
        expected = nmt.Seq(nmt.Delta(Name("a"), spare), nmt.Delta(spare, Name("b")))
        assert transport_nominal(f, t) == nmt.Par(expected, nmt.Delta(taken, Name("c")))


def test_derived_equations_hold() -> None:
    equations = derived_equations()
    assert len(equations) == 5
    assert all(e.holds for e in equations), [e.name for e in equations if not e.holds]
