"""Tests for nominal terms: typing, permutation action, support, alpha-equivalence."""
import pytest

from nomdiag import nmt, semantics
from nomdiag.errors import ArityMismatch, DuplicateName, OverlapError, SeqMismatch, UnknownGenerator
from nomdiag.names import FinPerm, Name, name_set, transposition
from nomdiag.nmt import Empty, IdName, Par, PermApp, Seq, delta, gen, ident
from nomdiag.smt import Theory

from tests.conftest import nom

a, b, c, x = Name("a"), Name("b"), Name("c"), Name("x")


class TestTypecheck:
    def test_delta(self) -> None:
        assert nmt.nmt_typecheck(delta("a", "b")) == ({a}, {b})

    def test_overlapping_tensor_is_undefined(self) -> None:
        with pytest.raises(OverlapError):
            nmt.nmt_typecheck(Par(delta("a", "b"), delta("a", "c")))

    def test_chain(self) -> None:
        assert nmt.nmt_typecheck(Seq(delta("a", "b"), delta("b", "c"))) == ({a}, {c})

    def test_seq_mismatch(self) -> None:
        with pytest.raises(SeqMismatch):
            nmt.nmt_typecheck(Seq(delta("a", "b"), delta("c", "d")))

    def test_generator_repeating_a_name(self) -> None:
        with pytest.raises(DuplicateName):
            nmt.nmt_typecheck(gen("m", ["a", "a"], ["c"]))

    def test_generator_checked_against_signature(self) -> None:
        sig = nmt.nmt_theory_signature(Theory.NS)
        assert nmt.nmt_typecheck(gen("m", ["a", "b"], ["c"]), sig) == ({a, b}, {c})
        with pytest.raises(ArityMismatch):
            nmt.nmt_typecheck(gen("m", ["a"], ["c"]), sig)
        with pytest.raises(UnknownGenerator):
            nmt.nmt_typecheck(gen("e", [], ["c"]), sig)

    def test_permutation_application_types(self) -> None:
        term = PermApp(transposition("a", "b"), delta("a", "c"))
        assert nmt.nmt_typecheck(term) == ({b}, {c})

    def test_empty(self) -> None:
        assert nmt.nmt_typecheck(Empty()) == (frozenset(), frozenset())


class TestPermutationAction:
    def test_leaves(self) -> None:
        swap = transposition("a", "b")
        assert nmt.perm_act_term(swap, delta("a", "c")) == delta("b", "c")
        assert nmt.perm_act_term(swap, gen("m", ["a", "b"], ["c"])) == gen("m", ["b", "a"], ["c"])

    def test_identity_action(self) -> None:
        term = nom("d(a>x) ; m(x,b>c)")
        assert nmt.perm_act_term(FinPerm.identity(), term) == term

    def test_nested_applications_compose(self) -> None:
        inner = PermApp(transposition("b", "c"), delta("a", "b"))
        outer = PermApp(transposition("a", "b"), inner)
        assert nmt.perm_act_term(FinPerm.identity(), outer) == delta("b", "c")

    def test_renaming_bundle(self) -> None:
        swap = transposition("a", "b")
        assert nmt.renaming_bundle(swap, {a, b}) == Par(delta("a", "b"), delta("b", "a"))
        assert nmt.renaming_bundle(FinPerm.identity(), {a}) == delta("a", "a")
        assert nmt.renaming_bundle(swap, set()) == Empty()

    def test_conjugation_form_types(self) -> None:
        swap = transposition("a", "c")
        t = delta("a", "b")
        conj = nmt.conjugation_form(swap, t)
        assert nmt.nmt_typecheck(conj) == nmt.nmt_typecheck(PermApp(swap, t))

    def test_conjugation_form_means_the_action(self) -> None:
        swap = transposition("a", "c")
        t = nom("m(a,b>x) ; d(x>c)")
        conj = nmt.conjugation_form(swap, t)
        acted = nmt.perm_act_term(swap, t)
        assert semantics.eval_nmt(conj, Theory.NS) == semantics.eval_nmt(acted, Theory.NS)


class TestSupport:
    def test_internal_names_are_not_in_support(self) -> None:
        assert nmt.term_support(nom("d(a>x) ; d(x>b)")) == {a, b}

    def test_leaf_and_empty(self) -> None:
        assert nmt.term_support(delta("a", "b")) == {a, b}
        assert nmt.term_support(Empty()) == frozenset()

    def test_freshen_internals(self) -> None:
        fresh = nmt.freshen_internals(nom("d(a>x) ; d(x>b)"))
        assert fresh == Seq(delta("a", Name("_", 0)), delta(Name("_", 0), "b"))

    def test_freshen_without_internals_is_identity(self) -> None:
        term = nom("d(a>b) | id(c)")
        assert nmt.freshen_internals(term) == term


class TestAlphaEquivalence:
    def test_renamed_internal_wire(self) -> None:
        assert nmt.alpha_eq(nom("d(a>x) ; d(x>b)"), nom("d(a>y) ; d(y>b)"))

    def test_different_types(self) -> None:
        assert not nmt.alpha_eq(delta("a", "b"), delta("a", "c"))

    def test_chain_contracts(self) -> None:
        assert nmt.alpha_eq(nom("d(a>x) ; d(x>b)"), delta("a", "b"))

    def test_tensor_commutes(self) -> None:
        assert nmt.alpha_eq(nom("d(a>b) | id(c)"), nom("id(c) | d(a>b)"))

    def test_internal_generator_wiring(self) -> None:
        left = nom("m(a,b>x) ; m(x,c>d)")
        right = nom("m(a,b>y) ; m(y,c>d)")
        assert nmt.alpha_eq(left, right)
        assert not nmt.alpha_eq(left, nom("m(b,c>y) ; m(a,y>d)"))

    def test_internal_name_shadowing_the_interface(self) -> None:
        term = nom("d(d>e) ; e(>d) | ec(e>) ; mc(d>a,h) | e(>e)")
        fresh = nmt.freshen_internals(term)
        renamed = nmt.perm_act_term(transposition(Name("_", 0), Name("z", 0)), fresh)
        assert nmt.alpha_eq(term, fresh)
        assert nmt.alpha_eq(fresh, renamed)
        assert nmt.alpha_eq(term, renamed)
        assert nmt.canonical_key(term) == nmt.canonical_key(renamed)

    def test_canonical_form_is_stable(self) -> None:
        term = nom("d(a>x) | d(b>y) ; d(x>b) | d(y>a)")
        once = nmt.canonical_form(term)
        assert nmt.canonical_form(once) == once


class TestFormatting:
    def test_format(self) -> None:
        assert nmt.format_nmt(Seq(Par(delta("a", "b"), ident("c")), Empty())) == "d(a>b) | id(c) ; nil"
        assert nmt.format_nmt(gen("e", [], ["a"])) == "e(>a)"

    def test_format_names(self) -> None:
        assert nmt.format_names(name_set("b a")) == "{a, b}"
        assert nmt.format_names(frozenset()) == "{}"

    def test_format_permutation_prefix(self) -> None:
        text = nmt.format_nmt(PermApp(transposition("a", "b"), delta("a", "c")))
        assert text == "(a b) d(a>c)"

    def test_ac_normal_sorts_factors(self) -> None:
        assert nmt.ac_normal(Par(ident("c"), Par(Empty(), delta("a", "b")))) == Par(delta("a", "b"), ident("c"))

    def test_size(self) -> None:
        assert nmt.term_size(nom("d(a>x) ; d(x>b) | nil")) == 2
        assert nmt.term_size(Empty()) == 0

    def test_bundle_map(self) -> None:
        assert nmt.bundle_map(nom("d(a>b) | id(c)")) == {a: b, c: c}
        assert nmt.bundle_map(gen("m", ["a", "b"], ["c"])) is None

    def test_identity_leaf(self) -> None:
        assert nmt.ident("a") == IdName(a)
