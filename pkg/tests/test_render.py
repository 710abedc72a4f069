"""Tests for DOT rendering."""
from nomdiag.render import render_nmt, render_smt
from nomdiag.smt import Theory, smt_theory_signature

from tests.conftest import nom, ordered


def test_generator_becomes_a_box():
    dot = render_nmt(nom("m(a,b>c)"))
    assert dot.startswith("// m(a,b>c)")
    assert "digraph" in dot
    assert dot.count("shape=box") == 1
    assert "rankdir=LR" in dot


def test_renamings_draw_no_nodes():
    dot = render_nmt(nom("d(a>x) ; d(x>b)"))
    assert "shape=box" not in dot
    assert dot.count("shape=plaintext") == 2


def test_equal_terms_render_identically():
    assert render_nmt(nom("m(a,b>c) | e(>d)")) == render_nmt(nom("m(a,b>c) | e(>d)"))


def test_title_override():
    assert render_nmt(nom("id(a)"), title="wire").startswith("// wire")


def test_permutation_is_applied_first():
    dot = render_nmt(nom("(a b) m(a,c>d)"))
    assert "// m(b,c>d)" in dot


def test_ordered_uses_positions():
    dot = render_smt(ordered("m + id ; m"), smt_theory_signature(Theory.F))
    assert dot.count("shape=box") == 2
    assert "_p2" in dot
