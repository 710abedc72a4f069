"""Tests for positions, matching, one-step rewriting, derivation search and derivation text."""
import pytest

from nomdiag import nmt
from nomdiag.errors import NoMatch, ParseError, TypeMismatch
from nomdiag.names import Name
from nomdiag.nmt import Empty, Par, Seq, delta, ident
from nomdiag.rewrite import (
    ROOT,
    Derivation,
    Direction,
    NotFoundWithinBudget,
    Position,
    Step,
    all_rewrites,
    format_derivation,
    match_at,
    parse_derivation,
    positions,
    replace_at,
    replay,
    rewrite_step,
    search_eq,
    subterm_at,
    term_key,
)
from nomdiag.rules import nmt_rules, smt_rules
from nomdiag.semantics import nmt_eq
from nomdiag.smt import Theory

from tests.conftest import nom, ordered

NB = nmt_rules(Theory.NB)
NS = nmt_rules(Theory.NS)


class TestPositions:
    def test_parse_and_str(self) -> None:
        assert Position.parse("root") == ROOT
        assert Position.parse("0.1[0,2]") == Position((0, 1), (0, 2))
        for text in ["root", "2", "0.1", "1[0,1]"]:
            assert str(Position.parse(text)) == text

    def test_malformed(self) -> None:
        with pytest.raises(ParseError):
            Position.parse("left")

    def test_leaf_has_only_the_root(self) -> None:
        assert positions(delta("a", "b")) == [ROOT]

    def test_tensor_foci(self) -> None:
        term = nom("d(a>b) | d(c>d) | id(e)")
        found = positions(term)
        assert Position((), (0, 2)) in found
        assert subterm_at(term, Position((), (0, 2))) == Par(delta("a", "b"), ident("e"))

    def test_missing_position(self) -> None:
        with pytest.raises(NoMatch):
            subterm_at(delta("a", "b"), Position((0,)))

    def test_replace_focus(self) -> None:
        term = nom("d(a>b) | d(c>d) | id(e)")
        replaced = replace_at(term, Position((), (0, 2)), ident("z"))
        assert replaced == Par(ident("z"), delta("c", "d"))


class TestMatching:
    def test_delta_chain_binds_names(self) -> None:
        rule = NB.by_name("delta-chain")
        bind = match_at(nom("d(a>b) ; d(b>c)"), ROOT, rule.lhs)
        assert bind == {"x": Name("a"), "y": Name("b"), "z": Name("c")}

    def test_mismatch(self) -> None:
        rule = NB.by_name("delta-chain")
        assert match_at(nom("d(a>b) ; d(c>d)"), ROOT, rule.lhs) is None
        assert match_at(nom("id(a)"), ROOT, rule.lhs) is None


class TestRewriteStep:
    def test_delta_chain_contracts(self) -> None:
        result = rewrite_step(nom("d(a>x) ; d(x>c)"), NB.by_name("delta-chain"))
        assert result == delta("a", "c")

    def test_delta_chain_expands_with_fresh_name(self) -> None:
        result = rewrite_step(delta("a", "c"), NB.by_name("delta-chain"), ROOT, Direction.RL)
        assert result == Seq(delta("a", Name("_", 0)), delta(Name("_", 0), "c"))

    def test_par_comm(self) -> None:
        result = rewrite_step(nom("d(a>b) | d(c>d)"), NB.by_name("par-comm"))
        assert result == Par(delta("c", "d"), delta("a", "b"))

    def test_unit_left_introduces_empty(self) -> None:
        result = rewrite_step(delta("a", "b"), NB.by_name("unit-left"), ROOT, Direction.RL)
        assert result == Par(Empty(), delta("a", "b"))

    def test_delta_id(self) -> None:
        assert rewrite_step(delta("a", "a"), NB.by_name("delta-id")) == ident("a")

    def test_inside_a_context(self) -> None:
        term = nom("(d(a>x) ; d(x>c)) | id(e)")
        result = rewrite_step(term, NB.by_name("delta-chain"), Position((0,)))
        assert result == Par(delta("a", "c"), ident("e"))

    def test_permutation_pushes_into_leaf(self) -> None:
        assert rewrite_step(nom("(a b) d(a>c)"), NB.by_name("act-delta")) == delta("b", "c")

    def test_no_match(self) -> None:
        with pytest.raises(NoMatch):
            rewrite_step(delta("a", "b"), NB.by_name("delta-chain"))

    def test_theory_rule(self) -> None:
        assert rewrite_step(nom("m(a,b>c)"), NS.by_name("m-comm")) == nmt.gen("m", ["b", "a"], ["c"])

    def test_ordered_rule(self) -> None:
        rules = smt_rules(Theory.B)
        assert rewrite_step(ordered("id + id ; sym"), rules.by_name("id-left")) == ordered("sym")

    def test_all_rewrites_are_distinct(self) -> None:
        found = all_rewrites(nom("d(a>b) | d(c>d)"), NB)
        keys = [term_key(t) for t, _ in found]
        assert found and len(keys) == len(set(keys))


class TestSearch:
    def test_identical_terms(self) -> None:
        result = search_eq(delta("a", "b"), delta("a", "b"), NB)
        assert isinstance(result, Derivation) and len(result) == 0

    def test_chain_is_one_step(self) -> None:
        start = nom("d(a>x) ; d(x>b)")
        result = search_eq(start, delta("a", "b"), NB)
        assert isinstance(result, Derivation)
        assert result.steps == (Step("delta-chain", ROOT, Direction.LR, result.steps[0].instantiation),)
        assert format_derivation(result) == "step 1: delta-chain at root L>R"

    def test_commutativity(self) -> None:
        start, goal = nom("m(a,b>c)"), nom("m(b,a>c)")
        result = search_eq(start, goal, NS)
        assert isinstance(result, Derivation)
        assert "m-comm" in {s.rule for s in result.steps}
        assert nmt.alpha_eq(replay(start, result.steps, NS), goal)

    @pytest.mark.parametrize(
        "left,right",
        [
            ("d(a>x) | d(b>y) ; d(x>b) | d(y>a)", "d(a>b) | d(b>a)"),
            ("(a b)(d(a>c) | d(b>d))", "d(b>c) | d(a>d)"),
            ("d(a>x) ; d(x>y) ; d(y>b)", "d(a>b)"),
        ],
    )
    def test_renamings_that_agree_are_derivable(self, left: str, right: str) -> None:
        t, u = nom(left), nom(right)
        assert nmt_eq(t, u, Theory.NB)
        result = search_eq(t, u, NB)
        assert isinstance(result, Derivation)
        assert nmt.alpha_eq(replay(t, result.steps, NB), u)

    def test_distinct_terms_exhaust_the_budget(self) -> None:
        result = search_eq(nom("d(a>b) | d(b>a)"), nom("id(a) | id(b)"), NB, max_depth=2, max_nodes=300)
        assert isinstance(result, NotFoundWithinBudget)
        assert not result
        assert result.max_nodes == 300

    def test_interfaces_must_agree(self) -> None:
        with pytest.raises(TypeMismatch):
            search_eq(delta("a", "b"), delta("a", "c"), NB)


class TestDerivationText:
    def test_format_and_parse(self) -> None:
        steps = (Step("delta-chain", ROOT, Direction.LR), Step("par-comm", Position((1,)), Direction.RL))
        text = format_derivation(Derivation(Empty(), Empty(), steps))
        assert text == "step 1: delta-chain at root L>R\nstep 2: par-comm at 1 R>L"
        assert parse_derivation(text) == list(steps)

    def test_instantiation_comment(self) -> None:
        step = Step("delta-chain", ROOT, Direction.LR, (("x", "a"), ("y", "b")))
        text = format_derivation(Derivation(Empty(), Empty(), (step,)), with_instantiation=True)
        assert text == "step 1: delta-chain at root L>R  # x=a y=b"
        assert parse_derivation(text) == [Step("delta-chain", ROOT, Direction.LR)]

    @pytest.mark.parametrize("text", ["step 2: delta-chain at root L>R", "delta-chain at root", "step 1: x at root both"])
    def test_malformed(self, text: str) -> None:
        with pytest.raises(ParseError):
            parse_derivation(text)

    def test_replay_unknown_rule(self) -> None:
        with pytest.raises(KeyError):
            replay(delta("a", "b"), [Step("no-such-rule", ROOT, Direction.LR)], NB)

    def test_replay_parsed_text(self) -> None:
        steps = parse_derivation("step 1: delta-chain at root L>R\n")
        assert replay(nom("d(a>x) ; d(x>b)"), steps, NB) == delta("a", "b")
