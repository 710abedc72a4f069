"""Tests for the term, signature and name-list parsers."""
import pytest

from nomdiag import nmt, smt
from nomdiag.errors import ParseError
from nomdiag.names import Name, transposition
from nomdiag.parser import parse_name_list, parse_nmt, parse_signature, parse_smt, tokenize
from nomdiag.smt import Theory


class TestNominal:
    def test_leaves(self) -> None:
        assert parse_nmt("id(a)") == nmt.ident("a")
        assert parse_nmt("d(a>b)") == nmt.delta("a", "b")
        assert parse_nmt("[a>b]") == nmt.delta("a", "b")
        assert parse_nmt("nil") == nmt.Empty()
        assert parse_nmt("m(a,b>c)") == nmt.gen("m", ["a", "b"], ["c"])
        assert parse_nmt("ec(a>)") == nmt.gen("ec", ["a"], [])

    def test_tensor_binds_tighter_than_composition(self) -> None:
        term = parse_nmt("d(a>b) | id(c) ; m(b,c>d)")
        assert term == nmt.Seq(nmt.Par(nmt.delta("a", "b"), nmt.ident("c")), nmt.gen("m", ["b", "c"], ["d"]))

    def test_parentheses(self) -> None:
        term = parse_nmt("(d(a>x) ; d(x>b)) | id(c)")
        assert isinstance(term, nmt.Par) and isinstance(term.left, nmt.Seq)

    def test_transposition_prefix(self) -> None:
        assert parse_nmt("(a b) d(a>c)") == nmt.PermApp(transposition("a", "b"), nmt.delta("a", "c"))

    def test_transposition_prefix_on_group(self) -> None:
        term = parse_nmt("(a b)(d(a>c) | id(b))")
        assert isinstance(term, nmt.PermApp) and isinstance(term.body, nmt.Par)

    def test_format_round_trip(self) -> None:
        for text in ["d(a>b) | id(c) ; m(b,c>d)", "(d(a>x) ; d(x>b)) | id(c)", "(a b) d(a>c)", "e(>a) ; nil"]:
            assert nmt.format_nmt(parse_nmt(text)) == text

    def test_comments_are_ignored(self) -> None:
        assert parse_nmt("d(a>b)  # rename a") == nmt.delta("a", "b")

    def test_machine_names_need_permission(self) -> None:
        with pytest.raises(ParseError):
            parse_nmt("d(a>_0)")
        assert parse_nmt("d(a>_0)", allow_machine=True) == nmt.delta("a", Name("_", 0))

    @pytest.mark.parametrize("text", ["", "d(a>", "d(a,b)", "id(a) |", "x(a>b) extra", "d(A>b)", "nil(a>b)", "a ; b"])
    def test_malformed(self, text: str) -> None:
        with pytest.raises(ParseError):
            parse_nmt(text)

    def test_error_position(self) -> None:
        with pytest.raises(ParseError) as excinfo:
            parse_nmt("d(a>b) $")
        assert excinfo.value.position == 7


class TestOrdered:
    def test_atoms(self) -> None:
        assert parse_smt("id") == smt.Id()
        assert parse_smt("sym") == smt.Sym()
        assert parse_smt("unit") == smt.Unit()
        assert parse_smt("m") == smt.Gen("m")

    def test_precedence(self) -> None:
        assert parse_smt("m + id ; m") == smt.Seq(smt.Par(smt.Gen("m"), smt.Id()), smt.Gen("m"))

    def test_format_round_trip(self) -> None:
        for text in ["m + id ; m", "(sym ; sym) + id", "id + (e ; m)"]:
            assert smt.format_smt(parse_smt(text)) == text

    @pytest.mark.parametrize("text", ["", "id +", "(sym", "_x", "id ; ; id"])
    def test_malformed(self, text: str) -> None:
        with pytest.raises(ParseError):
            parse_smt(text)


class TestSignatureAndNames:
    def test_signature(self) -> None:
        sig = parse_signature("# generators\ng : 1 -> 1\nh: 2->0\n", Theory.FREE)
        assert sig.generators == {"g": (1, 1), "h": (2, 0)}

    @pytest.mark.parametrize("text", ["g 1 -> 1", "id : 1 -> 1", "g : 1 -> 1\ng : 2 -> 1"])
    def test_bad_signature(self, text: str) -> None:
        with pytest.raises(ParseError):
            parse_signature(text)

    def test_name_list(self) -> None:
        assert parse_name_list("a, c") == [Name("a"), Name("c")]
        assert parse_name_list("") == []

    def test_tokenize_arrow(self) -> None:
        assert [t.text for t in tokenize("g : 1 -> 2")] == ["g", ":", "1", "->", "2"]
