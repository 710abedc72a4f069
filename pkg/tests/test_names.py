"""Tests for names, finite permutations and freshness."""
import pytest

from nomdiag.errors import ParseError
from nomdiag.names import (
    FinPerm,
    FreshSupply,
    Name,
    enumerate_names,
    fresh_names,
    name_set,
    perm_apply_set,
    perm_compose,
    perm_extending,
    perm_inverse,
    perm_support,
    separated,
    transposition,
    transpositions_of,
)

a, b, c = Name("a"), Name("b"), Name("c")


class TestName:
    """Name literals and ordering."""

    def test_parse_user_names(self) -> None:
        assert Name.parse("a") == Name("a")
        assert Name.parse("x12") == Name("x", 12)

    def test_parse_machine_name(self) -> None:
        assert Name.parse("_3") == Name("_", 3)
        assert Name.parse("_p0").is_machine

    def test_machine_names_can_be_refused(self) -> None:
        with pytest.raises(ParseError):
            Name.parse("_0", allow_machine=False)

    @pytest.mark.parametrize("text", ["A", "1a", "a-b", "", "_"])
    def test_malformed(self, text: str) -> None:
        with pytest.raises(ParseError):
            Name.parse(text)

    def test_order_base_then_index(self) -> None:
        assert enumerate_names(name_set("b a1 a")) == [Name("a"), Name("a", 1), Name("b")]

    def test_str_round_trips(self) -> None:
        for text in ["a", "a1", "foo7", "_2"]:
            assert str(Name.parse(text)) == text


class TestPermutations:
    """Transpositions, composition, inverse and support."""

    def test_transposition_swaps(self) -> None:
        p = transposition("a", "b")
        assert p(a) == b and p(b) == a
        assert p(c) == c

    def test_degenerate_transposition_is_identity(self) -> None:
        assert transposition("a", "a") == FinPerm.identity()
        assert not FinPerm.identity()

    def test_compose_is_involutive_for_swaps(self) -> None:
        p = transposition("a", "b")
        assert perm_compose(p, p) == FinPerm.identity()

    def test_compose_applies_right_first(self) -> None:
        p = perm_compose(transposition("a", "b"), transposition("b", "c"))
        assert p.as_dict() == {a: b, b: c, c: a}

    def test_compose_unit(self) -> None:
        p = transposition("a", "c")
        assert perm_compose(p, FinPerm.identity()) == p
        assert perm_compose(FinPerm.identity(), p) == p

    def test_inverse(self) -> None:
        cycle = FinPerm.from_mapping({a: b, b: c, c: a})
        assert perm_inverse(cycle).as_dict() == {b: a, c: b, a: c}
        assert perm_inverse(transposition("a", "b")) == transposition("a", "b")
        assert perm_inverse(FinPerm.identity()) == FinPerm.identity()

    def test_apply_set(self) -> None:
        assert perm_apply_set(transposition("a", "b"), {a, c}) == {b, c}
        assert perm_apply_set(transposition("a", "b"), {a, b}) == {a, b}
        assert perm_apply_set(FinPerm.identity(), {a, b}) == {a, b}

    def test_support(self) -> None:
        assert perm_support(transposition("a", "b")) == {a, b}
        assert perm_support(FinPerm.identity()) == frozenset()
        assert perm_support(FinPerm.from_mapping({a: b, b: c, c: a})) == {a, b, c}

    def test_from_mapping_rejects_non_bijection(self) -> None:
        with pytest.raises(ValueError):
            FinPerm.from_mapping({a: b})

    def test_transpositions_recompose(self) -> None:
        p = FinPerm.from_mapping({a: c, c: b, b: a})
        q = FinPerm.identity()
        for x, y in transpositions_of(p):
            q = perm_compose(q, transposition(x, y))
        assert q == p

    def test_extending_partial_injection(self) -> None:
        p = perm_extending({a: b})
        assert p is not None and p(a) == b and p(b) == a
        assert perm_extending({a: c, b: c}) is None


class TestFreshness:
    """Separatedness and fresh-name supply."""

    def test_separated(self) -> None:
        assert separated({a}, {b})
        assert not separated({a, b}, {b, c})
        assert separated(set(), {a, b})

    def test_fresh_names_avoid(self) -> None:
        assert fresh_names({a, b}, 2) == [Name("_", 0), Name("_", 1)]
        assert fresh_names({Name("_", 0)}, 1) == [Name("_", 1)]
        assert fresh_names(set(), 0) == []

    def test_supply_never_repeats(self) -> None:
        supply = FreshSupply({Name("_", 1)})
        taken = [supply.take() for _ in range(3)]
        assert taken == [Name("_", 0), Name("_", 2), Name("_", 3)]
