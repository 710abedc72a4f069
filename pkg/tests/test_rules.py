"""Tests for the built-in rule sets and their soundness check."""
from dataclasses import replace

import pytest

from nomdiag import services
from nomdiag.rewrite import Direction, check_rule_soundness
from nomdiag.rules import corrupted_rule, nmt_rules, smt_rules
from nomdiag.smt import Theory


class TestRuleSets:
    def test_nominal_rules_cover_both_layers(self) -> None:
        names = nmt_rules(Theory.FREE).names()
        for expected in ["par-comm", "interchange", "act-par", "delta-chain", "delta-id", "gen-out-rename"]:
            assert expected in names

    def test_bijections_have_no_theory_rules(self) -> None:
        assert "m-comm" not in nmt_rules(Theory.NB).names()
        assert nmt_rules(Theory.NB).names() == nmt_rules(Theory.FREE).names()

    def test_theory_rules_follow_the_generators(self) -> None:
        assert "m-comm" in nmt_rules(Theory.NS).names()
        assert "m-unit" in nmt_rules(Theory.NF).names()
        assert "e-discard" in nmt_rules(Theory.NP).names()
        assert "special" in nmt_rules(Theory.NR).names()
        assert "special" not in nmt_rules(Theory.NP).names()

    def test_ordered_theory_maps_to_nominal(self) -> None:
        assert nmt_rules("F").theory is Theory.NF
        assert smt_rules("nF").theory is Theory.F

    def test_ordered_rules(self) -> None:
        names = smt_rules(Theory.R).names()
        assert {"sym-involution", "naturality", "m-comm", "bimonoid"} <= set(names)
        assert "m-comm" not in smt_rules(Theory.I).names()

    def test_names_are_unique(self) -> None:
        for theory in Theory:
            for rules in (nmt_rules(theory), smt_rules(theory)):
                assert len(set(rules.names())) == len(rules)

    def test_lookup(self) -> None:
        rules = nmt_rules(Theory.NB)
        assert rules.by_name("delta-chain").orient is Direction.LR
        with pytest.raises(KeyError):
            rules.by_name("missing")


class TestSoundness:
    @pytest.mark.parametrize("theory", list(Theory))
    def test_built_in_rules_are_sound(self, theory: Theory) -> None:
        report = services.soundness(theory, samples=100, seed=0)
        assert report.ok, [(e.rule, e.counterexample) for e in report.failing()]
        assert report.entries

    def test_samples_are_drawn(self) -> None:
        report = services.soundness(Theory.NR, samples=20, seed=0)
        entry = next(e for e in report.entries if e.rule == "delta-chain")
        assert entry.samples == 20 and entry.skipped == 0

    def test_corrupted_rule_is_caught(self) -> None:
        report = check_rule_soundness([corrupted_rule()], Theory.NB, samples=100, seed=0)
        assert report.failures > 0
        assert not report.ok
        assert report.failing()[0].counterexample is not None

    def test_same_seed_same_report(self) -> None:
        first = check_rule_soundness([corrupted_rule()], Theory.NB, samples=30, seed=5)
        second = check_rule_soundness([corrupted_rule()], Theory.NB, samples=30, seed=5)
        assert first == second

    def test_unmet_side_condition_is_skipped(self) -> None:
        chain = nmt_rules(Theory.NB).by_name("delta-chain")
        never = replace(chain, name="never-fires", where=lambda bind, ctx, direction: iter(()))
        entry = check_rule_soundness([never], Theory.NB, samples=10, seed=0).entries[0]
        assert (entry.samples, entry.skipped, entry.failures) == (0, 10, 0)
