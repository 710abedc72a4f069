"""Built-in equation schemas for the ordered and nominal calculi and their theories."""
from __future__ import annotations

import logging
import random
from typing import Callable, Iterable, Iterator

from nomdiag import nmt, sampling, smt
from nomdiag.constants import LABEL_COMULT, LABEL_COUNIT, LABEL_MULT, LABEL_UNIT
from nomdiag.names import FinPerm, Name, NameSet, perm_compose, transposition
from nomdiag.parser import parse_smt
from nomdiag.rewrite import (
    ActP,
    Binding,
    DeltaP,
    Direction,
    GenP,
    GenVar,
    IdN,
    IdNameP,
    IdOf,
    Lit,
    ParP,
    RewriteContext,
    Rule,
    RuleSet,
    SeqP,
    SymP,
    UnitP,
    Var,
)
from nomdiag.smt import SmtSignature, Theory

logger = logging.getLogger(__name__)

LR, RL = Direction.LR, Direction.RL

Where = Callable[[Binding, RewriteContext, Direction], Iterator[Binding]]


# ---- Side-condition helpers ----


def _dom(t: nmt.NmtTerm) -> NameSet:
    return nmt.nmt_typecheck(t)[0]


def _cod(t: nmt.NmtTerm) -> NameSet:
    return nmt.nmt_typecheck(t)[1]


def _settle(bind: Binding, var: str, value: object) -> Binding | None:
    """Bind ``var`` or check it against the value already bound."""
    if var in bind:
        return bind if bind[var] == value else None
    return {**bind, var: value}


def _fresh(*variables: str) -> Where:
    """Draw machine-fresh names for whichever of ``variables`` the match left unbound."""

    def where(bind: Binding, ctx: RewriteContext, direction: Direction) -> Iterator[Binding]:
        missing = [v for v in variables if v not in bind]
        names = ctx.fresh(len(missing))
        yield {**bind, **dict(zip(missing, names))}

    return where


def _interface_where(var: str, side: int, term_var: str = "t") -> Where:
    """``var`` is the domain (side 0) or codomain (side 1) of ``term_var``."""

    def where(bind: Binding, ctx: RewriteContext, direction: Direction) -> Iterator[Binding]:
        value = ctx.interface(bind[term_var])[side]
        settled = _settle(bind, var, value)
        if settled is not None:
            yield settled

    return where


def _inst(g: nmt.NmtTerm) -> nmt.GenInstance:
    assert isinstance(g, nmt.Gen)
    return g.inst


# ---- Samplers ----


def _names(rng: random.Random, k: int) -> list[Name]:
    return rng.sample(sampling.POOL, k)


def _disjoint_domains(rng: random.Random, k: int, max_size: int = 2) -> list[NameSet]:
    pool = list(sampling.POOL[:6])
    rng.shuffle(pool)
    result = []
    for _ in range(k):
        size = rng.randint(0, min(max_size, len(pool)))
        result.append(frozenset(pool[:size]))
        pool = pool[size:]
    return result


def _term(rng: random.Random, sig: nmt.NmtSignature, dom: Iterable[Name], avoid: NameSet = frozenset()) -> nmt.NmtTerm:
    return sampling.random_nmt_term(rng, sig, dom, layers=rng.randint(1, 2), avoid_cod=avoid)


def _chained(rng: random.Random, sig: nmt.NmtSignature, k: int) -> list[nmt.NmtTerm]:
    terms: list[nmt.NmtTerm] = []
    dom: NameSet = _disjoint_domains(rng, 1, 3)[0]
    for _ in range(k):
        t = _term(rng, sig, dom)
        terms.append(t)
        dom = _cod(t)
    return terms


def _parallel(rng: random.Random, sig: nmt.NmtSignature, k: int) -> list[nmt.NmtTerm]:
    terms: list[nmt.NmtTerm] = []
    used: NameSet = frozenset()
    for dom in _disjoint_domains(rng, k):
        t = _term(rng, sig, dom, avoid=used)
        terms.append(t)
        used |= _cod(t)
    return terms


def _sample_term(rng: random.Random, sig: nmt.NmtSignature) -> Binding:
    t = _term(rng, sig, _disjoint_domains(rng, 1, 3)[0])
    return {"t": t, "A": _dom(t), "B": _cod(t)}


def _sample_perm(rng: random.Random) -> FinPerm:
    return sampling.random_perm(rng, sampling.POOL[:4])


def _labels(sig: nmt.NmtSignature, test: Callable[[int, int], bool]) -> list[str]:
    return sorted(label for label, (m, n) in sig.schemas.items() if test(m, n))


# ---- Nominal: internal monoidal category ----


def _interchange_sample(rng: random.Random, sig: nmt.NmtSignature) -> Binding:
    s, u = _parallel(rng, sig, 2)
    t = _term(rng, sig, _cod(s))
    v = _term(rng, sig, _cod(u), avoid=_cod(t))
    return {"s": s, "t": t, "u": u, "v": v}


def _monoidal_rules() -> list[Rule]:
    return [
        Rule(
            "id-left",
            SeqP(IdOf("A"), Var("t")),
            Var("t"),
            where=_interface_where("A", 0),
            orient=LR,
            sampler=_sample_term,
        ),
        Rule(
            "id-right",
            SeqP(Var("t"), IdOf("B")),
            Var("t"),
            where=_interface_where("B", 1),
            orient=LR,
            sampler=_sample_term,
        ),
        Rule("unit-left", ParP(UnitP(), Var("t"), keep_units=True), Var("t"), orient=LR, sampler=_sample_term),
        Rule("unit-right", ParP(Var("t"), UnitP(), keep_units=True), Var("t"), orient=LR, sampler=_sample_term),
        Rule(
            "seq-assoc",
            SeqP(SeqP(Var("r"), Var("s")), Var("t")),
            SeqP(Var("r"), SeqP(Var("s"), Var("t"))),
            sampler=lambda rng, sig: dict(zip("rst", _chained(rng, sig, 3))),
        ),
        Rule(
            "par-assoc",
            ParP(ParP(Var("r"), Var("s")), Var("t")),
            ParP(Var("r"), ParP(Var("s"), Var("t"))),
            sampler=lambda rng, sig: dict(zip("rst", _parallel(rng, sig, 3))),
        ),
        Rule(
            "par-comm",
            ParP(Var("s"), Var("t")),
            ParP(Var("t"), Var("s")),
            sampler=lambda rng, sig: dict(zip("st", _parallel(rng, sig, 2))),
        ),
        Rule(
            "interchange",
            ParP(SeqP(Var("s"), Var("t")), SeqP(Var("u"), Var("v"))),
            SeqP(ParP(Var("s"), Var("u")), ParP(Var("t"), Var("v"))),
            orient=RL,
            sampler=_interchange_sample,
        ),
    ]


# ---- Nominal: permutation action and renamings ----


def _act_leaf(*pairs: tuple[str, str]) -> Where:
    """Left to right only: each target name is the permuted source name."""

    def where(bind: Binding, ctx: RewriteContext, direction: Direction) -> Iterator[Binding]:
        if direction is RL:
            return
        p: FinPerm = bind["P"]
        yield {**bind, **{dst: p(bind[src]) for src, dst in pairs}}

    return where


def _act_gen_where(bind: Binding, ctx: RewriteContext, direction: Direction) -> Iterator[Binding]:
    if direction is LR:
        yield {**bind, "h": nmt.Gen(_inst(bind["g"]).act(bind["P"]))}


def _act_compose_where(bind: Binding, ctx: RewriteContext, direction: Direction) -> Iterator[Binding]:
    if direction is LR:
        yield {**bind, "R": perm_compose(bind["P"], bind["Q"])}


def _act_identity_where(bind: Binding, ctx: RewriteContext, direction: Direction) -> Iterator[Binding]:
    if direction is LR and not bind["P"]:
        yield bind


def _gen_sample(rng: random.Random, sig: nmt.NmtSignature) -> nmt.Gen | None:
    if not sig.schemas:
        return None
    return sampling.random_gen_instance(rng, sig)


def _act_gen_sample(rng: random.Random, sig: nmt.NmtSignature) -> Binding | None:
    g = _gen_sample(rng, sig)
    return None if g is None else {"P": _sample_perm(rng), "g": g}


def _out_rename_where(bind: Binding, ctx: RewriteContext, direction: Direction) -> Iterator[Binding]:
    # γ : A -> B ⊎ {b} with b, x ∉ A
    if direction is LR:
        inst = _inst(bind["g"])
        b, x = bind["b"], bind["x"]
        cod = frozenset(inst.cod)
        if b in cod and bind["B"] == cod - {b} and b not in inst.dom and x not in inst.dom:
            yield {**bind, "h": nmt.Gen(inst.act(transposition(b, x)))}
        return
    inst = _inst(bind["h"])
    for x in inst.cod:
        if x in inst.dom:
            continue
        (b,) = ctx.fresh(1)
        g = nmt.Gen(inst.act(transposition(b, x)))
        yield {**bind, "g": g, "b": b, "x": x, "B": frozenset(inst.cod) - {x}}


def _in_rename_where(bind: Binding, ctx: RewriteContext, direction: Direction) -> Iterator[Binding]:
    # γ : {a} ⊎ A -> B with a, x ∉ B
    if direction is LR:
        inst = _inst(bind["g"])
        a, x = bind["a"], bind["x"]
        dom = frozenset(inst.dom)
        if a in dom and bind["A"] == dom - {a} and a not in inst.cod and x not in inst.cod:
            yield {**bind, "h": nmt.Gen(inst.act(transposition(x, a)))}
        return
    inst = _inst(bind["h"])
    for x in inst.dom:
        if x in inst.cod:
            continue
        (a,) = ctx.fresh(1)
        g = nmt.Gen(inst.act(transposition(x, a)))
        yield {**bind, "g": g, "a": a, "x": x, "A": frozenset(inst.dom) - {x}}


def _pass_through_where(bind: Binding, ctx: RewriteContext, direction: Direction) -> Iterator[Binding]:
    # γ : A ⊎ {c} -> B ⊎ {c}; x does not occur in γ
    c, x = bind["c"], bind["x"]
    if direction is LR:
        inst = _inst(bind["g"])
        dom, cod = frozenset(inst.dom), frozenset(inst.cod)
        if c in dom and c in cod and bind["B"] == cod - {c} and x not in dom | cod:
            yield {**bind, "A": dom - {c}, "h": nmt.Gen(inst.act(transposition(c, x)))}
        return
    inst = _inst(bind["h"])
    dom, cod = frozenset(inst.dom), frozenset(inst.cod)
    if x in dom and x in cod and bind["A"] == dom - {x} and c not in dom | cod:
        yield {**bind, "B": cod - {x}, "g": nmt.Gen(inst.act(transposition(c, x)))}


def _out_rename_sample(rng: random.Random, sig: nmt.NmtSignature) -> Binding | None:
    labels = _labels(sig, lambda m, n: n >= 1)
    if not labels:
        return None
    g = sampling.random_gen_instance(rng, sig, label=rng.choice(labels))
    b = rng.choice(g.inst.cod)
    if b in g.inst.dom:
        return None
    x = rng.choice([a for a in sampling.POOL if a not in g.inst.dom and a not in g.inst.cod])
    return {"g": g, "b": b, "x": x, "B": frozenset(g.inst.cod) - {b}}


def _in_rename_sample(rng: random.Random, sig: nmt.NmtSignature) -> Binding | None:
    labels = _labels(sig, lambda m, n: m >= 1)
    if not labels:
        return None
    g = sampling.random_gen_instance(rng, sig, label=rng.choice(labels))
    a = rng.choice(g.inst.dom)
    if a in g.inst.cod:
        return None
    x = rng.choice([n for n in sampling.POOL if n not in g.inst.dom and n not in g.inst.cod])
    return {"g": g, "a": a, "x": x, "A": frozenset(g.inst.dom) - {a}}


def _pass_through_sample(rng: random.Random, sig: nmt.NmtSignature) -> Binding | None:
    labels = _labels(sig, lambda m, n: m >= 1 and n >= 1)
    if not labels:
        return None
    label = rng.choice(labels)
    m, n = sig.schemas[label]
    c, x, *rest = _names(rng, 2 + m - 1 + n - 1)
    dom = [c] + rest[: m - 1]
    cod = [c] + rest[m - 1 :]
    rng.shuffle(dom)
    rng.shuffle(cod)
    g = nmt.Gen(nmt.GenInstance(label, tuple(dom), tuple(cod)))
    return {"g": g, "c": c, "x": x, "B": frozenset(cod) - {c}}


def _nominal_set_rules() -> list[Rule]:
    return [
        Rule(
            "act-id",
            ActP("P", IdNameP("x")),
            IdNameP("y"),
            where=_act_leaf(("x", "y")),
            orient=LR,
            sampler=lambda rng, sig: {"P": _sample_perm(rng), "x": rng.choice(sampling.POOL[:5])},
        ),
        Rule(
            "act-delta",
            ActP("P", DeltaP("x", "y")),
            DeltaP("x2", "y2"),
            where=_act_leaf(("x", "x2"), ("y", "y2")),
            orient=LR,
            sampler=lambda rng, sig: {"P": _sample_perm(rng), "x": _names(rng, 1)[0], "y": _names(rng, 1)[0]},
        ),
        Rule(
            "act-gen",
            ActP("P", GenVar("g")),
            GenVar("h"),
            where=_act_gen_where,
            orient=LR,
            sampler=_act_gen_sample,
        ),
        Rule(
            "act-empty",
            ActP("P", UnitP()),
            UnitP(),
            orient=LR,
            sampler=lambda rng, sig: {"P": _sample_perm(rng)},
        ),
        Rule(
            "act-par",
            ActP("P", ParP(Var("s"), Var("t"))),
            ParP(ActP("P", Var("s")), ActP("P", Var("t"))),
            orient=LR,
            sampler=lambda rng, sig: {"P": _sample_perm(rng), **dict(zip("st", _parallel(rng, sig, 2)))},
        ),
        Rule(
            "act-seq",
            ActP("P", SeqP(Var("s"), Var("t"))),
            SeqP(ActP("P", Var("s")), ActP("P", Var("t"))),
            orient=LR,
            sampler=lambda rng, sig: {"P": _sample_perm(rng), **dict(zip("st", _chained(rng, sig, 2)))},
        ),
        Rule(
            "act-compose",
            ActP("P", ActP("Q", Var("t"))),
            ActP("R", Var("t")),
            where=_act_compose_where,
            orient=LR,
            sampler=lambda rng, sig: {"P": _sample_perm(rng), "Q": _sample_perm(rng), **_sample_term(rng, sig)},
        ),
        Rule(
            "act-identity",
            ActP("P", Var("t")),
            Var("t"),
            where=_act_identity_where,
            orient=LR,
            sampler=lambda rng, sig: {"P": FinPerm.identity(), **_sample_term(rng, sig)},
        ),
        Rule(
            "delta-chain",
            SeqP(DeltaP("x", "y"), DeltaP("y", "z")),
            DeltaP("x", "z"),
            where=_fresh("y"),
            orient=LR,
            sampler=lambda rng, sig: dict(zip("xyz", [rng.choice(sampling.POOL[:4]) for _ in range(3)])),
        ),
        Rule(
            "delta-id",
            DeltaP("x", "x"),
            IdNameP("x"),
            orient=LR,
            sampler=lambda rng, sig: {"x": _names(rng, 1)[0]},
        ),
        Rule(
            "gen-out-rename",
            SeqP(GenVar("g"), ParP(IdOf("B"), DeltaP("b", "x"))),
            GenVar("h"),
            where=_out_rename_where,
            orient=LR,
            sampler=_out_rename_sample,
        ),
        Rule(
            "gen-in-rename",
            SeqP(ParP(DeltaP("x", "a"), IdOf("A")), GenVar("g")),
            GenVar("h"),
            where=_in_rename_where,
            orient=LR,
            sampler=_in_rename_sample,
        ),
        Rule(
            "gen-pass-through",
            SeqP(GenVar("g"), ParP(IdOf("B"), DeltaP("c", "x"))),
            SeqP(ParP(IdOf("A"), DeltaP("c", "x")), GenVar("h")),
            where=_pass_through_where,
            sampler=_pass_through_sample,
        ),
    ]


# ---- Nominal theories ----


def _g(label: str, dom: str, cod: str) -> GenP:
    """``_g("m", "ab", "x")`` is the pattern ``m(a,b>x)`` over single-letter name variables."""
    return GenP(label, tuple(dom), tuple(cod))


def _distinct_names(*variables: str) -> Callable[[random.Random, nmt.NmtSignature], Binding]:
    def sampler(rng: random.Random, sig: nmt.NmtSignature) -> Binding:
        return dict(zip(variables, _names(rng, len(variables))))

    return sampler


def _nominal_theory_rules(theory: Theory) -> list[Rule]:
    m, e, ec, mc = LABEL_MULT, LABEL_UNIT, LABEL_COUNIT, LABEL_COMULT
    generators = nmt.nmt_theory_signature(theory).schemas
    rules: list[Rule] = []
    if m in generators:
        rules += [
            Rule(
                "m-assoc",
                SeqP(ParP(_g(m, "ab", "x"), IdNameP("c")), _g(m, "xc", "y")),
                SeqP(ParP(IdNameP("a"), _g(m, "bc", "x")), _g(m, "ax", "y")),
                sampler=_distinct_names(*"abcxy"),
            ),
            Rule("m-comm", _g(m, "ab", "c"), _g(m, "ba", "c"), sampler=_distinct_names(*"abc")),
        ]
    if m in generators and e in generators:
        rules.append(
            Rule(
                "m-unit",
                SeqP(ParP(IdNameP("a"), _g(e, "", "b")), _g(m, "ab", "c")),
                DeltaP("a", "c"),
                where=_fresh("b"),
                orient=LR,
                sampler=_distinct_names(*"abc"),
            )
        )
    if ec in generators:
        rules += [
            Rule(
                "e-discard",
                SeqP(_g(e, "", "a"), _g(ec, "a", "")),
                UnitP(),
                where=_fresh("a"),
                orient=LR,
                sampler=_distinct_names("a"),
            ),
            Rule(
                "m-discard",
                SeqP(_g(m, "ab", "c"), _g(ec, "c", "")),
                ParP(_g(ec, "a", ""), _g(ec, "b", "")),
                where=_fresh("c"),
                orient=LR,
                sampler=_distinct_names(*"abc"),
            ),
        ]
    if mc in generators:
        rules += [
            Rule(
                "mc-coassoc",
                SeqP(_g(mc, "a", "xd"), ParP(_g(mc, "x", "bc"), IdNameP("d"))),
                SeqP(_g(mc, "a", "bx"), ParP(IdNameP("b"), _g(mc, "x", "cd"))),
                sampler=_distinct_names(*"abcdx"),
            ),
            Rule("mc-cocomm", _g(mc, "a", "bc"), _g(mc, "a", "cb"), sampler=_distinct_names(*"abc")),
            Rule(
                "mc-counit",
                SeqP(_g(mc, "a", "bc"), ParP(IdNameP("b"), _g(ec, "c", ""))),
                DeltaP("a", "b"),
                where=_fresh("c"),
                orient=LR,
                sampler=_distinct_names(*"abc"),
            ),
            Rule(
                "special",
                SeqP(_g(mc, "a", "bc"), _g(m, "bc", "d")),
                DeltaP("a", "d"),
                where=_fresh("b", "c"),
                orient=LR,
                sampler=_distinct_names(*"abcd"),
            ),
            Rule(
                "bimonoid",
                SeqP(_g(m, "ab", "x"), _g(mc, "x", "cd")),
                SeqP(
                    ParP(GenP(mc, ("a",), ("a1", "a2")), GenP(mc, ("b",), ("b1", "b2"))),
                    ParP(GenP(m, ("a1", "b1"), ("c",)), GenP(m, ("a2", "b2"), ("d",))),
                ),
                where=_fresh("x", "a1", "a2", "b1", "b2"),
                sampler=_distinct_names(*"abcdx"),
            ),
            Rule(
                "e-copy",
                SeqP(_g(e, "", "a"), _g(mc, "a", "bc")),
                ParP(_g(e, "", "b"), _g(e, "", "c")),
                where=_fresh("a"),
                orient=LR,
                sampler=_distinct_names(*"abc"),
            ),
        ]
    return rules


def nmt_rules(theory: Theory | str, sig: nmt.NmtSignature | None = None) -> RuleSet:
    """Monoidal-category and nominal-set equations plus the theory's own.

    Args:
        theory: Any theory; ordered ones are mapped to their nominal counterpart.
        sig: Signature used to typecheck rewrites (defaults to the theory's).
    """
    theory = Theory(theory).nominal
    if sig is None:
        sig = nmt.nmt_theory_signature(theory)
    rules = _monoidal_rules() + _nominal_set_rules()
    if theory is not Theory.FREE:
        rules += _nominal_theory_rules(theory)
    return RuleSet(theory, tuple(rules), sig)


# ---- Ordered: symmetric monoidal category ----


def _smt_term(rng: random.Random, sig: SmtSignature, arity: int | None = None) -> smt.SmtTerm:
    return sampling.random_smt_term(rng, sig, arity, layers=rng.randint(1, 2), max_width=3)


def _coarity(t: smt.SmtTerm, sig: SmtSignature) -> int:
    return smt.smt_typecheck(t, sig)[1]


def _smt_term_sample(rng: random.Random, sig: SmtSignature) -> Binding:
    t = _smt_term(rng, sig)
    m, n = smt.smt_typecheck(t, sig)
    return {"t": t, "m": m, "n": n}


def _smt_chained(rng: random.Random, sig: SmtSignature, k: int) -> list[smt.SmtTerm]:
    terms = [_smt_term(rng, sig)]
    for _ in range(k - 1):
        terms.append(_smt_term(rng, sig, _coarity(terms[-1], sig)))
    return terms


def _smt_interchange_sample(rng: random.Random, sig: SmtSignature) -> Binding:
    s, u = _smt_term(rng, sig), _smt_term(rng, sig)
    return {"s": s, "u": u, "t": _smt_term(rng, sig, _coarity(s, sig)), "v": _smt_term(rng, sig, _coarity(u, sig))}


def _arity_where(var: str, side: int) -> Where:
    def where(bind: Binding, ctx: RewriteContext, direction: Direction) -> Iterator[Binding]:
        settled = _settle(bind, var, ctx.interface(bind["t"])[side])
        if settled is not None:
            yield settled

    return where


def _naturality_where(bind: Binding, ctx: RewriteContext, direction: Direction) -> Iterator[Binding]:
    m, n = ctx.interface(bind["t"])
    settled = _settle(bind, "m", m)
    settled = _settle(settled, "n", n) if settled is not None else None
    if settled is not None:
        yield settled


def _smc_rules() -> list[Rule]:
    return [
        Rule(
            "id-left",
            SeqP(IdN("m"), Var("t")),
            Var("t"),
            nominal=False,
            where=_arity_where("m", 0),
            orient=LR,
            sampler=_smt_term_sample,
        ),
        Rule(
            "id-right",
            SeqP(Var("t"), IdN("n")),
            Var("t"),
            nominal=False,
            where=_arity_where("n", 1),
            orient=LR,
            sampler=_smt_term_sample,
        ),
        Rule(
            "unit-left",
            ParP(UnitP(), Var("t"), keep_units=True),
            Var("t"),
            nominal=False,
            orient=LR,
            sampler=_smt_term_sample,
        ),
        Rule(
            "unit-right",
            ParP(Var("t"), UnitP(), keep_units=True),
            Var("t"),
            nominal=False,
            orient=LR,
            sampler=_smt_term_sample,
        ),
        Rule(
            "seq-assoc",
            SeqP(SeqP(Var("r"), Var("s")), Var("t")),
            SeqP(Var("r"), SeqP(Var("s"), Var("t"))),
            nominal=False,
            sampler=lambda rng, sig: dict(zip("rst", _smt_chained(rng, sig, 3))),
        ),
        Rule(
            "par-assoc",
            ParP(ParP(Var("r"), Var("s")), Var("t")),
            ParP(Var("r"), ParP(Var("s"), Var("t"))),
            nominal=False,
            sampler=lambda rng, sig: {v: _smt_term(rng, sig) for v in "rst"},
        ),
        Rule(
            "interchange",
            ParP(SeqP(Var("s"), Var("t")), SeqP(Var("u"), Var("v"))),
            SeqP(ParP(Var("s"), Var("u")), ParP(Var("t"), Var("v"))),
            nominal=False,
            orient=RL,
            sampler=_smt_interchange_sample,
        ),
        Rule(
            "sym-involution",
            Lit(smt.Seq(smt.Sym(), smt.Sym())),
            Lit(smt.smt_id(2)),
            nominal=False,
            orient=LR,
            sampler=lambda rng, sig: {},
        ),
        Rule(
            "naturality",
            SeqP(ParP(Var("t"), IdN("z")), SymP("n", "z")),
            SeqP(SymP("m", "z"), ParP(IdN("z"), Var("t"))),
            nominal=False,
            where=_naturality_where,
            sampler=lambda rng, sig: {**_smt_term_sample(rng, sig), "z": rng.randint(0, 2)},
        ),
    ]


# ---- Ordered theories ----


def _law(name: str, lhs: str, rhs: str, orient: Direction | None = None) -> Rule:
    """A closed ordered equation written in term syntax."""
    return Rule(
        name,
        Lit(parse_smt(lhs)),
        Lit(parse_smt(rhs)),
        nominal=False,
        orient=orient,
        sampler=lambda rng, sig: {},
    )


def _ordered_theory_rules(theory: Theory) -> list[Rule]:
    generators = smt.smt_theory_signature(theory).generators
    rules: list[Rule] = []
    if LABEL_MULT in generators:
        rules += [
            _law("m-assoc", "(m + id) ; m", "(id + m) ; m"),
            _law("m-comm", "sym ; m", "m", LR),
        ]
    if LABEL_MULT in generators and LABEL_UNIT in generators:
        rules += [
            _law("m-unit", "(id + e) ; m", "id", LR),
            _law("m-unit-left", "(e + id) ; m", "id", LR),
        ]
    if LABEL_COUNIT in generators:
        rules += [
            _law("e-discard", "e ; ec", "unit", LR),
            _law("m-discard", "m ; ec", "ec + ec", LR),
        ]
    if LABEL_COMULT in generators:
        rules += [
            _law("mc-coassoc", "mc ; (mc + id)", "mc ; (id + mc)"),
            _law("mc-cocomm", "mc ; sym", "mc", LR),
            _law("mc-counit", "mc ; (id + ec)", "id", LR),
            _law("special", "mc ; m", "id", LR),
            _law("bimonoid", "m ; mc", "(mc + mc) ; (id + sym + id) ; (m + m)"),
            _law("e-copy", "e ; mc", "e + e", LR),
        ]
    return rules


def smt_rules(theory: Theory | str, sig: SmtSignature | None = None) -> RuleSet:
    """Symmetric monoidal equations plus the theory's own.

    Args:
        theory: Any theory; nominal ones are mapped to their ordered counterpart.
        sig: Signature used to typecheck rewrites (defaults to the theory's).
    """
    theory = Theory(theory).ordered
    if sig is None:
        sig = smt.smt_theory_signature(theory)
    rules = _smc_rules()
    if theory is not Theory.FREE:
        rules += _ordered_theory_rules(theory)
    return RuleSet(theory, tuple(rules), sig)


def corrupted_rule() -> Rule:
    """``δ_ab ; δ_bc = δ_ab``: an unsound rule the soundness check must reject."""
    chain = next(r for r in _nominal_set_rules() if r.name == "delta-chain")
    return Rule("corrupted-chain", chain.lhs, DeltaP("x", "y"), sampler=chain.sampler)
