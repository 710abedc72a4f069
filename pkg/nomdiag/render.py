"""Graphviz DOT rendering of string diagrams."""
from __future__ import annotations

import logging

from graphviz import Digraph

from nomdiag import nmt, smt
from nomdiag.bridge import builtin_signature, nom_term, ordinal_names
from nomdiag.names import FinPerm, Name, enumerate_names
from nomdiag.smt import SmtSignature

logger = logging.getLogger(__name__)


class _Diagram:
    """Accumulates generator nodes and named wires while walking a term."""

    def __init__(self, dot: Digraph) -> None:
        self.dot = dot
        self.count = 0

    def node(self, label: str, **attrs: str) -> str:
        node_id = f"g{self.count}"
        self.count += 1
        self.dot.node(node_id, label, **attrs)
        return node_id

    def walk(self, t: nmt.NmtTerm, incoming: dict[Name, str]) -> dict[Name, str]:
        """Map each output name of ``t`` to the node its wire leaves from."""
        if isinstance(t, nmt.Empty):
            return {}
        if isinstance(t, nmt.IdName):
            return {t.a: incoming[t.a]}
        if isinstance(t, nmt.Delta):
            return {t.b: incoming[t.a]}
        if isinstance(t, nmt.Gen):
            node_id = self.node(t.inst.label, shape="box")
            for a in t.inst.dom:
                self.dot.edge(incoming[a], node_id, label=str(a))
            return {b: node_id for b in t.inst.cod}
        if isinstance(t, nmt.Par):
            left_dom, _ = nmt.nmt_typecheck(t.left)
            left = self.walk(t.left, {a: v for a, v in incoming.items() if a in left_dom})
            right = self.walk(t.right, {a: v for a, v in incoming.items() if a not in left_dom})
            return {**left, **right}
        if isinstance(t, nmt.Seq):
            return self.walk(t.second, self.walk(t.first, incoming))
        raise TypeError(f"not an NMT term: {t!r}")


def render_nmt(t: nmt.NmtTerm, *, title: str | None = None) -> str:
    """DOT source with one node per generator occurrence and one edge per wire.

    Boundary names become plain ``in``/``out`` nodes; an edge is labelled
    with the name its wire carries where it enters the target. Node ids are
    assigned in traversal order, so equal terms render identically.
    """
    t = nmt.perm_act_term(FinPerm.identity(), t)
    dom, cod = nmt.nmt_typecheck(t)
    dot = Digraph(comment=title or nmt.format_nmt(t))
    dot.attr(rankdir="LR")
    diagram = _Diagram(dot)
    incoming = {a: diagram.node(str(a), shape="plaintext") for a in enumerate_names(dom)}
    outgoing = diagram.walk(t, incoming)
    for b in enumerate_names(cod):
        target = diagram.node(str(b), shape="plaintext")
        dot.edge(outgoing[b], target, label=str(b))
    logger.debug("rendered nodes=%d", diagram.count)
    return dot.source


def render_smt(t: smt.SmtTerm, sig: SmtSignature | None = None) -> str:
    """Render an ordered term through its naming along ordinal names."""
    m, n = smt.smt_typecheck(t, sig or builtin_signature())
    return render_nmt(nom_term(t, ordinal_names(m), ordinal_names(n), sig), title=smt.format_smt(t))
