"""Hand-written recursive-descent parsers for term, signature and substitution text."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass

from nomdiag import nmt, smt
from nomdiag.constants import NMT_RESERVED, SMT_RESERVED
from nomdiag.errors import ParseError
from nomdiag.names import FinPerm, Name, perm_compose, transposition
from nomdiag.smt import SmtSignature, Theory

logger = logging.getLogger(__name__)

_TOKEN = re.compile(
    r"\s*(?:(?P<name>_?[a-z][a-z0-9]*|_[0-9]+)|(?P<punct>[()\[\];|+>,:])|(?P<num>[0-9]+)|(?P<arrow>->))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        if text[pos] == "#":
            # comment to end of line
            end = text.find("\n", pos)
            pos = len(text) if end == -1 else end
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped or stripped.startswith("#"):
                pos = len(text) - len(stripped)
                if not stripped:
                    break
                continue
            raise ParseError(f"unexpected character {stripped[0]!r}", len(text) - len(stripped))
        kind = m.lastgroup or "punct"
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.i = 0
        self.length = len(text)

    def peek(self, offset: int = 0) -> Token | None:
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.text == text

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.length)
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.pos)
        return tok

    def done(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)


class _NmtParser(_Parser):
    def __init__(self, text: str, allow_machine: bool) -> None:
        super().__init__(text)
        self.allow_machine = allow_machine

    def name(self) -> Name:
        tok = self.next()
        if tok.kind != "name":
            raise ParseError(f"expected a name, found {tok.text!r}", tok.pos)
        try:
            return Name.parse(tok.text, allow_machine=self.allow_machine)
        except ParseError as exc:
            raise ParseError(str(exc), tok.pos) from None

    def names_until(self, stop: str) -> list[Name]:
        result: list[Name] = []
        if self.at(stop):
            return result
        result.append(self.name())
        while self.at(","):
            self.next()
            result.append(self.name())
        return result

    def seq_term(self) -> nmt.NmtTerm:
        first = self.par_term()
        if self.at(";"):
            self.next()
            return nmt.Seq(first, self.seq_term())
        return first

    def par_term(self) -> nmt.NmtTerm:
        left = self.prefixed()
        if self.at("|"):
            self.next()
            return nmt.Par(left, self.par_term())
        return left

    def prefixed(self) -> nmt.NmtTerm:
        perm: FinPerm | None = None
        # "(a b)" is a transposition; "(" followed by anything else opens a group
        while self.at("(") and self._is_name(1) and self._is_name(2) and self.at(")", 3):
            self.next()
            a, b = self.name(), self.name()
            self.expect(")")
            swap = transposition(a, b)
            perm = swap if perm is None else perm_compose(perm, swap)
        body = self.atom()
        return body if perm is None else nmt.PermApp(perm, body)

    def _is_name(self, offset: int) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind == "name"

    def atom(self) -> nmt.NmtTerm:
        tok = self.next()
        if tok.text == "(":
            inner = self.seq_term()
            self.expect(")")
            return inner
        if tok.text == "[":
            a = self.name()
            self.expect(">")
            b = self.name()
            self.expect("]")
            return nmt.Delta(a, b)
        if tok.kind != "name":
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)
        if tok.text == "nil":
            return nmt.Empty()
        self.expect("(")
        if tok.text == "id":
            a = self.name()
            self.expect(")")
            return nmt.IdName(a)
        if tok.text == "d":
            a = self.name()
            self.expect(">")
            b = self.name()
            self.expect(")")
            return nmt.Delta(a, b)
        if tok.text.startswith("_") or tok.text in NMT_RESERVED:
            raise ParseError(f"invalid generator label {tok.text!r}", tok.pos)
        dom = self.names_until(">")
        self.expect(">")
        cod = self.names_until(")")
        self.expect(")")
        return nmt.Gen(nmt.GenInstance(tok.text, tuple(dom), tuple(cod)))


class _SmtParser(_Parser):
    def seq_term(self) -> smt.SmtTerm:
        first = self.par_term()
        if self.at(";"):
            self.next()
            return smt.Seq(first, self.seq_term())
        return first

    def par_term(self) -> smt.SmtTerm:
        left = self.atom()
        if self.at("+"):
            self.next()
            return smt.Par(left, self.par_term())
        return left

    def atom(self) -> smt.SmtTerm:
        tok = self.next()
        if tok.text == "(":
            inner = self.seq_term()
            self.expect(")")
            return inner
        if tok.kind != "name" or tok.text.startswith("_"):
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)
        if tok.text == "id":
            return smt.Id()
        if tok.text == "sym":
            return smt.Sym()
        if tok.text == "unit":
            return smt.Unit()
        return smt.Gen(tok.text)


def parse_nmt(text: str, *, allow_machine: bool = False) -> nmt.NmtTerm:
    """Parse a nominal term.

    Grammar: ``id(a)``, ``d(a>b)`` or ``[a>b]``, ``label(a,b>c)``, ``nil``,
    ``t | t`` (binds tighter), ``t ; t``, ``(a b) t`` and parentheses.

    Args:
        text: Source text.
        allow_machine: Accept ``_``-prefixed machine names.

    Raises:
        ParseError: On malformed input.
    """
    parser = _NmtParser(text, allow_machine)
    if parser.peek() is None:
        raise ParseError("empty input", 0)
    term = parser.seq_term()
    parser.done()
    return term


def parse_smt(text: str) -> smt.SmtTerm:
    """Parse an ordered term: ``id``, ``sym``, ``unit``, labels, ``t + t``, ``t ; t``."""
    parser = _SmtParser(text)
    if parser.peek() is None:
        raise ParseError("empty input", 0)
    term = parser.seq_term()
    parser.done()
    return term


def parse_signature(text: str, theory: Theory = Theory.FREE) -> SmtSignature:
    """Parse ``label : m -> n`` lines; blank lines and ``#`` comments are ignored.

    Raises:
        ParseError: Malformed line, reserved label or duplicate label.
    """
    generators: dict[str, tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"([a-z][a-z0-9]*)\s*:\s*([0-9]+)\s*->\s*([0-9]+)", line)
        if m is None:
            raise ParseError(f"line {lineno}: expected 'label : m -> n'")
        label = m.group(1)
        if label in SMT_RESERVED or label in NMT_RESERVED:
            raise ParseError(f"line {lineno}: {label!r} is reserved")
        if label in generators:
            raise ParseError(f"line {lineno}: duplicate generator {label!r}")
        generators[label] = (int(m.group(2)), int(m.group(3)))
    return SmtSignature(generators, theory)


def parse_name_list(text: str, *, allow_machine: bool = False) -> list[Name]:
    """Comma separated names, e.g. ``a,c``; the empty string is the empty list."""
    items = [item.strip() for item in text.split(",") if item.strip()]
    return [Name.parse(item, allow_machine=allow_machine) for item in items]
