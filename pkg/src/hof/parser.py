"""Recursive-descent parser for ``.hof`` source.

Grammar::

    program  := def* "main" "=" term
    def      := "def" IDENT ":" type "=" term
    term     := "\\" IDENT ":" type "." term | atom+
    atom     := NAT | IDENT | "succ" | "add" | "id" "[" type "]"
              | "pr" "[" NAT "]" "(" term "," term ")"
              | "iter" "[" type "]" | "comp" "[" type "," type "," type "]"
              | "(" term "," term ")" | "fst" atom | "snd" atom | "(" term ")"
    type     := tatom ("->" type)?
    tatom    := "N" | "(" type ")" | "(" type ";" type ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import syntax as S
from .ty import Arrow, N, Prod, Ty

KEYWORDS = {"def", "main", "succ", "add", "id", "pr", "iter", "comp", "fst", "snd", "N"}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<nat>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[\\:.()\[\],;=λ])
    """,
    re.VERBOSE,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected: frozenset[str] = frozenset()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = expected
        exp = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{line}:{col}: {message}{exp}")


@dataclass(frozen=True)
class Token:
    kind: str  # "nat", "ident", "kw", "sym", "eof"
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    toks = []
    line, line_start, i = 1, 0, 0
    while i < len(src):
        m = _TOKEN.match(src, i)
        if m is None:
            raise ParseError(f"unexpected character {src[i]!r}", line, i - line_start + 1)
        kind, text = m.lastgroup, m.group()
        col = i - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            toks.append(Token("kw" if text in KEYWORDS else "ident", text, line, col))
        elif kind == "arrow":
            toks.append(Token("sym", "->", line, col))
        elif kind == "sym":
            toks.append(Token("sym", "\\" if text == "λ" else text, line, col))
        elif kind == "nat":
            toks.append(Token("nat", text, line, col))
        i = m.end()
    toks.append(Token("eof", "", line, i - line_start + 1))
    return toks


_ATOM_START = frozenset({"NAT", "IDENT", "succ", "add", "id", "pr", "iter", "comp", "fst", "snd", "("})


@dataclass
class Program:
    defs: list[tuple[str, Ty, S.Term]]
    main: S.Term

    def inline(self) -> S.Term:
        """Substitute every definition into ``main`` (definitions are closed)."""
        env: list[tuple[str, S.Term]] = []
        for name, _, body in self.defs:
            for prev, val in reversed(env):
                body = S.subst(body, prev, val)
            env.append((name, body))
        t = self.main
        for name, val in reversed(env):
            t = S.subst(t, name, val)
        return t


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def _is(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "kw") and t.text == text

    def fail(self, expected) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return ParseError(f"unexpected {found}", t.line, t.col, frozenset(expected))

    def expect(self, text: str) -> Token:
        if not self._is(text):
            raise self.fail({text})
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self.fail({"IDENT"})
        t = self.tok
        self.i += 1
        return t

    def nat(self) -> int:
        if self.tok.kind != "nat":
            raise self.fail({"NAT"})
        t = self.tok
        self.i += 1
        return int(t.text)

    # types

    def type_(self) -> Ty:
        left = self.tatom()
        if self._is("->"):
            self.i += 1
            return Arrow(left, self.type_())
        return left

    def tatom(self) -> Ty:
        if self._is("N"):
            self.i += 1
            return N
        if self._is("("):
            self.i += 1
            t = self.type_()
            if self._is(";"):
                self.i += 1
                r = self.type_()
                self.expect(")")
                return Prod(t, r)
            if not self._is(")"):
                raise self.fail({";", ")", "->"})
            self.i += 1
            return t
        raise self.fail({"N", "("})

    # terms

    def term(self) -> S.Term:
        if self._is("\\"):
            start = self.tok
            self.i += 1
            name = self.ident().text
            self.expect(":")
            annot = self.type_()
            self.expect(".")
            return S.Lam(name, annot, self.term(), pos=(start.line, start.col))
        head = self.atom()
        while self._atom_ahead():
            arg = self.atom()
            head = S.App(head, arg, pos=head.pos)
        return head

    def _atom_ahead(self) -> bool:
        t = self.tok
        if t.kind in ("nat", "ident"):
            return True
        return t.kind in ("kw", "sym") and t.text in _ATOM_START

    def atom(self) -> S.Term:
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "nat":
            n = self.nat()
            if n < 1:
                raise ParseError("numerals start at 1", t.line, t.col)
            return S.Lit(n, pos=pos)
        if t.kind == "ident":
            self.i += 1
            return S.Var(t.text, pos=pos)
        if self._is("succ"):
            self.i += 1
            return S.Succ(pos=pos)
        if self._is("add"):
            self.i += 1
            return S.Add(pos=pos)
        if self._is("id"):
            self.i += 1
            self.expect("[")
            ty = self.type_()
            self.expect("]")
            return S.IdAt(ty, pos=pos)
        if self._is("iter"):
            self.i += 1
            self.expect("[")
            ty = self.type_()
            self.expect("]")
            return S.Iter(ty, pos=pos)
        if self._is("comp"):
            self.i += 1
            self.expect("[")
            a = self.type_()
            self.expect(",")
            b = self.type_()
            self.expect(",")
            c = self.type_()
            self.expect("]")
            return S.Comp(a, b, c, pos=pos)
        if self._is("pr"):
            self.i += 1
            self.expect("[")
            k = self.nat()
            self.expect("]")
            self.expect("(")
            h = self.term()
            self.expect(",")
            g = self.term()
            self.expect(")")
            return S.PR(h, g, k, pos=pos)
        if self._is("fst"):
            self.i += 1
            return S.Fst(self.atom(), pos=pos)
        if self._is("snd"):
            self.i += 1
            return S.Snd(self.atom(), pos=pos)
        if self._is("("):
            self.i += 1
            inner = self.term()
            if self._is(","):
                self.i += 1
                r = self.term()
                self.expect(")")
                return S.Pair(inner, r, pos=pos)
            if not self._is(")"):
                raise self.fail({",", ")"} | _ATOM_START)
            self.i += 1
            return inner
        raise self.fail(_ATOM_START | {"\\"})

    def program(self) -> Program:
        defs = []
        while self._is("def"):
            self.i += 1
            name = self.ident().text
            self.expect(":")
            ty = self.type_()
            self.expect("=")
            defs.append((name, ty, self.term()))
        self.expect("main")
        self.expect("=")
        main = self.term()
        self.end()
        return Program(defs, main)

    def end(self):
        if self.tok.kind != "eof":
            raise self.fail({"end of input"})


def parse(src: str) -> S.Term:
    p = _Parser(src)
    t = p.term()
    p.end()
    return t


def parse_type(src: str) -> Ty:
    p = _Parser(src)
    t = p.type_()
    p.end()
    return t


def parse_program(src: str) -> Program:
    return _Parser(src).program()
