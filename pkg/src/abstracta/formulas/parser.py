"""Recursive-descent parser for the formula language.

Grammar, loosest binding first::

    formula := implies ("iff" implies)*
    implies := disj ("implies" implies)?          right associative
    disj    := conj ("or" conj)*
    conj    := unary ("and" unary)*
    unary   := "not" unary | ("forall"|"exists") VAR unary
             | "(" formula ")" | atom
    atom    := oterm "=" oterm | oterm "in" cterm | cterm "=" cterm
             | "E(" cterm "," cterm ")" | "Cmp(" cterm ")"
             | "card(" cterm ")" ("="|"<="|"<") ("card(" cterm ")" | INT | "omega")
    cterm   := cbase (("union"|"inter"|"minus") cbase)*
    cbase   := UVAR | "empty" | "universe" | "{" ints "}" | "complement(" cterm ")"
             | "(" cterm ")"
    oterm   := LVAR | "abs(" cterm ")"

A quantifier scopes over the next unary formula only, so write
``forall x (A and B)`` rather than ``forall x A and B``.  ``#`` starts a
comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    Abs,
    BinOp,
    Card,
    CmpAtom,
    Compl,
    ConEq,
    CVar,
    EAtom,
    Empty,
    Lit,
    Mem,
    Not,
    ObjEq,
    Omega,
    OVar,
    Quant,
    SetOp,
    Universe,
)

KEYWORDS = {
    "forall", "exists", "not", "and", "or", "implies", "iff", "in",
    "union", "inter", "minus", "empty", "universe", "complement",
    "card", "abs", "omega", "E", "Cmp",
}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+|\#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<int>\d+)"
    r"|(?P<sym><=|[<=(){},])"
)


class ParseError(ValueError):
    def __init__(self, line: int, column: int, expected: str, found: str = ""):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        msg = f"line {line}, column {column}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)

    @property
    def position(self) -> tuple[int, int]:
        return (self.line, self.column)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | int | sym | eof
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(line, col, "a token", text[pos])
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, line, col))
        for i, ch in enumerate(chunk):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, free: tuple[str, ...]):
        self.tokens = tokenize(text)
        self.i = 0
        self.scope: list[str] = list(free)

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, text: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def fail(self, expected: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(tok.line, tok.column, expected, tok.text or "end of input")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    # formulas

    def formula(self):
        left = self.implication()
        while self.accept("iff"):
            left = BinOp("iff", left, self.implication())
        return left

    def implication(self):
        left = self.disjunction()
        if self.accept("implies"):
            return BinOp("implies", left, self.implication())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.accept("or"):
            left = BinOp("or", left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.accept("and"):
            left = BinOp("and", left, self.unary())
        return left

    def unary(self):
        if self.accept("not"):
            return Not(self.unary())
        if self.at("forall") or self.at("exists"):
            kind = self.tok.text
            self.i += 1
            tok = self.tok
            if tok.kind != "ident" or tok.text in KEYWORDS:
                self.fail("a variable")
            self.i += 1
            self.scope.append(tok.text)
            try:
                body = self.unary()
            finally:
                self.scope.pop()
            return Quant(kind, tok.text, body)
        if self.at("("):
            start = self.i
            try:
                self.i += 1
                inner = self.formula()
                self.expect(")")
                return inner
            except ParseError as err:
                # maybe a parenthesised concept term opening an atom
                self.i = start
                try:
                    return self.atom()
                except ParseError:
                    raise err from None
        return self.atom()

    def atom(self):
        tok = self.tok
        if self.at("E") and self.peek().text == "(":
            self.i += 2
            left = self.cterm()
            self.expect(",")
            right = self.cterm()
            self.expect(")")
            return EAtom(left, right)
        if self.at("Cmp") and self.peek().text == "(":
            self.i += 2
            arg = self.cterm()
            self.expect(")")
            return CmpAtom(arg)
        if self.at("card"):
            self.i += 1
            self.expect("(")
            left = self.cterm()
            self.expect(")")
            op_tok = self.tok
            if op_tok.text not in ("=", "<=", "<") or op_tok.kind != "sym":
                self.fail("'=', '<=' or '<'")
            self.i += 1
            if self.accept("omega"):
                right = Omega()
            elif self.tok.kind == "int":
                right = int(self.tok.text)
                self.i += 1
            elif self.accept("card"):
                self.expect("(")
                right = self.cterm()
                self.expect(")")
            else:
                self.fail("'card(', an integer or 'omega'")
            return Card(left, op_tok.text, right)
        if self._starts_oterm():
            left = self.oterm()
            if self.accept("="):
                return ObjEq(left, self.oterm())
            if self.accept("in"):
                return Mem(left, self.cterm())
            self.fail("'=' or 'in'")
        if self._starts_cterm():
            left = self.cterm()
            self.expect("=")
            return ConEq(left, self.cterm())
        self.fail("a formula", tok)

    # terms

    def _starts_oterm(self) -> bool:
        tok = self.tok
        if tok.kind != "ident":
            return False
        if tok.text == "abs":
            return True
        return tok.text not in KEYWORDS and not tok.text[0].isupper()

    def _starts_cterm(self) -> bool:
        tok = self.tok
        if tok.kind == "sym":
            return tok.text in ("{", "(")
        if tok.kind != "ident":
            return False
        if tok.text in ("empty", "universe", "complement"):
            return True
        return tok.text not in KEYWORDS and tok.text[0].isupper()

    def _variable(self, sort: str) -> str:
        tok = self.tok
        self.i += 1
        if tok.text not in self.scope:
            raise ParseError(tok.line, tok.column, f"a bound {sort} variable", tok.text)
        return tok.text

    def oterm(self):
        if self.accept("abs"):
            self.expect("(")
            arg = self.cterm()
            self.expect(")")
            return Abs(arg)
        if not self._starts_oterm():
            self.fail("an object term")
        return OVar(self._variable("object"))

    def cterm(self):
        left = self.cbase()
        while self.tok.text in ("union", "inter", "minus") and self.tok.kind == "ident":
            op = self.tok.text
            self.i += 1
            left = SetOp(op, left, self.cbase())
        return left

    def cbase(self):
        if self.accept("empty"):
            return Empty()
        if self.accept("universe"):
            return Universe()
        if self.accept("complement"):
            self.expect("(")
            arg = self.cterm()
            self.expect(")")
            return Compl(arg)
        if self.accept("{"):
            elems = []
            if not self.at("}"):
                while True:
                    if self.tok.kind != "int":
                        self.fail("an object index")
                    elems.append(int(self.tok.text))
                    self.i += 1
                    if not self.accept(","):
                        break
            self.expect("}")
            return Lit(tuple(elems))
        if self.accept("("):
            inner = self.cterm()
            self.expect(")")
            return inner
        tok = self.tok
        if tok.kind == "ident" and tok.text not in KEYWORDS and tok.text[0].isupper():
            return CVar(self._variable("concept"))
        self.fail("a concept term")


def parse(text: str, free: tuple[str, ...] = ()):
    """Parse a formula; variables other than ``free`` must be bound.

    Raises :class:`ParseError` with a line/column position.
    """
    p = _Parser(text, tuple(free))
    out = p.formula()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return out
