"""Recursive-descent parser for operator expressions.

Grammar (whitespace insignificant):

    expr   := term (("+"|"-") term)*
    term   := factor ("*" factor)*
    factor := atom ("^" UINT)?
    atom   := RATIONAL | "L(" ID ")" | "Ls(" ID ")" | "V(" ID ")"
            | "adj(" expr ")" | "(" expr ")"

L(e) is the creation operator of edge e, Ls(e) its adjoint, V(v) the vertex
projection; a bare rational scales the identity.  Rationals stay exact;
decimals evaluate to floats.  ``format_element`` prints any element back in
this grammar, so parse/print round-trips.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import Element, adjoint, annihilation, creation, identity, projection
from .graphs import Graph, GraphSpecError


class ExprSyntaxError(ValueError):
    """Parse failure with the character position where it happened."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d+|\d+)|(?P<word>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<sym>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ExprSyntaxError(
                f"unexpected character {stripped[0]!r}", len(text) - len(stripped)
            )
        if m.group("num"):
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("word"):
            tokens.append(("word", m.group("word"), m.start("word")))
        else:
            tokens.append(("sym", m.group("sym"), m.start("sym")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, graph: Graph):
        self.tokens = _tokenize(text)
        self.graph = graph
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_sym(self, sym: str) -> None:
        kind, val, pos = self.advance()
        if kind != "sym" or val != sym:
            raise ExprSyntaxError(f"expected {sym!r}, found {val or 'end'!r}", pos)

    def parse(self) -> Element:
        el = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"trailing input {val!r}", pos)
        return el

    def expr(self) -> Element:
        acc = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                self.advance()
                rhs = self.term()
                acc = acc + rhs if val == "+" else acc - rhs
            else:
                return acc

    def term(self) -> Element:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val == "*":
                self.advance()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Element:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "sym" and val == "^":
            self.advance()
            kind, val, pos = self.advance()
            if kind != "num" or "." in val:
                raise ExprSyntaxError("exponent must be an unsigned integer", pos)
            return base ** int(val)
        return base

    def atom(self) -> Element:
        kind, val, pos = self.advance()
        if kind == "sym" and val == "-":
            # signed rational literal
            return self.atom().scaled(-1)
        if kind == "num":
            return identity(self.graph).scaled(self._number(val, pos))
        if kind == "sym" and val == "(":
            el = self.expr()
            self.expect_sym(")")
            return el
        if kind == "word":
            if val in ("L", "Ls", "V"):
                self.expect_sym("(")
                ikind, ident, ipos = self.advance()
                if ikind not in ("word", "num"):
                    raise ExprSyntaxError("expected an identifier", ipos)
                self.expect_sym(")")
                return self._generator(val, ident, ipos)
            if val == "adj":
                self.expect_sym("(")
                el = self.expr()
                self.expect_sym(")")
                return adjoint(el)
            raise ExprSyntaxError(f"unknown function {val!r}", pos)
        raise ExprSyntaxError(f"unexpected token {val or 'end'!r}", pos)

    def _number(self, text: str, pos: int):
        if "." in text:
            return float(text)
        value = Fraction(int(text))
        kind, val, _ = self.peek()
        if kind == "sym" and val == "/":
            # only a rational when a digit run follows immediately
            nxt = self.tokens[self.i + 1]
            if nxt[0] == "num" and "." not in nxt[1]:
                self.advance()
                self.advance()
                if int(nxt[1]) == 0:
                    raise ExprSyntaxError("zero denominator", nxt[2])
                value = Fraction(int(text), int(nxt[1]))
        return value

    def _generator(self, fn: str, ident: str, pos: int) -> Element:
        try:
            if fn == "V":
                return projection(self.graph, ident)
            w = self.graph.path([ident])
        except GraphSpecError as exc:
            raise ExprSyntaxError(str(exc), pos) from None
        return creation(w) if fn == "L" else annihilation(w)


def parse_element_expr(text: str, g: Graph) -> Element:
    """Parse an operator expression over the given graph."""
    return _Parser(text, g).parse()


def _coeff_str(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, float):
        return repr(c)
    return str(c)


def format_element(a: Element) -> str:
    """Print an element in the expression grammar; parse(format(a)) == a."""
    if a.is_zero():
        return "0"
    parts = []
    for c, u, w in a.monomials():
        factors = [f"L({e})" for e in u.edges]
        factors += [f"Ls({e})" for e in reversed(w.edges)]
        if not factors:
            factors = [f"V({u.src})"]
        if c != 1:
            factors.insert(0, _coeff_str(c))
        parts.append("*".join(factors))
    return " + ".join(parts)
