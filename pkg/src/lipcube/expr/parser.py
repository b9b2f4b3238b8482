"""Recursive-descent parser for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' integer)?
    atom   := number | 'x' | 'y' | ident '(' expr (',' expr)? ')' | '(' expr ')'
    ident  := 'abs'|'sin'|'cos'|'exp'|'sqrt'|'min'|'max'

Whitespace is insignificant; there is no implicit multiplication.  Error
positions are 0-based byte offsets into the input (end-of-input errors point
one past the last byte).
"""

from __future__ import annotations

import re
from typing import NamedTuple

from .nodes import Binary, Const, Expr, Unary, Var


class ParseError(Exception):
    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message
        super().__init__(f"parse error at offset {position}: {message}")


_FUNCTIONS = {"abs": 1, "sin": 1, "cos": 1, "exp": 1, "sqrt": 1, "min": 2, "max": 2}

_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_INTEGER = re.compile(r"\d+\Z")


class _Token(NamedTuple):
    kind: str  # "num" | "ident" | "sym" | "end"
    text: str
    pos: int


def _lex(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            m = _NUMBER.match(text, i)
            if m is None:
                raise ParseError(i, f"malformed number starting at {ch!r}")
            tokens.append(_Token("num", m.group(), i))
            i = m.end()
        elif ch.isalpha() or ch == "_":
            m = _IDENT.match(text, i)
            tokens.append(_Token("ident", m.group(), i))
            i = m.end()
        elif ch in "+-*/^(),":
            tokens.append(_Token("sym", ch, i))
            i += 1
        else:
            raise ParseError(i, f"unexpected character {ch!r}")
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def accept_sym(self, text: str) -> _Token | None:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == text:
            return self.advance()
        return None

    def expect_sym(self, text: str, what: str) -> _Token:
        tok = self.accept_sym(text)
        if tok is None:
            raise ParseError(self.peek().pos, f"expected {what}")
        return tok

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text in "+-":
                self.advance()
                rhs = self.parse_term()
                node = Binary("add" if tok.text == "+" else "sub", node, rhs, tok.pos)
            else:
                return node

    def parse_term(self) -> Expr:
        node = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.text in "*/":
                self.advance()
                rhs = self.parse_factor()
                node = Binary("mul" if tok.text == "*" else "div", node, rhs, tok.pos)
            else:
                return node

    def parse_factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "-":
            self.advance()
            return Unary("neg", self.parse_factor(), tok.pos)
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "^":
            self.advance()
            exp_tok = self.peek()
            if exp_tok.kind != "num" or not _INTEGER.match(exp_tok.text):
                raise ParseError(exp_tok.pos,
                                 "exponent must be a nonnegative integer literal")
            self.advance()
            return Binary("pow", base, Const(float(int(exp_tok.text)), exp_tok.pos),
                          tok.pos)
        return base

    def parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Const(float(tok.text), tok.pos)
        if tok.kind == "ident":
            self.advance()
            if tok.text in ("x", "y"):
                return Var(tok.text, tok.pos)
            arity = _FUNCTIONS.get(tok.text)
            if arity is None:
                raise ParseError(tok.pos, f"unknown identifier {tok.text!r}")
            self.expect_sym("(", f"'(' after {tok.text!r}")
            first = self.parse_expr()
            if arity == 1:
                comma = self.peek()
                if comma.kind == "sym" and comma.text == ",":
                    raise ParseError(comma.pos,
                                     f"{tok.text!r} expects 1 argument")
                self.expect_sym(")", "')'")
                return Unary(tok.text, first, tok.pos)
            # min/max take exactly two arguments
            sep = self.peek()
            if not (sep.kind == "sym" and sep.text == ","):
                raise ParseError(sep.pos, f"{tok.text!r} expects 2 arguments")
            self.advance()
            second = self.parse_expr()
            self.expect_sym(")", "')'")
            return Binary(tok.text, first, second, tok.pos)
        if tok.kind == "sym" and tok.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect_sym(")", "')'")
            return inner
        if tok.kind == "end":
            raise ParseError(tok.pos, "unexpected end of input, expected an operand")
        raise ParseError(tok.pos, f"unexpected {tok.text!r}, expected an operand")


def parse(text: str) -> Expr:
    """Parse source text into an Expr; raises ParseError on malformed input."""
    parser = _Parser(text)
    node = parser.parse_expr()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ParseError(trailing.pos,
                         f"unexpected input after expression: {trailing.text!r}")
    return node
