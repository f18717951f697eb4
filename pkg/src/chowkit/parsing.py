"""Recursive-descent parser for polynomial expressions.

Grammar (whitespace is insignificant between tokens)::

    expr     := term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' nat)?
    base     := rational | var | '(' expr ')' | '-' base
    rational := int ('/' nat)?

Note that unary minus lives at the ``base`` level, so it binds *before*
exponentiation: ``-T1^2`` denotes ``(-T1)^2``.  The text formatter in
:mod:`chowkit.poly` is aware of this and never emits ambiguous output.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Polynomial, RING_VARS, Vars

__all__ = ["ParseError", "parse"]

_SYMBOLS = set("+-*^/()")


class ParseError(ValueError):
    """Raised on malformed input; carries the 0-based offset of the problem."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _SYMBOLS:
            tokens.append((ch, ch, i))
            i += 1
        elif ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            tokens.append(("number", text[start:i], start))
        elif ch.isalpha() or ch == "_":
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(("name", text[start:i], start))
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Vars):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.vars = variables

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, str, int]:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, kind: str) -> tuple[str, str, int]:
        token = self.next()
        if token[0] != kind:
            raise ParseError(f"expected {kind!r}, found {token[1] or 'end of input'!r}", token[2])
        return token

    def parse_expr(self) -> Polynomial:
        result = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.parse_term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def parse_term(self) -> Polynomial:
        result = self.parse_factor()
        while self.peek()[0] == "*":
            self.next()
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> Polynomial:
        base = self.parse_base()
        if self.peek()[0] == "^":
            self.next()
            kind, value, position = self.expect("number")
            return base ** int(value)
        return base

    def parse_base(self) -> Polynomial:
        kind, value, position = self.next()
        if kind == "-":
            return -self.parse_base()
        if kind == "number":
            if self.peek()[0] == "/":
                self.next()
                _, denom, dpos = self.expect("number")
                if int(denom) == 0:
                    raise ParseError("zero denominator", dpos)
                return Polynomial.constant(self.vars, Fraction(int(value), int(denom)))
            return Polynomial.constant(self.vars, int(value))
        if kind == "name":
            if value not in self.vars:
                raise ParseError(f"unknown variable {value!r}", position)
            return Polynomial.variable(self.vars, value)
        if kind == "(":
            inner = self.parse_expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {value or 'end of input'!r}", position)


def parse(text: str, variables: Vars = RING_VARS) -> Polynomial:
    """Parse ``text`` into a :class:`Polynomial` over ``variables``.

    Raises :class:`ParseError` (a ``ValueError``) on syntax errors and on
    names outside the variable set, with the offending position attached.
    """
    parser = _Parser(text, tuple(variables))
    result = parser.parse_expr()
    kind, value, position = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing {value!r}", position)
    return result
