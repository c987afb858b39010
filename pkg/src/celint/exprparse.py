"""Recursive-descent parser for the textual expression grammar.

One grammar serves every textual input in the package: rational
functions in m, ring class expressions, and the structure-constant
strings of literal ring presentations. The parser is generic over an
algebra object supplying the value type and its operations, so each
caller decides what names mean and which operations are legal.

Grammar (left associative, ^ binds tightest):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-' | '+') factor | power
    power  := atom ('^' ('-')? INT)?
    atom   := INT | NAME | '[' NAME ']' | '(' expr ')'
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .exactnum import RF_M, RationalFunction

_NAME_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_NAME_CONT = _NAME_START | set("0123456789")
_DIGITS = set("0123456789")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch))
            i += 1
            continue
        if ch in _DIGITS:
            j = i
            while j < n and text[j] in _DIGITS:
                j += 1
            tokens.append(("int", text[i:j]))
            i = j
            continue
        if ch in _NAME_START:
            j = i
            while j < n and text[j] in _NAME_CONT:
                j += 1
            tokens.append(("name", text[i:j]))
            i = j
            continue
        if ch == "[":
            j = text.find("]", i)
            if j < 0:
                raise ParseError(f"unterminated '[' at position {i} in {text!r}")
            inner = text[i + 1 : j].strip()
            if not inner:
                raise ParseError(f"empty '[]' name at position {i} in {text!r}")
            tokens.append(("name", f"[{inner}]"))
            i = j + 1
            continue
        raise ParseError(f"unexpected character {ch!r} at position {i} in {text!r}")
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, text: str, algebra):
        self.text = text
        self.algebra = algebra
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.advance()
        if tok[0] != kind:
            raise ParseError(
                f"expected {kind!r} but found {tok[1]!r} in {self.text!r}"
            )
        return tok

    def parse(self):
        value = self.expr()
        if self.peek() != "end":
            tok = self.tokens[self.pos]
            raise ParseError(f"trailing input at {tok[1]!r} in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            value = self.algebra.add(value, rhs) if op == "+" else self.algebra.sub(value, rhs)
        return value

    def term(self):
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.advance()[0]
            rhs = self.factor()
            value = self.algebra.mul(value, rhs) if op == "*" else self.algebra.div(value, rhs)
        return value

    def factor(self):
        if self.peek() in ("+", "-"):
            op = self.advance()[0]
            value = self.factor()
            return self.algebra.neg(value) if op == "-" else value
        return self.power()

    def power(self):
        value = self.atom()
        if self.peek() == "^":
            self.advance()
            sign = 1
            if self.peek() == "-":
                self.advance()
                sign = -1
            tok = self.expect("int")
            value = self.algebra.pow(value, sign * int(tok[1]))
        return value

    def atom(self):
        kind, text = self.advance()
        if kind == "int":
            return self.algebra.const(Fraction(int(text)))
        if kind == "name":
            return self.algebra.name(text)
        if kind == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected token {text!r} in {self.text!r}")


def parse_expression(text: str, algebra):
    """Parse text with the given algebra; raises ParseError on any malformed input."""
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}")
    return _Parser(text, algebra).parse()


class RFAlgebra:
    """Algebra of rational functions in m; the only legal name is m itself."""

    @staticmethod
    def const(c: Fraction) -> RationalFunction:
        return RationalFunction.constant(c)

    @staticmethod
    def name(name: str) -> RationalFunction:
        if name != "m":
            raise ParseError(f"unknown name {name!r} in a rational function")
        return RF_M

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def div(a, b):
        from .errors import DivisionByZero

        if b.is_zero():
            raise ParseError("division by zero in expression")
        return a / b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def pow(a, k: int):
        return a**k


def parse_rf(text: str) -> RationalFunction:
    """Parse a rational function in m."""
    return parse_expression(text, RFAlgebra)
