"""Text grammar for exact polynomials.

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' ['-'] INT)?
    atom    := INT | NAME | NAME '(' expr ')' | 'sqrt' '(' ['-'] INT ')' | '(' expr ')'

NAME is a variable (x1 x2 x y w t u v alpha beta) or a name bound in the
environment.  ``name(expr)`` substitutes ``expr`` into a bound univariate
polynomial.  Division is exact only by scalars and monomials.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .exact_arith import VARIABLE_ORDER, Poly, QuadScalar

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class ExpressionError(ValueError):
    def __init__(self, message, column):
        super().__init__(f"column {column}: {message}")
        self.message = message
        self.column = column


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1) + 1))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2) + 1))
        elif m.group(3) is not None:
            tokens.append(("op", m.group(3), m.start(3) + 1))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text, env):
        self.tokens = _tokenize(text)
        self.i = 0
        self.env = env or {}

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, col = self.take()
        if kind != "op" or val != value:
            raise ExpressionError(f"expected {value!r}", col)

    def parse(self):
        result = self.expr()
        kind, val, col = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected {val!r}", col)
        return result

    def expr(self):
        left = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                right = self.term()
                left = left + right if val == "+" else left - right
            else:
                return left

    def term(self):
        left = self.unary()
        while True:
            kind, val, col = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                right = self.unary()
                if val == "*":
                    left = left * right
                else:
                    left = self._divide(left, right, col)
            else:
                return left

    def _divide(self, left, right, col):
        if right.is_zero():
            raise ExpressionError("division by zero", col)
        try:
            return left / right
        except ValueError as exc:
            raise ExpressionError(str(exc), col) from None

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.unary()
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, col = self.peek()
        if kind == "op" and val == "^":
            self.take()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.take()
                sign = -1
            kind, n, col = self.take()
            if kind != "int":
                raise ExpressionError("exponent must be an integer literal", col)
            try:
                return base ** (sign * n)
            except ValueError as exc:
                raise ExpressionError(str(exc), col) from None
        return base

    def atom(self):
        kind, val, col = self.take()
        if kind == "int":
            return Poly.const(Fraction(val))
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "name":
            if val == "sqrt":
                self.expect("(")
                sign = 1
                if self.peek()[:2] == ("op", "-"):
                    self.take()
                    sign = -1
                k2, n, c2 = self.take()
                if k2 != "int":
                    raise ExpressionError("sqrt takes an integer literal", c2)
                self.expect(")")
                try:
                    return Poly.const(QuadScalar(0, 1, sign * n))
                except ValueError as exc:
                    raise ExpressionError(str(exc), c2) from None
            if val in self.env:
                bound = self.env[val]
                if self.peek()[:2] == ("op", "("):
                    self.take()
                    arg = self.expr()
                    self.expect(")")
                    var = bound.univariate_var()
                    if var is None:
                        return bound
                    return bound.subs({var: arg})
                return bound
            if val in VARIABLE_ORDER:
                return Poly.var(val)
            raise ExpressionError(f"unknown name {val!r}", col)
        raise ExpressionError(f"unexpected {val!r}" if val else "unexpected end of input", col)


def parse_poly(text, env=None):
    """Parse an expression into a Poly; ``env`` maps names to bound polynomials."""
    return _Parser(text, env).parse()
