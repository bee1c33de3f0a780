"""Parser for the scenario expression language.

Integers, ``num/den`` rational literals, variables ``X0..XN`` (forms) or
``z`` (series), binary ``+ - * ^`` with nonnegative integer exponents,
unary minus and parentheses. There is no division operator.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Tuple

from .forms import Poly

_TOKEN = re.compile(r"\s*(?:(\d+/\d+|\d+)|(X\d+|z)|(\*\*|[-+*^()]))")


class ExpressionError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at column {pos + 1} in {text!r}")
        self.pos = pos


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExpressionError(text, pos, "unexpected character")
        start = m.start(m.lastindex)
        kind = ("num", "var", "op")[m.lastindex - 1]
        tok = m.group(m.lastindex)
        out.append((kind, "^" if tok == "**" else tok, start))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, nvars: int, series: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.nvars = nvars
        self.series = series

    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def fail(self, msg: str):
        tok = self.peek()
        raise ExpressionError(self.text, tok[2] if tok else len(self.text), msg)

    def take(self, value: str) -> bool:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == value:
            self.i += 1
            return True
        return False

    def parse(self) -> Poly:
        if not self.toks:
            self.fail("empty expression")
        p = self.expr()
        if self.peek():
            self.fail("unexpected token")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while True:
            if self.take("+"):
                p = p + self.term()
            elif self.take("-"):
                p = p - self.term()
            else:
                return p

    def term(self) -> Poly:
        p = self.unary()
        while self.take("*"):
            p = p * self.unary()
        return p

    def unary(self) -> Poly:
        if self.take("-"):
            return -self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.take("^"):
            tok = self.peek()
            if not tok or tok[0] != "num" or "/" in tok[1]:
                self.fail("exponent must be a nonnegative integer")
            self.i += 1
            return base ** int(tok[1])
        return base

    def atom(self) -> Poly:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of expression")
        kind, val, pos = tok
        if kind == "num":
            self.i += 1
            q = Fraction(val)
            return Poly.const(q, self.nvars)
        if kind == "var":
            self.i += 1
            if self.series:
                if val != "z":
                    self.fail("series expressions use the variable z")
                return Poly.var(0, 1)
            if val == "z":
                self.fail("forms use the variables X0..XN")
            k = int(val[1:])
            if k >= self.nvars:
                self.fail(f"variable {val} out of range X0..X{self.nvars - 1}")
            return Poly.var(k, self.nvars)
        if self.take("("):
            p = self.expr()
            if not self.take(")"):
                self.fail("missing ')'")
            return p
        self.fail("unexpected token")


def parse_form_expr(text: str, nvars: int) -> Poly:
    """Polynomial in ``X0..X{nvars-1}``; homogeneity is checked by the caller."""
    return _Parser(text, nvars, series=False).parse()


def parse_series_expr(text: str) -> List[Fraction]:
    """Coefficients (low degree first) of a polynomial in ``z``."""
    p = _Parser(text, 1, series=True).parse()
    deg = max(p.degree(), 0)
    coeffs = [Fraction(0)] * (deg + 1)
    for (k,), c in p.terms.items():
        coeffs[k] = c
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def series_to_expr(coeffs) -> str:
    terms = {(k,): c for k, c in enumerate(coeffs) if c}
    return Poly(1, terms).to_str(["z"])


def form_to_expr(p: Poly) -> str:
    return p.to_str()
