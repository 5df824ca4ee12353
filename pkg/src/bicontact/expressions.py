"""A deliberately tiny expression grammar for coefficient functions.

::

    expr    := term  (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" unary)?          (right associative)
    atom    := NUMBER | COORD | FUNC "(" expr ")" | "(" expr ")"
    FUNC    := "sin" | "cos" | "tan" | "exp"
    COORD   := one of the chart's coordinate names

Numbers are decimal literals with optional fraction and exponent.  There
are no conditionals on purpose: piecewise profiles (shears, cutoffs) are
built-in objects with hand-written derivatives, so smoothness bookkeeping
never depends on parsed code.  Compiled expressions evaluate on floats,
numpy arrays, and dual numbers alike, so their gradients are exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import autodiff as ad
from .charts import Chart
from .errors import ExpressionError
from .fields import ScalarField

_FUNCTIONS = {"sin": ad.sin, "cos": ad.cos, "tan": ad.tan, "exp": ad.exp}

_TOKEN_RE = re.compile(r"""
    (?P<num>\d+\.\d*|\.\d+|\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
  | (?P<ws>\s+)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExpressionError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(_Token(kind, m.group(), pos))
        pos = m.end()
    out.append(_Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, tokens: list[_Token], coords: tuple[str, str, str]):
        self.tokens = tokens
        self.i = 0
        self.coords = coords

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise ExpressionError(f"expected {op!r}", tok.pos)
        return self.advance()

    # Each node compiles to fn(args) -> value, args being the coordinate triple.

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExpressionError(f"unexpected {tok.text!r}", tok.pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            if op == "+":
                node = (lambda l, r: lambda a: l(a) + r(a))(node, rhs)
            else:
                node = (lambda l, r: lambda a: l(a) - r(a))(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            rhs = self.unary()
            if op == "*":
                node = (lambda l, r: lambda a: l(a) * r(a))(node, rhs)
            else:
                node = (lambda l, r: lambda a: l(a) / r(a))(node, rhs)
        return node

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            inner = self.unary()
            return lambda a: -inner(a)
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            expo = self.unary()
            # Dual ** Dual is undefined; exponents must be constant.
            def fn(a, _b=base, _e=expo):
                e = _e(a)
                if isinstance(e, ad.Dual):
                    raise ExpressionError("exponent must not depend on coordinates", tok.pos)
                return _b(a) ** e
            return fn
        return base

    def atom(self):
        tok = self.advance()
        if tok.kind == "num":
            value = float(tok.text)
            return lambda a: value + 0.0 * ad.value_of(a[0])
        if tok.kind == "name":
            if tok.text in _FUNCTIONS:
                fn = _FUNCTIONS[tok.text]
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return lambda a: fn(inner(a))
            if tok.text in self.coords:
                idx = self.coords.index(tok.text)
                return lambda a: a[idx] + 0.0
            raise ExpressionError(f"unknown identifier {tok.text!r}", tok.pos)
        if tok.kind == "op" and tok.text == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ExpressionError(f"unexpected {tok.text!r}" if tok.text else "unexpected end of input",
                              tok.pos)


def parse_scalar_field(text: str, chart: Chart) -> ScalarField:
    """Compile an expression into a scalar field with exact gradients."""
    tokens = _tokenize(text)
    node = _Parser(tokens, chart.coord_names).parse()
    return ScalarField(chart, lambda x1, x2, x3: node((x1, x2, x3)), text)
