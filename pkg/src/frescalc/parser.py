"""Recursive-descent parser for operator and polynomial expressions.

Grammar (whitespace insensitive, left associative):

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := "-" factor | atom ["^" uint]
    atom   := rational | "a" | "b" | "b^-" uint | "(" expr ")"
            | "S[" rational ("," rational)* "]"

A leading minus and ``b^-N`` for N > 1 extend the base grammar.  In
polynomial mode the generators are replaced by a single variable spelled
``x``, ``xi`` or ``ξ``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import LaurentNotAllowed, ParseError
from .ncalg import DEFAULT_WINDOW, NcElement, NcSeriesElement, TruncatedSeries
from .poly import QPoly


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Gen:
    name: str  # "a", "b" or "x"


@dataclass(frozen=True)
class BInv:
    power: int


@dataclass(frozen=True)
class Series:
    coeffs: tuple[Fraction, ...]


@dataclass(frozen=True)
class Neg:
    arg: "OperatorExpr"


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*"
    left: "OperatorExpr"
    right: "OperatorExpr"


@dataclass(frozen=True)
class Pow:
    base: "OperatorExpr"
    exponent: int


OperatorExpr = Union[Num, Gen, BInv, Series, Neg, BinOp, Pow]

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>xi|ξ|S\[|[abx])|(?P<sym>[-+*^()/,\]]))")
_ATOM_START = ("rational", "a", "b", "(", "S[", "-")


class _Parser:
    def __init__(self, text: str, names: tuple[str, ...]):
        self.text = text
        self.names = names
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                start = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[start]!r}", start, self.atom_start())
            kind = m.lastgroup
            value = m.group(kind)
            self.tokens.append((kind, value, m.start(kind)))
            pos = m.end()
        self.i = 0

    def atom_start(self) -> tuple[str, ...]:
        if self.names == ("x",):
            return ("rational", "x", "(", "-")
        return _ATOM_START

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("eof", "", len(self.text))

    def take(self, value: str, expected: tuple[str, ...]):
        tok = self.peek()
        if tok[1] != value:
            self.fail(tok, expected)
        self.i += 1
        return tok

    def fail(self, tok, expected):
        what = "end of input" if tok[0] == "eof" else repr(tok[1])
        raise ParseError(f"unexpected {what}", tok[2], expected)

    def uint(self) -> int:
        tok = self.peek()
        if tok[0] != "int":
            self.fail(tok, ("uint",))
        self.i += 1
        return int(tok[1])

    def rational(self) -> Fraction:
        sign = 1
        if self.peek()[1] == "-":
            self.i += 1
            sign = -1
        num = self.uint()
        if self.peek()[1] == "/":
            self.i += 1
            tok = self.peek()
            den = self.uint()
            if den == 0:
                raise ParseError("zero denominator", tok[2], ("nonzero uint",))
            return sign * Fraction(num, den)
        return Fraction(sign * num)

    def parse(self) -> OperatorExpr:
        if not self.tokens:
            raise ParseError("empty expression", 0, self.atom_start())
        node = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            self.fail(tok, ("+", "-", "*", "^", "end of input"))
        return node

    def expr(self) -> OperatorExpr:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.peek()[1]
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> OperatorExpr:
        node = self.factor()
        while self.peek()[1] == "*":
            self.i += 1
            node = BinOp("*", node, self.factor())
        return node

    def factor(self) -> OperatorExpr:
        if self.peek()[1] == "-":
            self.i += 1
            return Neg(self.factor())
        node = self.atom()
        if self.peek()[1] == "^":
            self.i += 1
            if self.peek()[1] == "-":
                minus = self.peek()
                if node != Gen("b"):
                    self.fail(minus, ("uint",))
                self.i += 1
                return BInv(self.uint())
            node = Pow(node, self.uint())
        return node

    def atom(self) -> OperatorExpr:
        tok = self.peek()
        kind, value = tok[0], tok[1]
        if kind == "int":
            return Num(self.rational())
        if value == "(":
            self.i += 1
            node = self.expr()
            self.take(")", (")", "+", "-", "*", "^"))
            return node
        if kind == "name":
            if self.names == ("x",) and value in ("x", "xi", "ξ"):
                self.i += 1
                return Gen("x")
            if self.names != ("x",) and value in ("a", "b"):
                self.i += 1
                return Gen(value)
            if self.names != ("x",) and value == "S[":
                self.i += 1
                coeffs = [self.rational()]
                while self.peek()[1] == ",":
                    self.i += 1
                    coeffs.append(self.rational())
                self.take("]", (",", "]"))
                return Series(tuple(coeffs))
        self.fail(tok, self.atom_start())


def parse_expression(text: str) -> OperatorExpr:
    """Parse an operator expression in a, b, b^-1 and series literals."""
    return _Parser(text, ("a", "b")).parse()


def parse_polynomial(text: str) -> QPoly:
    """Parse and evaluate a polynomial in one variable (x, xi or ξ)."""
    return _eval_poly(_Parser(text, ("x",)).parse())


def _eval_poly(node: OperatorExpr) -> QPoly:
    if isinstance(node, Num):
        return QPoly([node.value])
    if isinstance(node, Gen):
        return QPoly.x()
    if isinstance(node, Neg):
        return -_eval_poly(node.arg)
    if isinstance(node, Pow):
        return _eval_poly(node.base) ** node.exponent
    if isinstance(node, BinOp):
        left, right = _eval_poly(node.left), _eval_poly(node.right)
        return left + right if node.op == "+" else left - right if node.op == "-" else left * right
    raise TypeError(f"unexpected node {node!r}")


def uses_laurent(node: OperatorExpr) -> bool:
    if isinstance(node, BInv):
        return True
    if isinstance(node, (Neg,)):
        return uses_laurent(node.arg)
    if isinstance(node, Pow):
        return uses_laurent(node.base)
    if isinstance(node, BinOp):
        return uses_laurent(node.left) or uses_laurent(node.right)
    return False


def uses_series(node: OperatorExpr) -> bool:
    if isinstance(node, Series):
        return True
    if isinstance(node, Neg):
        return uses_series(node.arg)
    if isinstance(node, Pow):
        return uses_series(node.base)
    if isinstance(node, BinOp):
        return uses_series(node.left) or uses_series(node.right)
    return False


def evaluate(node: OperatorExpr, laurent: bool | None = None, window: int = DEFAULT_WINDOW) -> NcElement:
    """Evaluate to a normal-ordered element; Laurent mode follows the tree by default."""
    if laurent is None:
        laurent = uses_laurent(node)
    if uses_series(node):
        raise ParseError("series literals need a precision; use evaluate_series", -1)
    return _eval_nc(node, laurent, window)


def _eval_nc(node: OperatorExpr, laurent: bool, window: int) -> NcElement:
    if isinstance(node, Num):
        return NcElement.const(node.value, laurent=laurent)
    if isinstance(node, Gen):
        x = NcElement.a() if node.name == "a" else NcElement.b()
        return x.as_laurent(window) if laurent else x
    if isinstance(node, BInv):
        if not laurent:
            raise LaurentNotAllowed("b^-1 needs Laurent mode")
        return NcElement.b_inv(window=window) ** node.power
    if isinstance(node, Neg):
        return -_eval_nc(node.arg, laurent, window)
    if isinstance(node, Pow):
        return _eval_nc(node.base, laurent, window) ** node.exponent
    if isinstance(node, BinOp):
        left, right = _eval_nc(node.left, laurent, window), _eval_nc(node.right, laurent, window)
        return left + right if node.op == "+" else left - right if node.op == "-" else left * right
    raise TypeError(f"unexpected node {node!r}")


def evaluate_series(node: OperatorExpr, precision: int) -> NcSeriesElement:
    """Evaluate to an element of the completed algebra, known modulo b^precision."""
    if isinstance(node, Series):
        return NcSeriesElement.from_series(TruncatedSeries(node.coeffs, precision))
    if isinstance(node, Neg):
        return -evaluate_series(node.arg, precision)
    if isinstance(node, Pow):
        base = evaluate_series(node.base, precision)
        out = NcSeriesElement.from_element(NcElement.const(1), precision)
        for _ in range(node.exponent):
            out = out * base
        return out
    if isinstance(node, BinOp):
        left, right = evaluate_series(node.left, precision), evaluate_series(node.right, precision)
        return left + right if node.op == "+" else left - right if node.op == "-" else left * right
    return NcSeriesElement.from_element(_eval_nc(node, False, DEFAULT_WINDOW), precision)
