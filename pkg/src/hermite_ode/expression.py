"""Tiny expression language for time-dependent coefficients.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := ["-"] atom ["^" integer]
    atom   := number | "t" | func "(" expr ")" | "(" expr ")"
    func   := "sin" | "cos" | "exp"

Power binds tighter than unary minus, so ``-t^2`` is ``-(t^2)``. The exponent
may carry a leading minus sign (``t^-1``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "Expression",
    "ExpressionSyntaxError",
    "EvaluationError",
    "parse_expression",
    "eval_expression",
    "to_source",
    "is_constant",
]

FUNCTIONS = {"sin": math.sin, "cos": math.cos, "exp": math.exp}


class ExpressionSyntaxError(ValueError):
    """Raised when source text does not match the grammar."""

    def __init__(self, message: str, source: str, position: int):
        super().__init__(f"{message} at position {position} in {source!r}")
        self.source = source
        self.position = position


class EvaluationError(ArithmeticError):
    """Division by zero or a non-finite intermediate during evaluation."""


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Expression"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Pow:
    base: "Expression"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expression"


Expression = Union[Const, Var, Neg, BinOp, Pow, Call]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {source[pos]!r}", source, pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, pos=None):
        raise ExpressionSyntaxError(message, self.source, self.tok[2] if pos is None else pos)

    def accept(self, text):
        if self.tok[0] == "op" and self.tok[1] == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok[1] or "end of input"
            self.error(f"expected {text!r}, found {found!r}")

    def parse(self):
        node = self.expr()
        if self.tok[0] != "end":
            self.error(f"unexpected token {self.tok[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.tok[1]
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.tok[1]
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        negate = self.accept("-")
        node = self.atom()
        if self.accept("^"):
            node = Pow(node, self.integer())
        return Neg(node) if negate else node

    def integer(self):
        sign = -1 if self.accept("-") else 1
        kind, text, pos = self.tok
        if kind != "number":
            self.error("expected integer exponent")
        if not re.fullmatch(r"\d+", text):
            self.error(f"non-integer exponent {text!r}")
        self.i += 1
        return sign * int(text)

    def atom(self):
        kind, text, pos = self.tok
        if kind == "number":
            self.i += 1
            value = float(text)
            if not math.isfinite(value):
                self.error(f"number {text!r} overflows", pos)
            return Const(value)
        if kind == "name":
            self.i += 1
            if text == "t":
                return Var()
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            self.error(f"unknown identifier {text!r}", pos)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.error(f"unexpected {text!r}" if text else "unexpected end of input")


def parse_expression(source: str) -> Expression:
    """Parse ``source`` into an expression tree.

    Raises
    ------
    ExpressionSyntaxError
        On malformed input, unknown identifiers or non-integer exponents.
        The exception carries the offending character position.
    """
    return _Parser(source).parse()


def _check(value, t, what):
    if not math.isfinite(value):
        raise EvaluationError(f"non-finite result in {what} at t={float(t)!r}")
    return value


def eval_expression(e: Expression, t: float) -> float:
    """Evaluate ``e`` at time ``t`` in double precision."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return float(t)
    if isinstance(e, Neg):
        return -eval_expression(e.operand, t)
    if isinstance(e, BinOp):
        a = eval_expression(e.left, t)
        b = eval_expression(e.right, t)
        if e.op == "+":
            return _check(a + b, t, "addition")
        if e.op == "-":
            return _check(a - b, t, "subtraction")
        if e.op == "*":
            return _check(a * b, t, "multiplication")
        if b == 0.0:
            raise EvaluationError(f"division by zero at t={float(t)!r}")
        return _check(a / b, t, "division")
    if isinstance(e, Pow):
        base = eval_expression(e.base, t)
        if base == 0.0 and e.exponent < 0:
            raise EvaluationError(f"division by zero (0^{e.exponent}) at t={float(t)!r}")
        try:
            return _check(base**e.exponent, t, "power")
        except OverflowError:
            raise EvaluationError(f"overflow in power at t={float(t)!r}") from None
    if isinstance(e, Call):
        x = eval_expression(e.arg, t)
        try:
            return _check(FUNCTIONS[e.func](x), t, e.func)
        except OverflowError:
            raise EvaluationError(f"overflow in {e.func} at t={float(t)!r}") from None
    raise TypeError(f"not an expression node: {e!r}")


def to_source(e: Expression) -> str:
    """Render ``e`` as text that parses back to an identical tree."""
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Neg):
        return f"(-{_atom(e.operand)})"
    if isinstance(e, BinOp):
        return f"({to_source(e.left)} {e.op} {to_source(e.right)})"
    if isinstance(e, Pow):
        return f"({_atom(e.base)}^{e.exponent})"
    if isinstance(e, Call):
        return f"{e.func}({to_source(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def _atom(e):
    text = to_source(e)
    if isinstance(e, (Var, Call)) or text.startswith("("):
        return text
    return f"({text})"


def is_constant(e: Expression) -> bool:
    """True when ``e`` does not mention ``t``."""
    if isinstance(e, Const):
        return True
    if isinstance(e, Var):
        return False
    if isinstance(e, Neg):
        return is_constant(e.operand)
    if isinstance(e, BinOp):
        return is_constant(e.left) and is_constant(e.right)
    if isinstance(e, Pow):
        return is_constant(e.base)
    if isinstance(e, Call):
        return is_constant(e.arg)
    raise TypeError(f"not an expression node: {e!r}")
