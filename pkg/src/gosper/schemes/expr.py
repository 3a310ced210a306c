"""Exact rational expressions in ``k`` and scheme parameters.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' integer)?
    base   := integer | name | name '(' expr (',' expr)* ')' | '(' expr ')' | '-' base

Names are the variables ``k z a b N`` and the functions ``H(n, r)``
(generalized harmonic number) and ``binom(n, m)``.  Note that ``-k^2``
parses as ``(-k)^2``; write ``-(k^2)`` for the negated square.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Tuple, Union

from ..symfun import harmonic

__all__ = [
    "Expr",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Pow",
    "Call",
    "ExprSyntaxError",
    "ExprEvalError",
    "parse_expr",
    "VARIABLES",
    "FUNCTIONS",
]

VARIABLES = ("k", "z", "a", "b", "N")
FUNCTIONS = {"H": 2, "binom": 2}


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, column: int, line: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")

    def at_line(self, line: int, offset: int = 0) -> "ExprSyntaxError":
        return ExprSyntaxError(self.message, self.column + offset, line)


class ExprEvalError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Num:
    value: int

    def eval(self, env):
        return Fraction(self.value)

    def render(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Var:
    name: str

    def eval(self, env):
        try:
            return env[self.name]
        except KeyError:
            raise ExprEvalError(f"unbound variable {self.name!r}") from None

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg:
    arg: "Expr"

    def eval(self, env):
        return -self.arg.eval(env)

    def render(self) -> str:
        return "-" + _render_base(self.arg)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"

    def eval(self, env):
        x = self.left.eval(env)
        y = self.right.eval(env)
        if self.op == "+":
            return x + y
        if self.op == "-":
            return x - y
        if self.op == "*":
            return x * y
        if y == 0:
            raise ExprEvalError(f"division by zero in {self.render()}")
        return x / y

    def render(self) -> str:
        return f"({self.left.render()} {self.op} {self.right.render()})"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int

    def eval(self, env):
        return self.base.eval(env) ** self.exponent

    def render(self) -> str:
        return f"{_render_base(self.base)}^{self.exponent}"


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple["Expr", ...]

    def eval(self, env):
        vals = [a.eval(env) for a in self.args]
        ints = []
        for v in vals:
            if v.denominator != 1:
                raise ExprEvalError(f"{self.func} needs integer arguments, got {v}")
            ints.append(v.numerator)
        if self.func == "H":
            n, r = ints
            if n < 0 or r < 1:
                raise ExprEvalError(f"H({n}, {r}) is undefined")
            return harmonic(n, r)
        n, m = ints
        if n < 0 or m < 0:
            raise ExprEvalError(f"binom({n}, {m}) is undefined")
        return Fraction(math.comb(n, m))

    def render(self) -> str:
        return f"{self.func}({', '.join(a.render() for a in self.args)})"


Expr = Union[Num, Var, Neg, BinOp, Pow, Call]


def _render_base(e: Expr) -> str:
    if isinstance(e, (Num, Var, Call)):
        return e.render()
    if isinstance(e, BinOp):
        return e.render()  # already parenthesized
    return f"({e.render()})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(1):
            tokens.append(("int", m.group(1), m.start(1) + 1))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2) + 1))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ExprSyntaxError(f"unexpected character {ch!r}", m.start(3) + 1)
            tokens.append(("op", ch, m.start(3) + 1))
        pos = m.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, col = self.peek()
        if val != value or kind != "op":
            what = "end of input" if kind == "end" else repr(val)
            raise ExprSyntaxError(f"expected {value!r}, found {what}", col)
        return self.take()

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, col = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", col)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            e = BinOp(op, e, self.factor())
        return e

    def factor(self) -> Expr:
        e = self.base()
        if self.peek() == ("op", "^", self.peek()[2]):
            self.take()
            kind, val, col = self.peek()
            if kind != "int":
                raise ExprSyntaxError("exponent must be a nonnegative integer literal", col)
            self.take()
            e = Pow(e, int(val))
        return e

    def base(self) -> Expr:
        kind, val, col = self.peek()
        if kind == "int":
            self.take()
            return Num(int(val))
        if kind == "name":
            self.take()
            if val in FUNCTIONS:
                return self.call(val, col)
            if val not in VARIABLES:
                raise ExprSyntaxError(f"unknown name {val!r}", col)
            return Var(val)
        if kind == "op" and val == "(":
            self.take()
            try:
                e = self.expr()
                self.expect(")")
            except ExprSyntaxError as err:
                if self.peek()[0] == "end":
                    raise ExprSyntaxError("unclosed '('", col) from err
                raise
            return e
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.base())
        what = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {what}", col)

    def call(self, name: str, col: int) -> Expr:
        kind, val, pcol = self.peek()
        if val != "(":
            raise ExprSyntaxError(f"function {name} needs arguments", pcol)
        self.take()
        args = []
        try:
            args.append(self.expr())
            while self.peek()[1] == ",":
                self.take()
                args.append(self.expr())
            self.expect(")")
        except ExprSyntaxError as err:
            if self.peek()[0] == "end":
                raise ExprSyntaxError("unclosed '('", pcol) from err
            raise
        if len(args) != FUNCTIONS[name]:
            raise ExprSyntaxError(f"{name} takes {FUNCTIONS[name]} arguments, got {len(args)}", col)
        return Call(name, tuple(args))


def parse_expr(text: str) -> Expr:
    """Parse ``text``; columns in errors are 1-based offsets into ``text``."""
    return _Parser(text).parse()


def evaluate(e: Expr, env: Mapping[str, Fraction]) -> Fraction:
    return e.eval(env)


def env_for(k: int, params: Dict[str, Fraction]) -> Dict[str, Fraction]:
    env = {"k": Fraction(k)}
    for name, value in params.items():
        env["N" if name == "Ncap" else name] = value
    return env
