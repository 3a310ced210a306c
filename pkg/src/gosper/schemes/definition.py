"""Scheme definitions and the line-oriented ``.scheme`` file format."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, Optional, Tuple

from ..banded import BandFactor
from .expr import BinOp, Expr, ExprEvalError, ExprSyntaxError, env_for, parse_expr

__all__ = [
    "ConstantDescriptor",
    "SchemeDef",
    "SchemeError",
    "SchemeSyntaxError",
    "PARAM_NAMES",
    "parse_scheme",
    "render_scheme",
    "parse_rational",
    "render_expr",
]

PARAM_NAMES = ("z", "a", "b", "Ncap")
TARGET_KINDS = ("zeta", "eta", "hurwitz", "tauraso", "tauraso4", "h3", "scaled_zeta")
ALPHA_SCAN = 10


class SchemeError(ValueError):
    pass


class SchemeSyntaxError(SchemeError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


def parse_rational(text: str) -> Fraction:
    """Strict ``p`` or ``p/q`` literal (optional sign); no decimals."""
    m = re.fullmatch(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*", text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def render_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ConstantDescriptor:
    """What the ``l``-th entry of ``v_inf`` converges to.

    ``kind`` is one of ``zeta(s)``, ``eta(s)``, ``hurwitz(s, z)``,
    ``tauraso(a, b)``, ``tauraso4(a, b)``, ``h3(Ncap)`` and
    ``scaled_zeta(s, factor)``; parameter values come from the owning scheme.
    """

    kind: str
    s: Optional[int] = None
    factor: Optional[Fraction] = None

    def render(self) -> str:
        if self.kind in ("zeta", "eta"):
            return f"{self.kind}({self.s})"
        if self.kind == "hurwitz":
            return f"hurwitz({self.s},z)"
        if self.kind in ("tauraso", "tauraso4"):
            return f"{self.kind}(a,b)"
        if self.kind == "h3":
            return "h3(Ncap)"
        return f"scaled_zeta({self.s},{render_rational(self.factor)})"

    @classmethod
    def parse(cls, text: str) -> "ConstantDescriptor":
        t = re.sub(r"\s+", "", text)
        m = re.fullmatch(r"(zeta|eta)\((\d+)\)", t)
        if m:
            return cls(m.group(1), int(m.group(2)))
        m = re.fullmatch(r"hurwitz\((\d+),z\)", t)
        if m:
            return cls("hurwitz", int(m.group(1)))
        if t in ("tauraso(a,b)", "tauraso4(a,b)"):
            return cls(t.split("(")[0])
        if t == "h3(Ncap)":
            return cls("h3")
        m = re.fullmatch(r"scaled_zeta\((\d+),([+-]?\d+(?:/\d+)?)\)", t)
        if m:
            return cls("scaled_zeta", int(m.group(1)), parse_rational(m.group(2)))
        raise ValueError(f"unknown target {text!r}")

    def required_params(self) -> Tuple[str, ...]:
        return {"hurwitz": ("z",), "tauraso": ("a", "b"), "tauraso4": ("a", "b"), "h3": ("Ncap",)}.get(
            self.kind, ()
        )


@dataclass(frozen=True)
class SchemeDef:
    name: str
    dim: int
    alpha: Expr
    u: Tuple[Expr, ...]  # bottom-up: u[0] = u^(1)
    beta: Optional[Expr] = None
    params: Dict[str, Fraction] = field(default_factory=dict)
    targets: Tuple[ConstantDescriptor, ...] = ()
    finite_terms: Optional[int] = None

    def __post_init__(self):
        if self.dim < 1:
            raise SchemeError("dim must be >= 1")
        if len(self.u) != self.dim:
            raise SchemeError(f"dim={self.dim} but {len(self.u)} u entries given")
        if self.dim >= 2 and self.beta is None:
            raise SchemeError("beta is required when dim >= 2")
        if self.targets and len(self.targets) != self.dim:
            raise SchemeError(f"dim={self.dim} but {len(self.targets)} targets given")
        bad = set(self.params) - set(PARAM_NAMES)
        if bad:
            raise SchemeError(f"unknown parameter(s): {', '.join(sorted(bad))}")
        for t in self.targets:
            for p in t.required_params():
                if p not in self.params:
                    raise SchemeError(f"target {t.render()} needs parameter {p}")

    @property
    def infinite(self) -> bool:
        return self.finite_terms is None

    def env(self, k: int) -> Dict[str, Fraction]:
        return env_for(k, self.params)

    def factor(self, k: int) -> BandFactor:
        env = self.env(k)
        try:
            alpha = self.alpha.eval(env)
            beta = self.beta.eval(env) if self.beta is not None else Fraction(0)
            u = tuple(e.eval(env) for e in self.u)
        except ExprEvalError as err:
            raise SchemeError(f"{self.name}: cannot evaluate factor at k={k}: {err}") from None
        if alpha == 0 and self.dim >= 2:
            raise SchemeError(f"{self.name}: alpha vanishes at k={k}")
        return BandFactor(alpha, beta, u)

    def factors(self, terms: int, start: int = 1) -> Iterator[BandFactor]:
        for k in range(start, start + terms):
            yield self.factor(k)

    def with_params(self, **params: Fraction) -> "SchemeDef":
        merged = dict(self.params)
        merged.update(params)
        return SchemeDef(self.name, self.dim, self.alpha, self.u, self.beta, merged, self.targets, self.finite_terms)

    def validate(self, scan: int = ALPHA_SCAN) -> "SchemeDef":
        """Evaluate the first ``scan`` factors eagerly to catch poles and zero alphas."""
        if self.finite_terms is not None:
            scan = min(scan, self.finite_terms)
        for k in range(1, scan + 1):
            self.factor(k)
        return self


def render_expr(e: Expr) -> str:
    text = e.render()
    if isinstance(e, BinOp):
        text = text[1:-1]
    return text


def render_scheme(s: SchemeDef) -> str:
    lines = [f"name = {s.name}", f"dim = {s.dim}"]
    for p in PARAM_NAMES:
        if p in s.params:
            lines.append(f"param {p} = {render_rational(s.params[p])}")
    lines.append(f"alpha = {render_expr(s.alpha)}")
    if s.beta is not None:
        lines.append(f"beta = {render_expr(s.beta)}")
    for i, e in enumerate(s.u, start=1):
        lines.append(f"u{i} = {render_expr(e)}")
    for i, t in enumerate(s.targets, start=1):
        lines.append(f"target{i} = {t.render()}")
    if s.finite_terms is not None:
        lines.append(f"finite = {s.finite_terms}")
    return "\n".join(lines) + "\n"


_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*(?:\s+[A-Za-z_][A-Za-z_0-9]*)?)\s*=\s*")


def parse_scheme(text: str, validate: bool = True) -> SchemeDef:
    """Parse a ``.scheme`` file.  Errors carry 1-based line and column."""
    fields: Dict[str, Tuple[str, int, int]] = {}
    params: Dict[str, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            raise SchemeSyntaxError("expected 'key = value'", lineno, 1)
        key = m.group(1)
        value = line[m.end():]
        col = m.end() + 1
        if key.startswith("param"):
            pname = key.split()[-1] if " " in key else ""
            if pname not in PARAM_NAMES:
                raise SchemeSyntaxError(f"unknown parameter {pname!r}", lineno, 1)
            try:
                params[pname] = parse_rational(value)
            except ValueError as err:
                raise SchemeSyntaxError(str(err), lineno, col) from None
            continue
        if key in fields:
            raise SchemeSyntaxError(f"duplicate key {key!r}", lineno, 1)
        fields[key] = (value, lineno, col)

    def need(key, msg=None):
        if key not in fields:
            raise SchemeError(msg or f"{key} required")
        return fields[key]

    def expr(key):
        value, lineno, col = fields[key]
        try:
            return parse_expr(value)
        except ExprSyntaxError as err:
            raise SchemeSyntaxError(err.message, lineno, err.column + col - 1) from None

    def integer(key):
        value, lineno, col = fields[key]
        if not re.fullmatch(r"\s*\d+\s*", value):
            raise SchemeSyntaxError(f"{key} must be a positive integer", lineno, col)
        return int(value)

    name = need("name")[0].strip()
    if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
        raise SchemeSyntaxError(f"invalid scheme name {name!r}", fields["name"][1], fields["name"][2])
    dim = integer("dim") if "dim" in fields else 1
    if dim < 1:
        raise SchemeSyntaxError("dim must be >= 1", fields["dim"][1], fields["dim"][2])
    need("alpha")
    alpha = expr("alpha")
    beta = None
    if dim >= 2:
        need("beta", "beta required when dim >= 2")
        beta = expr("beta")
    elif "beta" in fields:
        raise SchemeSyntaxError("beta given but dim = 1", fields["beta"][1], 1)
    us = []
    for i in range(1, dim + 1):
        need(f"u{i}", f"u({i}) required")
        us.append(expr(f"u{i}"))
    extra_u = [k for k in fields if re.fullmatch(r"u\d+", k) and int(k[1:]) > dim]
    if extra_u:
        raise SchemeError(f"dimension mismatch: dim={dim} but {extra_u[0]} given")
    targets = []
    tkeys = sorted((k for k in fields if re.fullmatch(r"target\d+", k)), key=lambda k: int(k[6:]))
    for key in tkeys:
        value, lineno, col = fields[key]
        try:
            targets.append((int(key[6:]), ConstantDescriptor.parse(value)))
        except ValueError as err:
            raise SchemeSyntaxError(str(err), lineno, col) from None
    if targets and [i for i, _ in targets] != list(range(1, dim + 1)):
        raise SchemeError(f"dimension mismatch: targets must be target1..target{dim}")
    finite = integer("finite") if "finite" in fields else None
    known = {"name", "dim", "alpha", "beta", "finite"} | {f"u{i}" for i in range(1, dim + 1)} | set(tkeys)
    unknown = [k for k in fields if k not in known]
    if unknown:
        key = unknown[0]
        raise SchemeSyntaxError(f"unknown key {key!r}", fields[key][1], 1)
    scheme = SchemeDef(name, dim, alpha, tuple(us), beta, params, tuple(t for _, t in targets), finite)
    if validate:
        scheme.validate()
    return scheme
