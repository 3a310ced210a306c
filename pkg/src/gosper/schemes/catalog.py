"""Built-in schemes: every accelerated series realized as a Gosper product."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Callable, Dict, List, NamedTuple, Optional

from .definition import ConstantDescriptor, SchemeDef, SchemeError, render_rational
from .expr import parse_expr

__all__ = [
    "make_koecher",
    "make_borwein",
    "make_leschiner",
    "make_markov_hurwitz",
    "make_tauraso",
    "make_tauraso_quartic",
    "make_amdeberhan_zeilberger",
    "make_amdeberhan_cubic",
    "make_harmonic3_finite",
    "FAMILIES",
    "resolve_builtin",
    "builtin_names",
]


def _scheme(name, alpha, u, beta=None, params=None, targets=(), finite=None) -> SchemeDef:
    return SchemeDef(
        name=name,
        dim=len(u),
        alpha=parse_expr(alpha),
        u=tuple(parse_expr(e) for e in u),
        beta=parse_expr(beta) if beta is not None else None,
        params=dict(params or {}),
        targets=tuple(targets),
        finite_terms=finite,
    )


def make_koecher(n: int) -> SchemeDef:
    """Gosper's (N+1) x (N+1) product for ``zeta(3), zeta(5), ..., zeta(2N+1)``."""
    if n < 1:
        raise SchemeError("koecher needs N >= 1")
    u = ["5/(4*k^2)"] + [f"1/k^{2 * ell}" for ell in range(2, n + 1)]
    return _scheme(
        f"koecher{n}",
        alpha="-k/(2*(2*k+1))",
        beta="1/(2*k*(2*k+1))" if n >= 2 else None,
        u=u,
        targets=[ConstantDescriptor("zeta", 2 * ell + 1) for ell in range(1, n + 1)],
    )


_BORWEIN_U = ["3/(2*k)", "3/(2*k^3)", "3/(2*k^5) - 9*H(k-1, 4)/(2*k)"]


def make_borwein(n: int) -> SchemeDef:
    if not 1 <= n <= 3:
        raise SchemeError(f"borwein{n}: not in paper catalog (N must be 1..3)")
    return _scheme(
        f"borwein{n}",
        alpha="k/(2*(2*k+1))",
        beta="-3/(2*k*(2*k+1))" if n >= 2 else None,
        u=_BORWEIN_U[:n],
        targets=[ConstantDescriptor("zeta", 2 * ell) for ell in range(1, n + 1)],
    )


def make_leschiner(n: int) -> SchemeDef:
    if not 1 <= n <= 2:
        raise SchemeError(f"leschiner{n}: not in paper catalog (N must be 1..2)")
    return _scheme(
        f"leschiner{n}",
        alpha="k/(2*(2*k+1))",
        beta="-1/(2*k*(2*k+1))" if n >= 2 else None,
        u=["3/(4*k)", "1/k^3"][:n],
        targets=[ConstantDescriptor("eta", 2 * ell) for ell in range(1, n + 1)],
    )


def _check_not_negative_integer(z: Fraction, what: str):
    if z.denominator == 1 and z <= -1:
        raise SchemeError(f"{what}: z = {z} is a pole (z must avoid -1, -2, ...)")


def make_markov_hurwitz(z=Fraction(0)) -> SchemeDef:
    z = Fraction(z)
    _check_not_negative_integer(z, "markov_hurwitz")
    return _scheme(
        "markov_hurwitz",
        alpha="-(k^6)/(2*k*(2*k+1)*(z+k+1)^4)",
        u=["(5*k^2+6*k*z+2*z^2)/(4*(z+1)^4)"],
        params={"z": z},
        targets=[ConstantDescriptor("hurwitz", 3)],
    )


def _is_square(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def _positive_integer_roots(c1: Fraction, c0: Fraction) -> List[int]:
    """Positive integer roots ``t`` of ``t^2 - c1 t - c0``."""
    disc = _is_square(c1 * c1 + 4 * c0)
    if disc is None:
        return []
    roots = {(c1 + disc) / 2, (c1 - disc) / 2}
    return sorted(int(r) for r in roots if r.denominator == 1 and r >= 1)


def tauraso_poles(a: Fraction, b: Fraction) -> List[int]:
    """Indices ``k >= 1`` with ``k^2 - a k - b^2 = 0``."""
    return _positive_integer_roots(a, b * b)


def tauraso4_poles(a: Fraction, b: Fraction) -> List[int]:
    """Indices ``k >= 1`` with ``k^4 - a^2 k^2 - b^4 = 0``."""
    out = []
    for t in _positive_integer_roots(a * a, b ** 4):
        r = math.isqrt(t)
        if r * r == t:
            out.append(r)
    return out


def make_tauraso(a=Fraction(0), b=Fraction(0)) -> SchemeDef:
    a, b = Fraction(a), Fraction(b)
    poles = tauraso_poles(a, b)
    if poles:
        raise SchemeError(f"tauraso: denominator k^2 - a k - b^2 vanishes at k={poles[0]}")
    return _scheme(
        "tauraso",
        alpha="k/(2*(2*k+1))*(k^2-a^2-4*b^2)/(k^2-a*k-b^2)",
        u=["(3*k-a)/(k^2-a*k-b^2)"],
        params={"a": a, "b": b},
        targets=[ConstantDescriptor("tauraso")],
    )


def make_tauraso_quartic(a=Fraction(0), b=Fraction(0)) -> SchemeDef:
    a, b = Fraction(a), Fraction(b)
    poles = tauraso4_poles(a, b)
    if poles:
        raise SchemeError(f"tauraso4: denominator k^4 - a^2 k^2 - b^4 vanishes at k={poles[0]}")
    return _scheme(
        "tauraso4",
        alpha="-k/(2*(2*k+1))*((k^2-a^2)^2+4*b^4)/(k^4-a^2*k^2-b^4)",
        u=["(5*k^2-a^2)/(k^4-a^2*k^2-b^4)"],
        params={"a": a, "b": b},
        targets=[ConstantDescriptor("tauraso4")],
    )


def make_amdeberhan_zeilberger() -> SchemeDef:
    return _scheme(
        "amdeberhan_zeilberger",
        alpha="-(k/(2*(2*k+1)))^5",
        u=["(205*k^2-160*k+32)/64"],
        targets=[ConstantDescriptor("zeta", 3)],
    )


def make_amdeberhan_cubic() -> SchemeDef:
    return _scheme(
        "amdeberhan_cubic",
        alpha="-(k^3)/((3*k+3)*(3*k+2)*(3*k+1))*((2*k-1)/(2*k+1))^2",
        u=["(56*k^2-32*k+5)/24"],
        targets=[ConstantDescriptor("zeta", 3)],
    )


def make_harmonic3_finite(ncap: int) -> SchemeDef:
    """Exactly ``ncap`` factors whose product is ``[[2(-1)^N/((N+1) C(2N+2,N+1)), H_N^(3)], [0, 1]]``."""
    ncap = Fraction(ncap)
    if ncap.denominator != 1 or ncap < 1:
        raise SchemeError("h3finite needs a positive integer Ncap")
    return _scheme(
        "h3finite",
        alpha="-k/(2*(2*k+1))",
        u=["5/(4*k^2)*(1 - 1/(5*binom(N+k, 2*k)))"],
        params={"Ncap": ncap},
        targets=[ConstantDescriptor("h3")],
        finite=int(ncap),
    )


class Family(NamedTuple):
    name: str
    dim: str
    targets: str
    params: str
    build: Callable[..., SchemeDef]
    indexed: bool  # name carries the dimension, e.g. koecher3


FAMILIES: Dict[str, Family] = {
    f.name: f
    for f in [
        Family("amdeberhan_cubic", "1", "zeta(3)", "", lambda: make_amdeberhan_cubic(), False),
        Family("amdeberhan_zeilberger", "1", "zeta(3)", "", lambda: make_amdeberhan_zeilberger(), False),
        Family("borwein", "1..3", "zeta(2..2N)", "", make_borwein, True),
        Family("h3finite", "1", "h3(Ncap)", "Ncap", lambda Ncap=Fraction(1): make_harmonic3_finite(Ncap), False),
        Family("koecher", "N", "zeta(3..2N+1)", "", make_koecher, True),
        Family("leschiner", "1..2", "eta(2..2N)", "", make_leschiner, True),
        Family("markov_hurwitz", "1", "hurwitz(3,z)", "z", lambda z=Fraction(0): make_markov_hurwitz(z), False),
        Family("tauraso", "1", "tauraso(a,b)", "a,b", lambda a=Fraction(0), b=Fraction(0): make_tauraso(a, b), False),
        Family("tauraso4", "1", "tauraso4(a,b)", "a,b",
               lambda a=Fraction(0), b=Fraction(0): make_tauraso_quartic(a, b), False),
    ]
}


def builtin_names() -> List[str]:
    return sorted(FAMILIES)


def resolve_builtin(name: str, params: Optional[Dict[str, Fraction]] = None) -> Optional[SchemeDef]:
    """Look up ``name`` (``koecher3``, ``tauraso`` ...) and apply ``params``.

    Returns ``None`` for names outside the catalog; raises :class:`SchemeError`
    for catalog names with unusable arguments.
    """
    params = dict(params or {})
    m = re.fullmatch(r"([a-z_]+?)(\d+)", name)
    if m and m.group(1) in FAMILIES and FAMILIES[m.group(1)].indexed:
        fam, args = FAMILIES[m.group(1)], (int(m.group(2)),)
    elif name in FAMILIES and not FAMILIES[name].indexed:
        fam, args = FAMILIES[name], ()
    else:
        return None
    allowed = [p for p in fam.params.split(",") if p]
    bad = sorted(set(params) - set(allowed))
    if bad:
        raise SchemeError(f"{name} does not take parameter(s) {', '.join(bad)}")
    return fam.build(*args, **params)


def describe(f: Family) -> str:
    line = f"{f.name} dim={f.dim} targets={f.targets}"
    return line + (f" params={f.params}" if f.params else "")


def describe_scheme(s: SchemeDef) -> str:
    targets = ",".join(t.render() for t in s.targets) or "-"
    line = f"{s.name} dim={s.dim} targets={targets}"
    if s.params:
        line += " params=" + ",".join(f"{k}={render_rational(v)}" for k, v in s.params.items())
    return line
