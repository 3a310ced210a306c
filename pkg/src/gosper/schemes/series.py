"""Coefficient extractions: zeta/eta values as central-binomial series.

Each ``*_summands`` generator yields the exact k-th summand (k = 1, 2, ...);
the ``*_series`` wrappers sum a prefix, exactly or at a given precision.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import islice
from math import comb
from typing import Iterator, List, Optional

from ..numeric import BigFloat, Scalar
from ..symfun import SymState

__all__ = [
    "koecher_summands",
    "koecher_coefficient_series",
    "koecher_partial_sums",
    "borwein_summands",
    "borwein_coefficient_series",
    "leschiner_summands",
    "leschiner_coefficient_series",
    "leschiner_printed_summands",
    "leschiner_printed_series",
    "leschiner_report",
    "partial_sums",
]


def koecher_summands(n: int) -> Iterator[Fraction]:
    """Summands of the ``x^(2n)`` coefficient of Koecher's identity (limit ``zeta(2n+3)``)."""
    if n < 0:
        raise ValueError("order n must be >= 0")
    state = SymState(2, n)
    k = 1
    while True:
        e = state.e
        inner = Fraction(5, 2) * (-1) ** n * e[n] / k ** 3
        for j in range(1, n + 1):
            inner += 2 * (-1) ** (n - j) * e[n - j] / Fraction(k ** (2 * j + 3))
        yield (-1) ** (k - 1) * inner / comb(2 * k, k)
        state.advance()
        k += 1


def borwein_summands(n: int) -> Iterator[Fraction]:
    """Summands of the ``z^(2n)`` coefficient of Borwein's identity (limit ``zeta(2n+2)``).

    ``prod_{j<k}(1 - 4z^2/j^2)`` contributes ``(-4)^l e_l(k)`` and
    ``prod_{j<=k} 1/(1 - z^2/j^2)`` contributes ``h_m(k+1)``.
    """
    if n < 0:
        raise ValueError("order n must be >= 0")
    state = SymState(2, n)
    k = 1
    while True:
        e = list(state.e)
        state.advance()
        h = state.h
        conv = sum((-4) ** ell * e[ell] * h[n - ell] for ell in range(n + 1))
        yield 3 * conv / (k * k * comb(2 * k, k))
        k += 1


def _series_mul(p: List[Fraction], q: List[Fraction], order: int) -> List[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(p[: order + 1]):
        if x:
            for j, y in enumerate(q[: order + 1 - i]):
                out[i + j] += x * y
    return out


def _series_div(p: List[Fraction], q: List[Fraction], order: int) -> List[Fraction]:
    out = []
    for m in range(order + 1):
        acc = p[m] if m < len(p) else Fraction(0)
        for j in range(1, min(m, len(q) - 1) + 1):
            acc -= q[j] * out[m - j]
        out.append(acc / q[0])
    return out


def leschiner_summands(n: int) -> Iterator[Fraction]:
    """Summands of the ``w^n`` (``w = z^2``) coefficient of Leschiner's identity.

    Derived by truncated power-series arithmetic in ``w``:
    ``(1/2) (3k^2 + w)/(k^2 - w) prod_{j<k}(1 - w/j^2) / (C(2k,k) k^2)``.
    The limit is ``eta(2n+2)``.
    """
    if n < 0:
        raise ValueError("order n must be >= 0")
    prod = [Fraction(1)] + [Fraction(0)] * n
    k = 1
    while True:
        k2 = Fraction(k * k)
        ratio = _series_div([3 * k2, Fraction(1)], [k2, Fraction(-1)], n)
        coeff = _series_mul(ratio, prod, n)[n]
        yield coeff / (2 * k2 * comb(2 * k, k))
        prod = _series_mul(prod, [Fraction(1), Fraction(-1, k * k)], n)
        k += 1


def leschiner_printed_summands(n: int) -> Iterator[Fraction]:
    """Summands of the general-n Leschiner formula as printed (coefficient 6 on the tail sums)."""
    state = SymState(2, n)
    k = 1
    while True:
        e = state.e
        inner = Fraction(3, 2) * (-1) ** n * e[n] / k ** 2
        for j in range(1, n + 1):
            inner += 6 * (-1) ** (n - j) * e[n - j] / Fraction(k ** (2 * j + 2))
        yield inner / comb(2 * k, k)
        state.advance()
        k += 1


def partial_sums(summands: Iterator[Fraction], terms: int) -> List[Fraction]:
    out = []
    acc = Fraction(0)
    for t in islice(summands, terms):
        acc += t
        out.append(acc)
    return out


def _sum(summands: Iterator[Fraction], terms: int, prec: Optional[int]) -> Scalar:
    if terms < 1:
        raise ValueError("terms must be >= 1")
    acc: Scalar = Fraction(0) if prec is None else BigFloat(0, prec)
    for t in islice(summands, terms):
        acc = acc + t
    return acc


def koecher_partial_sums(n: int, terms: int) -> List[Fraction]:
    return partial_sums(koecher_summands(n), terms)


def koecher_coefficient_series(n: int, terms: int, prec: Optional[int] = None) -> Scalar:
    return _sum(koecher_summands(n), terms, prec)


def borwein_coefficient_series(n: int, terms: int, prec: Optional[int] = None) -> Scalar:
    return _sum(borwein_summands(n), terms, prec)


def leschiner_coefficient_series(n: int, terms: int, prec: Optional[int] = None) -> Scalar:
    return _sum(leschiner_summands(n), terms, prec)


def leschiner_printed_series(n: int, terms: int, prec: Optional[int] = None) -> Scalar:
    return _sum(leschiner_printed_summands(n), terms, prec)


def leschiner_report(n: int, terms: int = 200, digits: int = 30) -> dict:
    """Compare the derived coefficient series and the printed formula against ``eta(2n+2)``."""
    from ..numeric import bits_for_digits, log10_abs, to_decimal
    from ..reference import eta_ref

    prec = bits_for_digits(digits + 10)
    target = eta_ref(2 * n + 2, digits + 10)
    derived = leschiner_coefficient_series(n, terms, prec)
    printed = leschiner_printed_series(n, terms, prec)

    def matched(x):
        return min(digits + 10, int(-log10_abs(x - target)))

    derived_digits, printed_digits = matched(derived), matched(printed)
    # the derived coefficient collapses to (3/2)(-1)^n e_n/k^2 + 2 sum_j (-1)^(n-j) e_{n-j}/k^(2j+2)
    closed_agrees = partial_sums(leschiner_summands(n), 30) == partial_sums(_closed_summands(n), 30)
    return {
        "n": n,
        "terms": terms,
        "target": f"eta({2 * n + 2})",
        "oracle": to_decimal(target, digits),
        "derived": to_decimal(derived, digits),
        "derived_matched_digits": derived_digits,
        "printed": to_decimal(printed, digits),
        "printed_matched_digits": printed_digits,
        "printed_formula_agrees": printed_digits >= digits,
        "derived_closed_form": "(3/2)(-1)^n e_n/k^2 + 2*sum_j (-1)^(n-j) e_(n-j)/k^(2j+2)",
        "derived_closed_form_agrees": closed_agrees,
    }


def _closed_summands(n: int) -> Iterator[Fraction]:
    state = SymState(2, n)
    k = 1
    while True:
        e = state.e
        inner = Fraction(3, 2) * (-1) ** n * e[n] / k ** 2
        for j in range(1, n + 1):
            inner += 2 * (-1) ** (n - j) * e[n - j] / Fraction(k ** (2 * j + 2))
        yield inner / comb(2 * k, k)
        state.advance()
        k += 1
