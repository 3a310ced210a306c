"""Symmetric functions of reciprocal powers and generalized harmonic numbers.

Index convention (shared by ``e`` and ``h``): index ``k`` means the
variables ``1/j**s`` for ``1 <= j <= k - 1``.  So ``elem_sym(l, s, k)`` is
the coefficient of ``t**l`` in ``prod_{j<k} (1 + t/j**s)`` and
``complete_hom(m, s, k)`` that of ``t**m`` in ``prod_{j<k} 1/(1 - t/j**s)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List

__all__ = ["SymState", "elem_sym", "complete_hom", "harmonic", "hyperharmonic22", "esym_of"]


class SymState:
    """Incrementally maintained ``e_0..e_L`` and ``h_0..h_L`` at index ``k``.

    Each :meth:`advance` adjoins the variable ``1/k**s`` and moves to
    ``k + 1`` in O(L) exact operations.
    """

    def __init__(self, s: int, order: int):
        if s < 1:
            raise ValueError("exponent s must be >= 1")
        if order < 0:
            raise ValueError("order must be >= 0")
        self.s = s
        self.order = order
        self.k = 1
        self.e: List[Fraction] = [Fraction(1)] + [Fraction(0)] * order
        self.h: List[Fraction] = [Fraction(1)] + [Fraction(0)] * order

    def advance(self) -> "SymState":
        x = Fraction(1, self.k ** self.s)
        e, h = self.e, self.h
        for ell in range(self.order, 0, -1):
            e[ell] += x * e[ell - 1]
        for m in range(1, self.order + 1):
            h[m] += x * h[m - 1]
        self.k += 1
        return self

    def advance_to(self, k: int) -> "SymState":
        if k < self.k:
            raise ValueError(f"cannot rewind SymState from k={self.k} to k={k}")
        while self.k < k:
            self.advance()
        return self


def elem_sym(ell: int, s: int, k: int) -> Fraction:
    """``e_ell^(s)(k)``: sum of ``(j_1 ... j_ell)**-s`` over ``j_1 < ... < j_ell <= k-1``."""
    if ell < 0 or k < 1:
        raise ValueError("need ell >= 0 and k >= 1")
    return SymState(s, ell).advance_to(k).e[ell]


def complete_hom(m: int, s: int, k: int) -> Fraction:
    if m < 0 or k < 1:
        raise ValueError("need m >= 0 and k >= 1")
    return SymState(s, m).advance_to(k).h[m]


_harmonic_cache: Dict[int, List[Fraction]] = {}


def harmonic(n: int, r: int = 1) -> Fraction:
    """``H_n^(r) = sum_{k=1}^n k**-r`` with ``H_0 = 0``."""
    if n < 0 or r < 1:
        raise ValueError("need n >= 0 and r >= 1")
    table = _harmonic_cache.setdefault(r, [Fraction(0)])
    while len(table) <= n:
        j = len(table)
        table.append(table[-1] + Fraction(1, j ** r))
    return table[n]


def hyperharmonic22(n: int) -> Fraction:
    """``H_n^(2,2) = sum_{i<j<=n} 1/(i j)**2``, i.e. ``elem_sym(2, 2, n + 1)``."""
    return elem_sym(2, 2, n + 1)


def esym_of(values) -> List[Fraction]:
    """Elementary symmetric polynomials ``e_0..e_len`` of an explicit list."""
    out = [Fraction(1)] + [Fraction(0)] * len(values)
    for i, x in enumerate(values, start=1):
        for m in range(i, 0, -1):
            out[m] += out[m - 1] * x
    return out
