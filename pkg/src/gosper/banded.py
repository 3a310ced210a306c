"""Products of banded Toeplitz factors ``A_k = alpha_k I + beta_k J``.

``J`` is the N x N shift with ones on the first superdiagonal, so
``J**N = 0`` and a product of ``p`` such factors is

    (prod alpha_i) * sum_m e_m(beta_1/alpha_1, ..., beta_p/alpha_p) J**m.

:class:`BandAccumulator` streams the right-hand column of the Gosper
product from this expansion without materializing any matrix.  Vectors
here are indexed bottom-up: ``u[0]`` is ``u^(1)``, the entry next to the
implicit ``1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .gosper_core import GosperMatrix
from .numeric import BigFloat, Scalar, log10_abs, to_bigfloat

__all__ = [
    "BandFactor",
    "BandAccumulator",
    "ZeroAlphaError",
    "ErrorEstimate",
    "band_coefficients",
    "band_product",
    "accumulate",
    "error_estimate",
]


class ZeroAlphaError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class BandFactor:
    alpha: Scalar
    beta: Scalar
    u: Tuple  # bottom-up: u[0] = u^(1)

    @property
    def n(self) -> int:
        return len(self.u)

    def to_gosper(self) -> GosperMatrix:
        """The dense Gosper matrix of this factor (``u`` flipped to row order)."""
        n = self.n
        zero = Fraction(0)
        A = tuple(
            tuple(self.alpha if j == i else (self.beta if j == i + 1 else zero) for j in range(n))
            for i in range(n)
        )
        return GosperMatrix(A, tuple(reversed(self.u)))


def _ratio(f: BandFactor):
    if not f.alpha:
        raise ZeroAlphaError("alpha is zero; the ratio beta/alpha is undefined")
    return f.beta / f.alpha


def band_coefficients(factors: Iterable[BandFactor], n: int) -> List[Scalar]:
    """Coefficients of ``I, J, ..., J**(n-1)`` in ``A_1 ... A_p``."""
    if n < 1:
        raise ValueError("band dimension must be >= 1")
    prefix = Fraction(1)
    esyms: List[Scalar] = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for f in factors:
        if not f.alpha:
            raise ZeroAlphaError("band_product needs every alpha to be nonzero")
        r = f.beta / f.alpha
        for m in range(n - 1, 0, -1):
            esyms[m] = esyms[m] + esyms[m - 1] * r
        prefix = prefix * f.alpha
    return [prefix * e for e in esyms]


def band_product(factors: Iterable[BandFactor], n: int) -> List[List[Scalar]]:
    """Dense upper-triangular Toeplitz matrix ``A_1 ... A_p``."""
    coeffs = band_coefficients(factors, n)
    zero = Fraction(0)
    return [[coeffs[j - i] if j >= i else zero for j in range(n)] for i in range(n)]


class BandAccumulator:
    """Streaming state for ``v_p = sum_{q<=p} A_1 ... A_{q-1} u_q``.

    After ``p`` factors:

    * ``prefix`` is ``alpha_1 ... alpha_p``,
    * ``ratio_esyms[m]`` is ``e_m`` of ``beta_j/alpha_j`` for ``j <= p``,
    * ``v[l-1]`` is the truncated sum for ``v^(l)``.

    With ``prec`` set, incoming factor entries are rounded to BigFloat.
    """

    def __init__(self, n: int, prec: Optional[int] = None):
        if n < 1:
            raise ValueError("band dimension must be >= 1")
        self.n = n
        self.prec = prec
        self.p = 0
        one = Fraction(1) if prec is None else BigFloat(1, prec)
        zero = Fraction(0) if prec is None else BigFloat(0, prec)
        self.prefix: Scalar = one
        self.ratio_esyms: List[Scalar] = [one] + [zero] * (n - 1)
        self.v: List[Scalar] = [zero] * n

    def _convert(self, f: BandFactor) -> BandFactor:
        if self.prec is None:
            return f
        return BandFactor(
            to_bigfloat(f.alpha, self.prec),
            to_bigfloat(f.beta, self.prec),
            tuple(to_bigfloat(x, self.prec) for x in f.u),
        )

    def accumulate(self, f: BandFactor) -> "BandAccumulator":
        if f.n != self.n:
            raise ValueError(f"factor has dimension {f.n}, accumulator {self.n}")
        f = self._convert(f)
        # the new u is weighted by alpha_1..alpha_{p-1} and ratios j <= p-1,
        # so it must be consumed before prefix and ratios advance
        esyms = self.ratio_esyms
        for ell in range(self.n):
            acc = f.u[ell]
            for m in range(1, ell + 1):
                if esyms[m]:
                    acc = acc + esyms[m] * f.u[ell - m]
            self.v[ell] = self.v[ell] + self.prefix * acc
        if self.n > 1:
            r = _ratio(f)
            for m in range(self.n - 1, 0, -1):
                esyms[m] = esyms[m] + esyms[m - 1] * r
        self.prefix = self.prefix * f.alpha
        self.p += 1
        return self

    def extend(self, factors: Iterable[BandFactor]) -> "BandAccumulator":
        for f in factors:
            self.accumulate(f)
        return self

    def a_block(self) -> List[Scalar]:
        """Coefficients of ``I, J, ..., J**(N-1)`` in the current ``A_1 ... A_p``."""
        return [self.prefix * e for e in self.ratio_esyms]

    def to_gosper(self) -> GosperMatrix:
        coeffs = self.a_block()
        zero = Fraction(0)
        A = tuple(tuple(coeffs[j - i] if j >= i else zero for j in range(self.n)) for i in range(self.n))
        return GosperMatrix(A, tuple(reversed(self.v)))

    @classmethod
    def from_gosper(cls, m: GosperMatrix, p: int) -> "BandAccumulator":
        """Rebuild the streaming state from a dense partial product of ``p`` banded factors."""
        acc = cls(m.n)
        acc.p = p
        acc.prefix = m.A[0][0]
        if acc.prefix:
            acc.ratio_esyms = [m.A[0][j] / acc.prefix for j in range(m.n)]
        else:
            acc.ratio_esyms = [Fraction(1)] + [Fraction(0)] * (m.n - 1)
        acc.v = list(reversed(m.u))
        return acc


def accumulate(acc: BandAccumulator, f: BandFactor) -> BandAccumulator:
    return acc.accumulate(f)


class ErrorEstimate(NamedTuple):
    log10_bound: float  # log10 of the heuristic |v_inf - v_p|
    digits: float  # estimated correct decimal digits (absolute)


def error_estimate(acc: BandAccumulator, nxt: BandFactor) -> Optional[List[ErrorEstimate]]:
    """Heuristic truncation error per component, or ``None`` before any term.

    Treats the tail as geometric: the next contribution divided by
    ``1 - |alpha_{p+1}|``.  Not a rigorous bound.
    """
    if acc.p == 0:
        return None
    a = abs(float(nxt.alpha))
    if a >= 1:
        return [ErrorEstimate(math.inf, -math.inf) for _ in range(acc.n)]
    log_prefix = log10_abs(acc.prefix)
    out = []
    for ell in range(acc.n):
        terms = [log10_abs(acc.ratio_esyms[m]) + log10_abs(nxt.u[ell - m]) for m in range(ell + 1)]
        finite = [t for t in terms if t != -math.inf]
        if not finite or log_prefix == -math.inf:
            out.append(ErrorEstimate(-math.inf, math.inf))
            continue
        top = max(finite)
        log_next = top + math.log10(sum(10 ** (t - top) for t in finite))
        bound = log_prefix + log_next - math.log10(1 - a)
        out.append(ErrorEstimate(bound, -bound))
    return out


def dense_factors(factors: Sequence[BandFactor]) -> List[GosperMatrix]:
    return [f.to_gosper() for f in factors]
