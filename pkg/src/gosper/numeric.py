"""Scalar tower used by every matrix product: exact rationals and binary floats.

Rationals are plain :class:`fractions.Fraction` values.  :class:`BigFloat`
is an immutable binary floating-point number with an explicit precision,
backed by mpmath's low-level ``libmp`` routines so that each operation is
correctly rounded (round-half-even) at the precision carried by its
operands.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from mpmath import libmp

__all__ = [
    "BigFloat",
    "Scalar",
    "MIN_PRECISION",
    "add",
    "mul",
    "neg",
    "invert",
    "binomial",
    "to_bigfloat",
    "to_decimal",
    "to_fraction",
    "log10_abs",
    "bits_for_digits",
    "is_zero",
]

MIN_PRECISION = 64
_RND = libmp.round_nearest
_LOG10_2 = math.log10(2.0)


class BigFloat:
    """Arbitrary-precision binary float with a fixed precision in bits.

    Mixed arithmetic with ``int`` or ``Fraction`` converts the rational
    operand at this float's precision first.  Between two floats the larger
    precision wins.
    """

    __slots__ = ("_mpf", "prec")

    def __init__(self, value: Union[int, Fraction, "BigFloat"] = 0, prec: int = 256):
        if prec < MIN_PRECISION:
            raise ValueError(f"precision must be >= {MIN_PRECISION} bits, got {prec}")
        self.prec = prec
        if isinstance(value, BigFloat):
            self._mpf = libmp.normalize(*value._mpf, prec, _RND) if value._mpf[1] else value._mpf
        elif isinstance(value, int):
            self._mpf = libmp.from_int(value, prec, _RND)
        elif isinstance(value, Fraction):
            self._mpf = libmp.from_rational(value.numerator, value.denominator, prec, _RND)
        else:
            raise TypeError(f"cannot build BigFloat from {type(value).__name__}")

    @classmethod
    def _raw(cls, mpf, prec: int) -> "BigFloat":
        obj = object.__new__(cls)
        obj._mpf = mpf
        obj.prec = prec
        return obj

    # -- representation -------------------------------------------------

    @property
    def sign(self) -> int:
        if self._mpf == libmp.fzero:
            return 0
        return -1 if self._mpf[0] else 1

    @property
    def mantissa(self) -> int:
        """Mantissa scaled so its top bit is bit ``prec - 1`` (0 for zero)."""
        _, man, _, bc = self._mpf
        return int(man) << (self.prec - bc) if man else 0

    @property
    def exponent(self) -> int:
        _, man, exp, bc = self._mpf
        return int(exp) - (self.prec - bc) if man else 0

    def to_fraction(self) -> Fraction:
        sign, man, exp, _ = self._mpf
        man = int(man)
        if sign:
            man = -man
        if exp >= 0:
            return Fraction(man << int(exp))
        return Fraction(man, 1 << int(-exp))

    def __float__(self) -> float:
        return libmp.to_float(self._mpf)

    def __bool__(self) -> bool:
        return self._mpf != libmp.fzero

    def __repr__(self) -> str:
        return f"BigFloat('{to_decimal(self, max(1, int(self.prec * _LOG10_2)))}', prec={self.prec})"

    def __str__(self) -> str:
        return to_decimal(self, max(1, int(self.prec * _LOG10_2)))

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, BigFloat):
            return other._mpf, max(self.prec, other.prec)
        if isinstance(other, int):
            return libmp.from_int(other, self.prec, _RND), self.prec
        if isinstance(other, Fraction):
            return libmp.from_rational(other.numerator, other.denominator, self.prec, _RND), self.prec
        return None, None

    def __add__(self, other):
        o, prec = self._coerce(other)
        if o is None:
            return NotImplemented
        return BigFloat._raw(libmp.mpf_add(self._mpf, o, prec, _RND), prec)

    __radd__ = __add__

    def __sub__(self, other):
        o, prec = self._coerce(other)
        if o is None:
            return NotImplemented
        return BigFloat._raw(libmp.mpf_sub(self._mpf, o, prec, _RND), prec)

    def __rsub__(self, other):
        o, prec = self._coerce(other)
        if o is None:
            return NotImplemented
        return BigFloat._raw(libmp.mpf_sub(o, self._mpf, prec, _RND), prec)

    def __mul__(self, other):
        o, prec = self._coerce(other)
        if o is None:
            return NotImplemented
        return BigFloat._raw(libmp.mpf_mul(self._mpf, o, prec, _RND), prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o, prec = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == libmp.fzero:
            raise ZeroDivisionError("BigFloat division by zero")
        return BigFloat._raw(libmp.mpf_div(self._mpf, o, prec, _RND), prec)

    def __rtruediv__(self, other):
        o, prec = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._mpf == libmp.fzero:
            raise ZeroDivisionError("BigFloat division by zero")
        return BigFloat._raw(libmp.mpf_div(o, self._mpf, prec, _RND), prec)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self._mpf == libmp.fzero:
                raise ZeroDivisionError("zero to a negative power")
            p = libmp.mpf_pow_int(self._mpf, -n, self.prec + 16, _RND)
            return BigFloat._raw(libmp.mpf_div(libmp.fone, p, self.prec, _RND), self.prec)
        return BigFloat._raw(libmp.mpf_pow_int(self._mpf, n, self.prec, _RND), self.prec)

    def __neg__(self):
        return BigFloat._raw(libmp.mpf_neg(self._mpf), self.prec)

    def __pos__(self):
        return self

    def __abs__(self):
        return BigFloat._raw(libmp.mpf_abs(self._mpf), self.prec)

    def sqrt(self) -> "BigFloat":
        if self._mpf[0] and self._mpf != libmp.fzero:
            raise ValueError("square root of a negative BigFloat")
        return BigFloat._raw(libmp.mpf_sqrt(self._mpf, self.prec, _RND), self.prec)

    def log(self) -> "BigFloat":
        if self.sign <= 0:
            raise ValueError("logarithm of a non-positive BigFloat")
        return BigFloat._raw(libmp.mpf_log(self._mpf, self.prec, _RND), self.prec)

    def with_precision(self, prec: int) -> "BigFloat":
        return BigFloat(self, prec)

    # -- comparisons (exact) --------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, BigFloat):
            return libmp.mpf_cmp(self._mpf, other._mpf)
        if isinstance(other, (int, Fraction)):
            a = self.to_fraction()
            return (a > other) - (a < other)
        raise TypeError

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0


Scalar = Union[Fraction, BigFloat]


def _as_scalar(x):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, BigFloat)):
        return x
    raise TypeError(f"not a Scalar: {type(x).__name__}")


def add(a, b) -> Scalar:
    return _as_scalar(a) + _as_scalar(b)


def mul(a, b) -> Scalar:
    return _as_scalar(a) * _as_scalar(b)


def neg(a) -> Scalar:
    return -_as_scalar(a)


def invert(a) -> Scalar:
    """Multiplicative inverse; raises ``ZeroDivisionError`` for zero."""
    a = _as_scalar(a)
    if not a:
        raise ZeroDivisionError("cannot invert zero")
    return 1 / a


def is_zero(a) -> bool:
    return not a


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise ValueError("binomial needs nonnegative arguments")
    return math.comb(n, k)


def bits_for_digits(digits: int, guard_bits: int = 16) -> int:
    return max(MIN_PRECISION, math.ceil(digits / _LOG10_2) + guard_bits)


def to_bigfloat(x, prec: int) -> BigFloat:
    if isinstance(x, BigFloat):
        return x.with_precision(prec)
    return BigFloat(Fraction(x), prec)


def to_fraction(x) -> Fraction:
    if isinstance(x, BigFloat):
        return x.to_fraction()
    return Fraction(x)


def log10_abs(x) -> float:
    """``log10(|x|)`` without overflow or underflow; ``-inf`` for zero."""
    if isinstance(x, BigFloat):
        _, man, exp, _ = x._mpf
        if not man:
            return -math.inf
        return math.log10(int(man)) + int(exp) * _LOG10_2
    x = Fraction(x)
    if x == 0:
        return -math.inf
    return math.log10(abs(x.numerator)) - math.log10(x.denominator)


def _round_half_even(num: int, den: int) -> int:
    q, r = divmod(num, den)
    if 2 * r > den or (2 * r == den and q % 2 == 1):
        q += 1
    return q


def to_decimal(x, digits: int) -> str:
    """Render ``x`` with ``digits`` significant digits, rounding half to even.

    Values with magnitude in ``[1e-4, 1e8]`` use positional notation, the
    rest use ``d.ddd`` + ``e<exp>``.  Zero renders as ``0.000e0``.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    value = to_fraction(x)
    if value == 0:
        return "0." + "0" * (digits - 1) + "e0" if digits > 1 else "0e0"
    sign = "-" if value < 0 else ""
    p, q = abs(value.numerator), value.denominator
    e10 = len(str(p)) - len(str(q))
    # settle 10**e10 <= p/q < 10**(e10+1)
    while (p * 10 ** max(0, -e10)) < (q * 10 ** max(0, e10)):
        e10 -= 1
    while (p * 10 ** max(0, -(e10 + 1))) >= (q * 10 ** max(0, e10 + 1)):
        e10 += 1
    shift = digits - 1 - e10
    num = p * 10 ** max(0, shift)
    den = q * 10 ** max(0, -shift)
    m = _round_half_even(num, den)
    if m == 10 ** digits:
        m //= 10
        e10 += 1
    s = str(m)
    if e10 > 8 or e10 < -4 or (e10 == 8 and m != 10 ** (digits - 1)):
        body = s[0] + ("." + s[1:] if digits > 1 else "")
        return f"{sign}{body}e{e10}"
    if e10 >= 0:
        if e10 + 1 >= digits:
            return sign + s + "0" * (e10 + 1 - digits)
        return f"{sign}{s[:e10 + 1]}.{s[e10 + 1:]}"
    return f"{sign}0.{'0' * (-e10 - 1)}{s}"
