from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gosper.numeric import (
    BigFloat,
    MIN_PRECISION,
    add,
    binomial,
    bits_for_digits,
    invert,
    is_zero,
    log10_abs,
    mul,
    neg,
    to_bigfloat,
    to_decimal,
    to_fraction,
)

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)


def test_bigfloat_roundtrip_exact_dyadic():
    x = BigFloat(Fraction(3, 8), 80)
    assert x.to_fraction() == Fraction(3, 8)
    assert float(x) == 0.375
    assert x.sign == 1


def test_bigfloat_rounds_half_even():
    # 1 + 2**-64 is exactly halfway between two 64-bit neighbours
    x = BigFloat(1 + Fraction(1, 2 ** 64), 64)
    assert x.to_fraction() == 1
    y = BigFloat(1 + Fraction(3, 2 ** 64), 64)
    assert y.to_fraction() == 1 + Fraction(4, 2 ** 64)


def test_min_precision_enforced():
    with pytest.raises(ValueError):
        BigFloat(1, MIN_PRECISION - 1)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        invert(Fraction(0))
    with pytest.raises(ZeroDivisionError):
        BigFloat(1, 128) / 0


def test_sqrt_and_log_against_mpmath():
    with mpmath.workprec(300):
        two = BigFloat(2, 256)
        assert abs(mpmath.mpf(two.sqrt().to_fraction().numerator) / two.sqrt().to_fraction().denominator
                   - mpmath.sqrt(2)) < mpmath.mpf(2) ** -250
        lg = two.log().to_fraction()
        assert abs(mpmath.mpf(lg.numerator) / lg.denominator - mpmath.log(2)) < mpmath.mpf(2) ** -250


def test_mixed_ops_keep_exactness_for_fractions():
    assert add(Fraction(1, 3), Fraction(1, 6)) == Fraction(1, 2)
    assert mul(Fraction(2, 3), 3) == 2
    assert neg(Fraction(1, 7)) == Fraction(-1, 7)
    assert isinstance(add(Fraction(1), BigFloat(1, 64)), BigFloat)
    assert is_zero(Fraction(0)) and is_zero(BigFloat(0, 64))


def test_binomial():
    assert binomial(4, 2) == 6
    assert binomial(400, 200) == math.comb(400, 200)
    with pytest.raises(ValueError):
        binomial(-1, 0)


def test_bits_for_digits_covers_digits():
    for d in (1, 10, 100, 1000):
        assert bits_for_digits(d) * math.log10(2) >= d


@pytest.mark.parametrize(
    "x, digits, expected",
    [
        (Fraction(115, 96), 6, "1.19792"),
        (Fraction(1, 8), 2, "0.12"),  # half-even: 0.125 -> 0.12
        (Fraction(3, 8), 2, "0.38"),
        (Fraction(9, 8), 5, "1.1250"),
        (Fraction(-2, 3), 3, "-0.667"),
        (Fraction(1, 10 ** 5), 3, "1.00e-5"),
        (Fraction(123456789), 4, "1.235e8"),
        (Fraction(12345678), 4, "12350000"),
        (Fraction(0), 4, "0.000e0"),
        (Fraction(99995, 10 ** 5), 4, "1.000"),
    ],
)
def test_to_decimal(x, digits, expected):
    assert to_decimal(x, digits) == expected


def test_log10_abs():
    assert log10_abs(Fraction(0)) == -math.inf
    assert log10_abs(Fraction(1, 1000)) == pytest.approx(-3)
    assert log10_abs(BigFloat(Fraction(1, 10 ** 400), 256)) == pytest.approx(-400)


@given(fractions, fractions)
def test_bigfloat_add_within_half_ulp(a, b):
    prec = 96
    got = (BigFloat(a, prec) + BigFloat(b, prec)).to_fraction()
    exact = BigFloat(a, prec).to_fraction() + BigFloat(b, prec).to_fraction()
    if exact:
        assert abs(got - exact) <= abs(exact) * Fraction(1, 2 ** (prec - 1))
    else:
        assert got == 0


@given(fractions)
@settings(max_examples=200)
def test_to_bigfloat_to_fraction_relative_error(a):
    prec = 128
    x = to_fraction(to_bigfloat(a, prec))
    assert abs(x - a) <= abs(a) * Fraction(1, 2 ** prec)


@given(st.fractions(min_value=Fraction(1, 10 ** 4), max_value=10 ** 6, max_denominator=10 ** 4),
       st.integers(min_value=1, max_value=30))
def test_to_decimal_parses_back_close(x, digits):
    text = to_decimal(x, digits)
    back = Fraction(text)
    assert abs(back - x) <= abs(x) * Fraction(6, 10 ** digits)
