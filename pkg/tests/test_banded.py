from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from gosper.banded import (
    BandAccumulator,
    BandFactor,
    ZeroAlphaError,
    band_coefficients,
    band_product,
    dense_factors,
    error_estimate,
)
from gosper.gosper_core import finite_product, identity, multiply
from gosper.numeric import BigFloat
from gosper.schemes import catalog


def rand_q(rng, nonzero=False):
    while True:
        x = Fraction(rng.randint(-7, 7), rng.randint(1, 6))
        if x or not nonzero:
            return x


def rand_factor(rng, n):
    return BandFactor(rand_q(rng, nonzero=True), rand_q(rng), tuple(rand_q(rng) for _ in range(n)))


def test_koecher1_two_terms_by_hand():
    acc = BandAccumulator(1)
    acc.extend(catalog.make_koecher(1).factors(2))
    # 5/4 - (1/6)(5/16) = 115/96
    assert acc.v == [Fraction(115, 96)]
    assert acc.prefix == Fraction(-1, 6) * Fraction(-1, 5)


def test_band_product_equals_dense_product():
    rng = random.Random(7)
    for _ in range(120):
        n = rng.randint(1, 6)
        p = rng.randint(0, 25)
        fs = [rand_factor(rng, n) for _ in range(p)]
        dense = finite_product(dense_factors(fs), n)
        assert band_product(fs, n) == [list(r) for r in dense.A]


def test_accumulator_equals_dense_u_block():
    rng = random.Random(11)
    for _ in range(80):
        n = rng.randint(1, 6)
        fs = [rand_factor(rng, n) for _ in range(rng.randint(1, 25))]
        acc = BandAccumulator(n)
        dense = identity(n)
        for f in fs:
            acc.accumulate(f)
            dense = multiply(dense, f.to_gosper())
            assert acc.to_gosper() == dense


def test_from_gosper_roundtrip():
    s = catalog.make_koecher(3)
    acc = BandAccumulator(3).extend(s.factors(12))
    back = BandAccumulator.from_gosper(acc.to_gosper(), 12)
    assert back.v == acc.v and back.a_block() == acc.a_block()
    nxt = s.factor(13)
    assert back.accumulate(nxt).v == acc.accumulate(nxt).v


def test_zero_alpha_rejected_in_dim_two():
    acc = BandAccumulator(2)
    with pytest.raises(ZeroAlphaError):
        acc.accumulate(BandFactor(Fraction(0), Fraction(1), (Fraction(1), Fraction(1))))


def test_zero_alpha_allowed_in_dim_one():
    acc = BandAccumulator(1)
    acc.accumulate(BandFactor(Fraction(0), Fraction(0), (Fraction(4),)))
    acc.accumulate(BandFactor(Fraction(1, 3), Fraction(0), (Fraction(9),)))
    assert acc.v == [Fraction(4)] and acc.prefix == 0


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        BandAccumulator(2).accumulate(BandFactor(Fraction(1), Fraction(0), (Fraction(1),)))


def test_float_accumulator_tracks_rational():
    s = catalog.make_borwein(3)
    exact = BandAccumulator(3).extend(s.factors(40))
    approx = BandAccumulator(3, prec=200).extend(s.factors(40))
    assert all(isinstance(x, BigFloat) for x in approx.v)
    for x, y in zip(exact.v, approx.v):
        assert abs(x - y.to_fraction()) < Fraction(1, 10 ** 55)


def test_error_estimate_before_and_after():
    s = catalog.make_koecher(2)
    acc = BandAccumulator(2)
    assert error_estimate(acc, s.factor(1)) is None
    acc.extend(s.factors(30))
    est = error_estimate(acc, s.factor(31))
    assert len(est) == 2
    for e in est:
        assert e.digits == -e.log10_bound
        assert 15 < e.digits < 22  # about 0.6 digits per term


def test_error_estimate_exact_after_zero_prefix():
    acc = BandAccumulator(1)
    acc.accumulate(BandFactor(Fraction(0), Fraction(0), (Fraction(4),)))
    est = error_estimate(acc, BandFactor(Fraction(1, 4), Fraction(0), (Fraction(1),)))
    assert est[0].digits == math.inf


@pytest.mark.parametrize(
    "scheme",
    [
        catalog.make_koecher(1),
        catalog.make_koecher(3),
        catalog.make_borwein(3),
        catalog.make_leschiner(2),
        catalog.make_markov_hurwitz(Fraction(1, 2)),
        catalog.make_tauraso(Fraction(1, 3), Fraction(1, 2)),
        catalog.make_tauraso_quartic(Fraction(1, 2), Fraction(1, 3)),
        catalog.make_amdeberhan_zeilberger(),
        catalog.make_amdeberhan_cubic(),
        catalog.make_harmonic3_finite(30),
    ],
    ids=lambda s: s.name,
)
def test_streaming_equals_dense_product_every_truncation(scheme):
    limit = scheme.finite_terms or 100
    acc = BandAccumulator(scheme.dim)
    dense = identity(scheme.dim)
    for f in scheme.factors(limit):
        acc.accumulate(f)
        dense = multiply(dense, f.to_gosper())
        assert acc.to_gosper() == dense


def test_band_coefficients_single_factor():
    f = BandFactor(Fraction(2), Fraction(3), (Fraction(0),) * 3)
    assert band_coefficients([f], 3) == [2, 3, 0]
