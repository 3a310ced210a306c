from __future__ import annotations

from fractions import Fraction

import mpmath
import numpy as np
import pytest

from gosper.numeric import BigFloat, log10_abs
from gosper.reference import (
    PoleError,
    bernoulli_even,
    digamma_ref,
    eta_ref,
    euler_gamma_ref,
    evaluate_target,
    harmonic3_ref,
    hurwitz_ref,
    pi_ref,
    tauraso4_ref,
    tauraso_closed_form,
    tauraso_series_ref,
    zeta_ref,
)
from gosper.schemes.definition import ConstantDescriptor


def agree(x, y) -> float:
    return -log10_abs(x - y)


def mp(x: BigFloat):
    f = x.to_fraction()
    return mpmath.mpf(f.numerator) / f.denominator


def test_bernoulli_frozen():
    assert bernoulli_even(0) == 1
    assert bernoulli_even(1) == Fraction(1, 6)
    assert bernoulli_even(2) == Fraction(-1, 30)
    assert bernoulli_even(6) == Fraction(-691, 2730)


def test_pi_and_even_zeta_closed_forms():
    pi = pi_ref(120)
    assert agree(zeta_ref(2, 110), pi * pi / 6) > 108
    assert agree(zeta_ref(4, 110), pi ** 4 / 90) > 108
    assert agree(eta_ref(2, 110), pi * pi / 12) > 108
    assert agree(eta_ref(4, 110), pi ** 4 * Fraction(7, 720)) > 108


def test_zeta3_against_mpmath():
    with mpmath.workdps(130):
        assert abs(mp(zeta_ref(3, 120)) - mpmath.zeta(3)) < mpmath.mpf(10) ** -120


@pytest.mark.parametrize("s", [3, 5, 7])
def test_zeta_cutoff_doubling_self_consistent(s):
    base = zeta_ref(s, 80)
    for cutoff in (40, 80, 160):
        assert agree(zeta_ref(s, 80, cutoff=cutoff), base) > 79


def test_hurwitz_values():
    pi = pi_ref(60)
    assert agree(hurwitz_ref(2, Fraction(1, 2), 50), pi * pi / 2 - 4) > 49
    assert agree(hurwitz_ref(3, Fraction(0), 50), zeta_ref(3, 50)) > 49
    assert agree(hurwitz_ref(3, Fraction(1), 50), zeta_ref(3, 50) - 1) > 49
    with mpmath.workdps(60):
        assert abs(mp(hurwitz_ref(3, Fraction(1, 3), 50)) - mpmath.zeta(3, mpmath.mpf(4) / 3)) < mpmath.mpf(10) ** -50


def test_hurwitz_pole():
    with pytest.raises(PoleError):
        hurwitz_ref(3, Fraction(-2), 20)


def test_digamma_values():
    g = euler_gamma_ref(60)
    assert agree(digamma_ref(Fraction(1), 60), -g) > 59
    ln2 = BigFloat(2, 260).log()
    assert agree(digamma_ref(Fraction(1, 2), 60), -g - 2 * ln2) > 59
    # recurrence psi(x + 1) = psi(x) + 1/x
    x = Fraction(7, 3)
    assert agree(digamma_ref(x + 1, 60), digamma_ref(x, 60) + 1 / x) > 59
    with mpmath.workdps(70):
        assert abs(mp(euler_gamma_ref(60)) - mpmath.euler) < mpmath.mpf(10) ** -60


def test_digamma_poles():
    for bad in (Fraction(0), Fraction(-3)):
        with pytest.raises(PoleError):
            digamma_ref(bad, 20)


@pytest.mark.parametrize(
    "a, b",
    [(Fraction(1, 3), Fraction(1, 2)), (Fraction(0), Fraction(1, 2)), (Fraction(-2, 5), Fraction(3, 7)),
     (Fraction(1, 2), Fraction(0)), (Fraction(0), Fraction(0))],
)
def test_tauraso_two_routes_agree(a, b):
    assert agree(tauraso_closed_form(a, b, 60), tauraso_series_ref(a, b, 60)) > 58


def test_tauraso_special_values():
    assert agree(tauraso_closed_form(0, Fraction(1, 2), 50), BigFloat(4, 200)) > 49
    assert agree(tauraso_closed_form(0, 0, 50), 2 * zeta_ref(2, 50)) > 49
    assert agree(tauraso4_ref(0, 0, 50), 4 * zeta_ref(3, 50)) > 49


def test_tauraso_numpy_brute_force():
    a, b = 1 / 3, 1 / 2
    n = np.arange(1, 10 ** 6 + 1, dtype=np.float64)
    direct = np.sum(2.0 / (n * n - a * n - b * b))
    tail = 2.0 / 10 ** 6  # leading term of the remainder
    ref = float(tauraso_closed_form(Fraction(1, 3), Fraction(1, 2), 20))
    assert abs(direct + tail - ref) < 1e-9


def test_tauraso4_against_mpmath():
    a, b = Fraction(1, 3), Fraction(1, 2)
    with mpmath.workdps(40):
        A, B = mpmath.mpf(1) / 3, mpmath.mpf(1) / 2
        want = mpmath.nsum(lambda n: 4 * n / (n ** 4 - A ** 2 * n ** 2 - B ** 4), [1, mpmath.inf])
        assert abs(mp(tauraso4_ref(a, b, 35)) - want) < mpmath.mpf(10) ** -30


def test_evaluate_target_dispatch():
    params = {"z": Fraction(0), "a": Fraction(0), "b": Fraction(1, 2), "Ncap": Fraction(3)}
    assert evaluate_target(ConstantDescriptor("h3"), params, 10) == harmonic3_ref(3) == Fraction(251, 216)
    assert agree(evaluate_target(ConstantDescriptor("tauraso"), params, 30), BigFloat(4, 128)) > 29
    assert agree(evaluate_target(ConstantDescriptor("scaled_zeta", 3, Fraction(5, 2)), params, 30),
                 zeta_ref(3, 30) * Fraction(5, 2)) > 29
