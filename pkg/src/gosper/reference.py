"""Independent high-precision values for every scheme target.

Nothing here touches the matrix products or the central-binomial series:
zeta and Hurwitz zeta come from Euler-Maclaurin summation with an explicit
remainder bound, digamma from upward recurrence plus its asymptotic
expansion, and pi from Machin's arctangent formula.  Every function
returns a value whose absolute error is below ``10**-digits``; the working
precision carries ten extra decimal digits.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .numeric import BigFloat, Scalar, bits_for_digits
from .symfun import harmonic

__all__ = [
    "GUARD_DIGITS",
    "PoleError",
    "bernoulli_even",
    "zeta_ref",
    "eta_ref",
    "hurwitz_ref",
    "digamma_ref",
    "pi_ref",
    "euler_gamma_ref",
    "tauraso_closed_form",
    "tauraso_series_ref",
    "tauraso4_ref",
    "harmonic3_ref",
    "evaluate_target",
]

GUARD_DIGITS = 10
_K_MAX = 200
_LOG10_2PI = math.log10(2 * math.pi)
_LN10 = math.log(10)


class PoleError(ValueError):
    pass


_bern: List[Fraction] = [Fraction(1)]


def bernoulli_even(j: int) -> Fraction:
    """``B_{2j}`` exactly, from ``sum_{i<=m} C(2m+1, 2i) B_{2i} = (2m+1)/2``."""
    while len(_bern) <= j:
        m = len(_bern)
        acc = Fraction(2 * m + 1, 2)
        for i in range(m):
            acc -= math.comb(2 * m + 1, 2 * i) * _bern[i]
        _bern.append(acc / (2 * m + 1))
    return _bern[j]


def _prec(digits: int) -> int:
    return bits_for_digits(digits + GUARD_DIGITS)


# -- Euler-Maclaurin --------------------------------------------------------


def _em_log_term(s: int, j: int) -> float:
    """log10 of an upper bound for ``|B_2j|/(2j)! * (s)_{2j-1}`` (x-power excluded)."""
    return math.log10(4) - 2 * j * _LOG10_2PI + (math.lgamma(s + 2 * j - 1) - math.lgamma(s)) / _LN10


def _em_plan(s: int, digits: int, shift: Fraction, cutoff: Optional[int]) -> Tuple[int, int]:
    target = digits + 3
    if cutoff is not None:
        x0 = float(cutoff + shift)
        if x0 <= 0:
            raise ValueError("cutoff too small for this shift")
        for K in range(1, _K_MAX + 1):
            if _em_log_term(s, K + 1) - (s + 2 * K + 1) * math.log10(x0) < -target:
                return cutoff, K
        return cutoff, _K_MAX
    best = None
    for K in range(2, _K_MAX + 1):
        lx = (_em_log_term(s, K + 1) + target) / (s + 2 * K + 1)
        x0 = max(10 ** lx, (s + 2 * K) / (2 * math.pi) + 1)
        M = max(1, math.ceil(x0 - float(shift)) + 1)
        cost = M + 2 * K
        if best is None or cost < best[0]:
            best = (cost, M, K)
    return best[1], best[2]


def _check_hurwitz_shift(z: Fraction):
    if z.denominator == 1 and z <= -1:
        raise PoleError(f"Hurwitz zeta has a pole at z = {z}")


def hurwitz_ref(s: int, z, digits: int, cutoff: Optional[int] = None) -> BigFloat:
    """``sum_{n>=1} (n + z)**-s`` for integer ``s >= 2`` and rational ``z``."""
    if s < 2:
        raise ValueError("hurwitz_ref needs s >= 2")
    z = Fraction(z)
    _check_hurwitz_shift(z)
    prec = _prec(digits)
    M, K = _em_plan(s, digits, z, cutoff)
    total = BigFloat(0, prec)
    for n in range(1, M):
        total = total + BigFloat(n + z, prec) ** (-s)
    x0 = BigFloat(M + z, prec)
    inv = 1 / x0
    inv2 = inv * inv
    xs = inv ** s  # x0^-s
    total = total + x0 * xs / (s - 1) + xs / 2
    # t_j = (s)_{2j-1} x0^{-(s+2j-1)}
    t = xs * inv * s
    for j in range(1, K + 1):
        b = bernoulli_even(j)
        total = total + t * Fraction(b.numerator, b.denominator * math.factorial(2 * j))
        t = t * inv2 * ((s + 2 * j - 1) * (s + 2 * j))
    return total


def zeta_ref(s: int, digits: int, cutoff: Optional[int] = None) -> BigFloat:
    """Riemann zeta at an integer ``s >= 2``."""
    return hurwitz_ref(s, 0, digits, cutoff)


def eta_ref(s: int, digits: int) -> BigFloat:
    """Alternating zeta ``(1 - 2**(1-s)) zeta(s)``."""
    return zeta_ref(s, digits + 1) * (1 - Fraction(1, 2 ** (s - 1)))


# -- pi and digamma ---------------------------------------------------------


def _arctan_inv(x: int, scale: int) -> int:
    """``arctan(1/x) * 2**scale`` in fixed point."""
    one = 1 << scale
    power = one // x
    total = power
    x2 = x * x
    n = 1
    sign = -1
    while power:
        power //= x2
        total += sign * (power // (2 * n + 1))
        sign = -sign
        n += 1
    return total


@lru_cache(maxsize=32)
def pi_ref(digits: int) -> BigFloat:
    prec = _prec(digits)
    scale = prec + 32
    fixed = 16 * _arctan_inv(5, scale) - 4 * _arctan_inv(239, scale)
    return BigFloat(Fraction(fixed, 1 << scale), prec)


def _digamma_plan(digits: int) -> Tuple[float, int]:
    target = digits + 3
    best = None
    for K in range(2, _K_MAX + 1):
        j = K + 1
        logc = math.log10(4) + (math.lgamma(2 * j + 1) / _LN10) - 2 * j * _LOG10_2PI - math.log10(2 * j)
        y = max(10 ** ((logc + target) / (2 * j)), 2 * j / (2 * math.pi) + 1)
        cost = y + 2 * K
        if best is None or cost < best[0]:
            best = (cost, y, K)
    return best[1], best[2]


def _pole_check(x) -> None:
    if isinstance(x, BigFloat):
        f = x.to_fraction()
        nearest = round(f)
        if nearest <= 0 and abs(f - nearest) < Fraction(1, 2 ** (x.prec - 16)):
            raise PoleError(f"digamma pole near {nearest}")
    elif Fraction(x).denominator == 1 and x <= 0:
        raise PoleError(f"digamma has a pole at {x}")


def digamma_ref(x, digits: int) -> BigFloat:
    """``psi(x)`` for real ``x`` (rational or BigFloat) away from the poles."""
    _pole_check(x)
    prec = _prec(digits)
    xb = x.with_precision(prec) if isinstance(x, BigFloat) else BigFloat(Fraction(x), prec)
    y_min, K = _digamma_plan(digits)
    y_min = math.ceil(y_min)
    shift = BigFloat(0, prec)
    y = xb
    while y < y_min:
        shift = shift + 1 / y
        y = y + 1
    inv2 = 1 / (y * y)
    series = BigFloat(0, prec)
    p = inv2
    for j in range(1, K + 1):
        b = bernoulli_even(j)
        series = series + p * Fraction(b.numerator, b.denominator * 2 * j)
        p = p * inv2
    return y.log() - 1 / (2 * y) - series - shift


def euler_gamma_ref(digits: int) -> BigFloat:
    return -digamma_ref(1, digits)


# -- Tauraso sums -----------------------------------------------------------


def _exact_sqrt(x: Fraction) -> Optional[Fraction]:
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def tauraso_closed_form(a, b, digits: int) -> BigFloat:
    """``sum_{n>=1} 2/(n^2 - a n - b^2)`` through the digamma closed form."""
    a, b = Fraction(a), Fraction(b)
    prec = _prec(digits)
    if a == 0 and b == 0:
        return 2 * zeta_ref(2, digits + 1)
    disc = a * a + 4 * b * b
    root = _exact_sqrt(disc)
    if root is not None:
        plus, minus = 1 - a / 2 + root / 2, 1 - a / 2 - root / 2
        r = BigFloat(root, prec)
    else:
        r = BigFloat(disc, prec + 32).sqrt()
        plus, minus = (1 - a / 2) + r / 2, (1 - a / 2) - r / 2
    return 2 / r * (digamma_ref(plus, digits + 2) - digamma_ref(minus, digits + 2))


def _power_tail_sum(term, digits: int, M: int, lead: Fraction, first_power: int, step: int,
                    c1: Fraction, c2: Fraction) -> BigFloat:
    """``sum_{n<=M} term(n)`` plus the tail from the 1/n expansion

        lead * n**-first_power / (1 - c1 n**-step - c2 n**-(2 step)) = sum_j d_j n**-(first_power + step j)

    with ``d_j = c1 d_{j-1} + c2 d_{j-2}``; each power is summed by Euler-Maclaurin.
    """
    prec = _prec(digits)
    total = BigFloat(0, prec)
    for n in range(1, M + 1):
        total = total + term(n)
    # |d_j| <= |lead| R**j with R the dominant root of t^2 - |c1| t - |c2|
    R = (abs(float(c1)) + math.sqrt(float(c1) ** 2 + 4 * abs(float(c2)))) / 2
    logR = math.log10(R) if R > 0 else -300.0
    logM = math.log10(M)
    prev2, prev1 = Fraction(0), Fraction(1)
    j = 0
    while True:
        p = first_power + step * j
        if math.log10(abs(lead)) + j * logR + (1 - p) * logM < -(digits + 4):
            break
        if prev1:
            total = total + hurwitz_ref(p, M, digits + 4) * (lead * prev1)
        prev2, prev1 = prev1, c1 * prev1 + c2 * prev2
        j += 1
    return total


def _tail_cutoff(*scale: Fraction) -> int:
    return max(100, 8 * math.ceil(sum(abs(float(s)) for s in scale) + 1))


def tauraso_series_ref(a, b, digits: int) -> BigFloat:
    """Same sum as :func:`tauraso_closed_form`, by direct summation plus an expanded tail."""
    a, b = Fraction(a), Fraction(b)
    M = _tail_cutoff(a, b)
    for n in range(1, M + 1):
        if n * n - a * n - b * b == 0:
            raise PoleError(f"n^2 - a n - b^2 vanishes at n = {n}")
    prec = _prec(digits)
    return _power_tail_sum(
        lambda n: BigFloat(Fraction(2) / (n * n - a * n - b * b), prec),
        digits, M, Fraction(2), 2, 1, a, b * b,
    )


def tauraso4_ref(a, b, digits: int) -> BigFloat:
    """``sum_{n>=1} 4n/(n^4 - a^2 n^2 - b^4)``."""
    a, b = Fraction(a), Fraction(b)
    M = _tail_cutoff(a, b)
    for n in range(1, M + 1):
        if n ** 4 - a * a * n * n - b ** 4 == 0:
            raise PoleError(f"n^4 - a^2 n^2 - b^4 vanishes at n = {n}")
    prec = _prec(digits)
    return _power_tail_sum(
        lambda n: BigFloat(Fraction(4 * n) / (n ** 4 - a * a * n * n - b ** 4), prec),
        digits, M, Fraction(4), 3, 2, a * a, b ** 4,
    )


def harmonic3_ref(n: int) -> Fraction:
    return harmonic(int(n), 3)


def evaluate_target(desc, params: Dict[str, Fraction], digits: int) -> Scalar:
    """Oracle value of a :class:`~gosper.schemes.ConstantDescriptor` under ``params``."""
    kind = desc.kind
    if kind == "zeta":
        return zeta_ref(desc.s, digits)
    if kind == "eta":
        return eta_ref(desc.s, digits)
    if kind == "hurwitz":
        return hurwitz_ref(desc.s, params["z"], digits)
    if kind == "tauraso":
        return tauraso_closed_form(params["a"], params["b"], digits)
    if kind == "tauraso4":
        return tauraso4_ref(params["a"], params["b"], digits)
    if kind == "h3":
        return harmonic3_ref(params["Ncap"])
    if kind == "scaled_zeta":
        return zeta_ref(desc.s, digits + 2) * desc.factor
    raise ValueError(f"unknown target kind {kind!r}")
