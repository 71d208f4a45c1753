from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repdigits.numerics import (
    PrecisionPolicy,
    RealInterval,
    Sign,
    compare_zero,
    floor_nearest,
    format_decimal,
    interval_log,
    interval_sqrt,
    nearest_integer_distance,
)

mpmath.mp.prec = 600

positive = st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 9).filter(lambda x: x > 0)


def mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def encloses(iv: RealInterval, value) -> bool:
    return mp(iv.lo) <= value <= mp(iv.hi)


@given(positive)
@settings(max_examples=200)
def test_log_encloses_high_precision_value(x):
    assert encloses(interval_log(x, 256), mpmath.log(mp(x)))


@given(positive)
def test_sqrt_encloses(x):
    assert encloses(interval_sqrt(x, 200), mpmath.sqrt(mp(x)))


@pytest.mark.parametrize("bits", [64, 256, 1024])
def test_log_width_tracks_precision(bits):
    iv = interval_log(10, bits)
    assert iv.width < Fraction(1, 2 ** (bits - 8))


def test_log_of_one_is_exact_zero():
    iv = interval_log(1, 64)
    assert iv.lo == iv.hi == 0


def test_log_rejects_nonpositive():
    with pytest.raises(ValueError):
        interval_log(0, 64)


@given(positive, positive)
@settings(max_examples=150)
def test_arithmetic_is_outward(x, y):
    a, b = RealInterval.exact(x, 80), RealInterval.exact(y, 80)
    for iv, exact in ((a + b, x + y), (a - b, x - y), (a * b, x * y), (a / b, x / y)):
        assert iv.contains(exact)


def test_inexact_exact_widens_outward():
    iv = RealInterval.exact(Fraction(1, 3), 32)
    assert iv.lo < Fraction(1, 3) < iv.hi


def test_monotone_refinement():
    wide, narrow = interval_log(7, 64), interval_log(7, 512)
    assert narrow.lo >= wide.lo and narrow.hi <= wide.hi


def test_compare_zero():
    assert compare_zero(RealInterval.exact(Fraction(1, 10), 64)) is Sign.POSITIVE
    assert compare_zero(RealInterval.exact(Fraction(-1, 10), 64)) is Sign.NEGATIVE
    assert compare_zero(RealInterval.hull(-1, 1, 64)) is Sign.AMBIGUOUS


def test_floor_nearest_and_distance():
    x = RealInterval.hull(Fraction(27, 10), Fraction(28, 10), 64)
    assert floor_nearest(x) == 3
    d = nearest_integer_distance(x)
    assert d.lo <= Fraction(2, 10) <= d.hi
    straddle = RealInterval.hull(Fraction(24, 10), Fraction(26, 10), 64)
    assert floor_nearest(straddle) is None


@pytest.mark.parametrize(
    "x, digits, rounding, expected",
    [
        (Fraction(1, 3), 5, "nearest", "3.3333e-1"),
        (Fraction(2, 3), 3, "up", "6.67e-1"),
        (Fraction(2, 3), 3, "down", "6.66e-1"),
        (Fraction(-2, 3), 3, "up", "-6.66e-1"),
        (Fraction(999999), 3, "up", "1.00e+6"),
        (0, 4, "nearest", "0"),
    ],
)
def test_format_decimal(x, digits, rounding, expected):
    assert format_decimal(x, digits, rounding) == expected


def test_policy_levels_end_at_max():
    levels = list(PrecisionPolicy(100, 1000).levels())
    assert levels[0] == 100 and levels[-1] == 1000
    assert levels == sorted(levels)


def test_policy_validation():
    with pytest.raises(ValueError):
        PrecisionPolicy(2048, 1024)
    with pytest.raises(ValueError):
        PrecisionPolicy(64, 128, Fraction(1))


def test_policy_from_env():
    p = PrecisionPolicy.from_env({"REPDIGITS_INITIAL_BITS": "256", "REPDIGITS_MAX_BITS": "512"})
    assert (p.initial_bits, p.max_bits) == (256, 512)
