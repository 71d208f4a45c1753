import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from repdigits.bounds import (
    Mode,
    bound_report,
    intermediate_gap_bound,
    linear_form_height_H,
    log_power_transfer,
    matveev_constant,
    relation_m_from_n,
    relation_n_from_m,
    strict_floor,
    theorem_bounds,
)
from repdigits.numerics import RealInterval


def test_matveev_constants_below_thresholds():
    c1 = matveev_constant(3, 1, Fraction(26, 10))
    c2 = matveev_constant(3, 1)
    assert c1.hi < Fraction(373, 10 ** 3) * 10 ** 12
    assert c2.hi < Fraction(144, 10 ** 3) * 10 ** 12
    assert c1.lo > Fraction(372, 10 ** 3) * 10 ** 12


def test_matveev_monotone_in_s():
    assert matveev_constant(2, 1).hi < matveev_constant(3, 1).hi < matveev_constant(4, 1).hi


def test_theorem_bound_b12_diff():
    lm = theorem_bounds(12, 10, Mode.DIFF)["lm_max"]
    assert 142 * 10 ** 30 <= lm <= 144 * 10 ** 30


@pytest.mark.parametrize("mode", list(Mode))
def test_theorem_bounds_monotone_in_b(mode):
    vals = [theorem_bounds(b, 10, mode)["lm_max"] for b in range(2, 13) if b != 10]
    assert vals == sorted(vals)


def test_strict_floor():
    assert strict_floor(RealInterval.exact(5, 64)) == 4
    assert strict_floor(RealInterval.hull(Fraction(49, 10), Fraction(51, 10), 64)) == 5


def test_log_power_transfer():
    x = log_power_transfer(2, 512)
    assert 79000 < x.lo and x.hi < 80000
    with pytest.raises(ValueError):
        log_power_transfer(2, 100)


@pytest.mark.parametrize(
    "b, n, mode, expected",
    [(2, 121, Mode.SUM, 48), (12, 35, Mode.SUM, 52), (2, 0, Mode.DIFF, 2)],
)
def test_relation_m_from_n(b, n, mode, expected):
    assert relation_m_from_n(b, 10, n, mode) == expected


@given(st.integers(2, 12).filter(lambda b: b != 10), st.integers(0, 200), st.sampled_from(list(Mode)))
def test_relation_m_from_n_monotone(b, n, mode):
    assert relation_m_from_n(b, 10, n, mode) <= relation_m_from_n(b, 10, n + 1, mode)


@given(st.integers(2, 12), st.integers(1, 60), st.sampled_from(list(Mode)))
def test_relation_n_from_m_monotone(b, m, mode):
    assert relation_n_from_m(b, 10, m, mode) <= relation_n_from_m(b, 10, m + 1, mode)


def test_height_and_gap_outward():
    for mode, coeff in ((Mode.SUM, 1.35e25), (Mode.DIFF, 1.42e25)):
        H = float(linear_form_height_H(2, 10, mode).hi)
        logs = math.log(10) ** 3 * math.log(2) ** 2 * math.log(10)
        assert H / logs == pytest.approx(coeff, rel=1e-9)
    g1 = intermediate_gap_bound(2, 10, 10 ** 30, Mode.SUM)
    g2 = intermediate_gap_bound(2, 10, 10 ** 31, Mode.SUM)
    assert g1.hi <= g2.hi


def test_bound_report_round_trip():
    r = bound_report(5, 10, Mode.DIFF)
    assert type(r).from_dict(r.to_dict()) == r
    assert r.C1.startswith("3.7228")
