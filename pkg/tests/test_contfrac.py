from fractions import Fraction
from itertools import islice

import mpmath
import pytest

from repdigits.contfrac import (
    RefinableReal,
    cf_partial_quotients,
    check_convergent,
    convergents,
    first_convergent_above,
    next_convergent,
)

mpmath.mp.prec = 2000


def mp_quotients(x, count):
    out = []
    for _ in range(count):
        a = int(mpmath.floor(x))
        out.append(a)
        x = 1 / (x - a)
    return out


def test_sqrt2_quotients():
    assert cf_partial_quotients(RefinableReal.sqrt(2), 20) == [1] + [2] * 19


def test_golden_ratio_quotients():
    assert cf_partial_quotients(RefinableReal.golden_ratio(), 30) == [1] * 30


def test_log_ratio_matches_mpmath():
    x = RefinableReal.log_ratio(2, 10)
    assert cf_partial_quotients(x, 60) == mp_quotients(mpmath.log(2) / mpmath.log(10), 60)


def test_log2_log3_prefix():
    assert cf_partial_quotients(RefinableReal.log_ratio(2, 3), 8) == [0, 1, 1, 1, 2, 2, 3, 1]


def test_rational_has_no_infinite_expansion():
    with pytest.raises(ValueError):
        cf_partial_quotients(RefinableReal.log_ratio(8, 2), 5)
    assert RefinableReal.log_ratio(1, 7).rational == 0
    assert RefinableReal.log_ratio(4, 8).rational == Fraction(2, 3)
    assert RefinableReal.log_ratio(Fraction(1, 9), 27).rational == Fraction(-2, 3)
    assert RefinableReal.log_ratio(6, 10).rational is None


def test_convergents_of_sqrt2():
    got = [(c.p, c.q) for c in islice(convergents(RefinableReal.sqrt(2)), 6)]
    assert got == [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29), (99, 70)]


def test_first_convergent_above_and_next():
    x = RefinableReal.log_ratio(2, 10)
    c = first_convergent_above(x, 6000)
    assert c.q > 6000
    prev = [d for d in islice(convergents(x), c.index)]
    assert all(d.q <= 6000 for d in prev)
    assert next_convergent(c, x).index == c.index + 1


@pytest.mark.parametrize("x", [RefinableReal.sqrt(3), RefinableReal.log_ratio(3, 10), RefinableReal.log_ratio(10, 7)])
def test_convergents_certify(x):
    for c in islice(convergents(x), 80):
        assert check_convergent(c, x)


def test_wrong_fraction_is_rejected():
    from repdigits.contfrac import Convergent
    assert not check_convergent(Convergent(13, 9, 0), RefinableReal.sqrt(2))
    assert not check_convergent(Convergent(6, 4, 0), RefinableReal.sqrt(2))
