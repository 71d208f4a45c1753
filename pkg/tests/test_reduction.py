import random
from fractions import Fraction

import mpmath
import pytest

from repdigits.contfrac import RefinableReal
from repdigits.reduction import (
    BoundOnW,
    Candidate,
    NoCandidate,
    ReductionProblem,
    RetryNext,
    apply_reduction,
    check_candidate_inequality,
    form_is_zero,
    nearest_n,
)

mpmath.mp.prec = 400

TAUS = {
    "sqrt2": (RefinableReal.sqrt(2), lambda: mpmath.sqrt(2)),
    "sqrt3": (RefinableReal.sqrt(3), lambda: mpmath.sqrt(3)),
    "log2/log3": (RefinableReal.log_ratio(2, 3), lambda: mpmath.log(2) / mpmath.log(3)),
}


def survivors(tau, mu, A, B, M):
    """Brute force over m <= M with mpmath: largest w with |m tau - n + mu| < A B^-w."""
    out = []
    for m in range(M + 1):
        x = m * tau + mu
        form = abs(x - mpmath.nint(x))
        if form == 0 or form >= A:
            continue
        w = int(mpmath.floor(mpmath.log(A / form) / mpmath.log(B)))
        # strict inequality at the boundary
        if A * mpmath.mpf(B) ** (-w) <= form:
            w -= 1
        out.append((m, w))
    return out


def random_instances(count, seed):
    rng = random.Random(seed)
    for _ in range(count):
        name = rng.choice(sorted(TAUS))
        mu = Fraction(rng.randint(-300, 300), rng.randint(1, 50))
        A = Fraction(rng.randint(1, 30), rng.randint(1, 3))
        B = rng.choice((2, 3, 10))
        M = rng.randint(1, 1000)
        yield name, mu, A, B, M


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
def test_soundness_against_brute_force(seed):
    kinds = set()
    for name, mu, A, B, M in random_instances(50, seed):
        tau_r, tau_mp = TAUS[name]
        out = apply_reduction(ReductionProblem(tau_r, mu, A, B, M))
        kinds.add(out.kind)
        found = survivors(tau_mp(), mpmath.mpf(mu.numerator) / mu.denominator,
                          mpmath.mpf(A.numerator) / A.denominator, B, M)
        if isinstance(out, BoundOnW):
            assert all(w <= out.w_max for _, w in found)
        elif isinstance(out, Candidate):
            assert all(m == out.m0 for m, w in found if w > out.w_threshold)
        else:
            assert all(w <= out.w_threshold for _, w in found)
    assert "BoundOnW" in kinds


def test_part_b_candidate_for_mu_multiple_of_tau():
    # mu = 5 tau gives epsilon <= 0; r = 5p so the candidate is m0 = q - 5 > M
    tau = RefinableReal.sqrt(2)
    mu = RefinableReal(lambda bits: tau(bits) * 5, label="5 sqrt2")
    out = apply_reduction(ReductionProblem(tau, mu, 1, 2, 100))
    assert isinstance(out, NoCandidate)
    assert out.m0 == out.q_used.q - 5


def test_rational_mu_multiple_of_tau_is_caught():
    tau = RefinableReal.sqrt(2)
    mu = RefinableReal(lambda bits: 3 * tau(bits), label="3 sqrt2")
    out = apply_reduction(ReductionProblem(tau, mu, 2, 2, 50))
    assert out.kind in ("Candidate", "NoCandidate")


def test_retry_next_does_not_loosen():
    tau, mu = RefinableReal.log_ratio(3, 10), RefinableReal.log_ratio(7, 10)
    p = ReductionProblem(tau, mu, 5, 10, 10 ** 6)
    first = apply_reduction(p)
    retry = apply_reduction(p, convergent_strategy=RetryNext(3))
    assert first.kind == "BoundOnW"
    assert retry.kind == "BoundOnW" and retry.q_used.index >= first.q_used.index


def test_validation():
    tau = RefinableReal.sqrt(2)
    with pytest.raises(ValueError):
        ReductionProblem(tau, 0, 1, 1, 10)
    with pytest.raises(ValueError):
        ReductionProblem(tau, 0, 1, 2, 0)
    with pytest.raises(ValueError):
        apply_reduction(ReductionProblem(RefinableReal.from_rational(Fraction(1, 2)), 0, 1, 2, 5))


def test_candidate_inequality_and_nearest():
    tau = RefinableReal.sqrt(2)
    p = ReductionProblem(tau, 0, 1, 10, 1000)
    assert nearest_n(p, 70) == 99
    # |70 sqrt2 - 99| = 0.00714...: below 10^-2, not below 10^-3
    assert check_candidate_inequality(p, 70, 2)
    assert not check_candidate_inequality(p, 70, 3)
    # enormous w is decided without forming B**-w
    assert not check_candidate_inequality(p, 70, 10 ** 30)


def test_form_is_zero_exact():
    tau = RefinableReal.log_ratio(2, 10)
    mu = RefinableReal.log_ratio(Fraction(5, 4), 10)
    p = ReductionProblem(tau, mu, 1, 10, 100)
    # 2^3 * 5/4 = 10
    assert form_is_zero(p, 3, 1) is True
    assert form_is_zero(p, 4, 1) is False
    assert not check_candidate_inequality(p, 3, 0)
