"""Baker-Davenport style reduction of ``0 < |m tau - n + mu| < A B^-w``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Optional, Union

from .contfrac import Convergent, RefinableReal, first_convergent_above, next_convergent
from .numerics import (
    Number,
    PrecisionExhausted,
    PrecisionPolicy,
    RealInterval,
    Sign,
    compare_zero,
    floor_nearest,
    interval_log,
    nearest_integer_distance,
)

# exact vanishing tests raise integers to the power m; beyond this many
# bits the test is skipped and only interval evidence is used
EXACT_TEST_BITS = 1 << 20


class DegenerateMu(ArithmeticError):
    """The linear form could not be separated from zero."""


def _refinable(x: Union[Number, RefinableReal]) -> RefinableReal:
    return x if isinstance(x, RefinableReal) else RefinableReal.from_rational(x)


@dataclass(frozen=True)
class ReductionProblem:
    """Data of the inequality ``0 < |m tau - n + mu| < A * B**(-w)``, ``0 <= m <= M``.

    ``A`` may be an irrational refinable real (for example ``112 / log 10``).
    """

    tau: RefinableReal
    mu: RefinableReal
    A: RefinableReal
    B: Fraction
    M: int
    label: str = ""

    def __init__(self, tau, mu, A, B, M, label=""):
        object.__setattr__(self, "tau", _refinable(tau))
        object.__setattr__(self, "mu", _refinable(mu))
        object.__setattr__(self, "A", _refinable(A))
        object.__setattr__(self, "B", Fraction(B))
        object.__setattr__(self, "M", int(M))
        object.__setattr__(self, "label", label)
        if self.B <= 1:
            raise ValueError("B must exceed 1")
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if self.A.rational is not None and self.A.rational <= 0:
            raise ValueError("A must be positive")

    def summary(self) -> dict:
        return {
            "tau": self.tau.label,
            "mu": self.mu.label,
            "A": self.A.label,
            "B": str(self.B),
            "M": str(self.M),
        }


@dataclass(frozen=True)
class BoundOnW:
    """Part a: every solution has ``w <= w_max``."""

    w_max: int
    q_used: Convergent
    epsilon: RealInterval

    kind = "BoundOnW"


@dataclass(frozen=True)
class Candidate:
    """Part b: a solution with ``w > w_threshold`` must have ``m == m0``."""

    m0: int
    w_threshold: int
    r: int
    q_used: Convergent
    epsilon: Optional[RealInterval] = None

    kind = "Candidate"


@dataclass(frozen=True)
class NoCandidate:
    """Part b with ``m0 > M``: every solution has ``w <= w_threshold``."""

    w_threshold: int
    q_used: Convergent
    m0: int = 0
    r: int = 0
    epsilon: Optional[RealInterval] = None

    kind = "NoCandidate"


ReductionOutcome = Union[BoundOnW, Candidate, NoCandidate]


@dataclass(frozen=True)
class FirstAboveSixM:
    """Use the first convergent with ``q > 6M``."""


@dataclass(frozen=True)
class RetryNext:
    """Advance up to ``k`` further convergents looking for ``epsilon > 0``."""

    k: int = 3


def _escalate(policy: PrecisionPolicy, fn, what: str):
    """Run ``fn(bits)`` over the precision ladder until it returns non-None."""
    for bits in policy.levels():
        out = fn(bits)
        if out is not None:
            return out
    raise PrecisionExhausted(f"{what}: undecided at {policy.max_bits} bits")


def _rational_nearest(problem: ReductionProblem, q: int) -> Optional[int]:
    """``floor(mu q + 1/2)`` computed exactly when mu is rational."""
    if problem.mu.rational is None:
        return None
    return floor(problem.mu.rational * q + Fraction(1, 2))


def compute_epsilon(problem: ReductionProblem, c: Convergent,
                    policy: PrecisionPolicy = PrecisionPolicy()) -> Optional[RealInterval]:
    """Enclosure of ``||mu q|| - M ||tau q||``; None when never decided.

    Precision is raised until the sign is certain; if it never is, the last
    determinate enclosure is returned (its sign is then ambiguous).
    """
    last = None
    exact = _rational_nearest(problem, c.q)
    for bits in policy.levels():
        if exact is not None:
            dm = RealInterval.exact(abs(problem.mu.rational * c.q - exact), bits)
        else:
            dm = nearest_integer_distance(problem.mu(bits) * c.q)
        dt = nearest_integer_distance(problem.tau(bits) * c.q)
        if dm is None or dt is None:
            continue
        last = dm - dt * problem.M
        if compare_zero(last) is not Sign.AMBIGUOUS:
            return last
    return last


def _log_over_log_b(value: RealInterval, B: Fraction, bits: int) -> RealInterval:
    return value.log() / interval_log(B, bits)


def _part_a(problem: ReductionProblem, c: Convergent, eps: RealInterval,
            policy: PrecisionPolicy) -> BoundOnW:
    def attempt(bits):
        x = _log_over_log_b(problem.A(bits) * c.q / eps, problem.B, bits)
        # largest integer strictly below the upper endpoint
        return ceil(x.hi) - 1

    # eps was certified at some precision; recomputing at the first level
    # is enough since only the upper endpoint matters
    return BoundOnW(attempt(max(eps.precision_bits, policy.initial_bits)), c, eps)


def _part_b(problem: ReductionProblem, c: Convergent, eps: Optional[RealInterval],
            policy: PrecisionPolicy) -> ReductionOutcome:
    r = _rational_nearest(problem, c.q)
    if r is None:
        r = _escalate(policy, lambda bits: floor_nearest(problem.mu(bits) * c.q), "r = floor(mu q + 1/2)")
    m0 = (-r * pow(c.p, -1, c.q)) % c.q if c.q > 1 else 0
    bits = policy.initial_bits
    x = _log_over_log_b(problem.A(bits) * (3 * c.q), problem.B, bits)
    w_threshold = floor(x.hi)
    if m0 > problem.M:
        return NoCandidate(w_threshold, c, m0, r, eps)
    return Candidate(m0, w_threshold, r, c, eps)


def apply_reduction(problem: ReductionProblem, policy: PrecisionPolicy = PrecisionPolicy(),
                    convergent_strategy=FirstAboveSixM()) -> ReductionOutcome:
    """Certified outcome of the reduction lemma for ``problem``.

    An ambiguous epsilon is handled by part b, which needs no sign condition.
    """
    if problem.tau.rational is not None:
        raise ValueError("tau is rational; the reduction needs an irrational tau")
    first = first_convergent_above(problem.tau, 6 * problem.M, policy)
    retries = convergent_strategy.k if isinstance(convergent_strategy, RetryNext) else 0
    c = first
    first_eps = None
    for attempt in range(retries + 1):
        eps = compute_epsilon(problem, c, policy)
        if attempt == 0:
            first_eps = eps
        if eps is not None and compare_zero(eps) is Sign.POSITIVE:
            return _part_a(problem, c, eps, policy)
        if attempt < retries:
            c = next_convergent(c, problem.tau, policy)
    return _part_b(problem, first, first_eps, policy)


def form_is_zero(problem: ReductionProblem, m: int, n: int) -> Optional[bool]:
    """Exact test of ``m tau - n + mu == 0``; None when no exact test applies.

    Works for rational mu with irrational tau, and for tau and mu given as
    logarithm ratios over the same base, where the test becomes
    ``x_tau**m * x_mu == base**n``.
    """
    tau, mu = problem.tau, problem.mu
    if tau.rational is not None and mu.rational is not None:
        return m * tau.rational - n + mu.rational == 0
    if mu.rational is not None and tau.rational is None:
        # m tau is irrational unless m == 0
        return m == 0 and mu.rational == n
    if tau.log_args and mu.log_args and tau.log_args[1] == mu.log_args[1]:
        xt, base = tau.log_args
        xm, _ = mu.log_args
        size = abs(m) * max(xt.numerator.bit_length(), xt.denominator.bit_length())
        size += abs(n) * max(base.numerator.bit_length(), base.denominator.bit_length())
        if size > EXACT_TEST_BITS or m < 0 or n < 0:
            return None
        return xt ** m * xm == base ** n
    return None


def nearest_n(problem: ReductionProblem, m: int, policy: PrecisionPolicy = PrecisionPolicy()) -> int:
    """The integer nearest to ``m tau + mu``."""
    return _escalate(policy, lambda bits: floor_nearest(problem.tau(bits) * m + problem.mu(bits)),
                     "nearest integer to m tau + mu")


def check_candidate_inequality(problem: ReductionProblem, m: int, w: int,
                               policy: PrecisionPolicy = PrecisionPolicy()) -> bool:
    """Certified test of ``0 < |m tau - n + mu| < A B^-w`` with n nearest to ``m tau + mu``."""
    if m < 0 or w < 0:
        raise ValueError("m and w must be nonnegative")
    n = nearest_n(problem, m, policy)
    zero = None
    for bits in policy.levels():
        value = abs(problem.tau(bits) * m - n + problem.mu(bits))
        if value.lo <= 0:
            if zero is None:
                zero = form_is_zero(problem, m, n)
            if zero:
                return False
            continue
        # compare logarithms: w can be far too large for B**-w
        lhs = value.log()
        rhs = problem.A(bits).log() - w * interval_log(problem.B, bits)
        if lhs.hi < rhs.lo:
            return True
        if lhs.lo >= rhs.hi:
            return False
    if zero is None and form_is_zero(problem, m, n) is None:
        raise DegenerateMu(f"cannot separate m tau - n + mu from zero for m={m}")
    raise PrecisionExhausted(f"inequality at m={m}, w={w} undecided at {policy.max_bits} bits")


__all__ = [
    "BoundOnW",
    "Candidate",
    "DegenerateMu",
    "FirstAboveSixM",
    "NoCandidate",
    "ReductionOutcome",
    "ReductionProblem",
    "RetryNext",
    "apply_reduction",
    "check_candidate_inequality",
    "compute_epsilon",
    "form_is_zero",
    "nearest_n",
]
