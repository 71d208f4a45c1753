"""Certified continued-fraction expansion of refinable reals."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterator, List, Optional

from .numerics import (
    Number,
    PrecisionExhausted,
    PrecisionPolicy,
    RealInterval,
    interval_log,
    interval_sqrt,
)


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    index: int

    def __post_init__(self):
        if self.q <= 0:
            raise ValueError("convergent denominator must be positive")


def _exact_log_ratio(x: Fraction, base: Fraction) -> Optional[Fraction]:
    """``log x / log base`` when it is rational, else None."""
    if x == 1:
        return Fraction(0)
    # x^c = base^a forces c <= bit size of base, so the float estimate pins the ratio
    limit = max(x.numerator, x.denominator, base.numerator, base.denominator).bit_length()
    guess = Fraction(math.log(x) / math.log(base)).limit_denominator(limit)
    if guess and x ** guess.denominator == base ** guess.numerator:
        return guess
    return None


class RefinableReal:
    """A real number given by an enclosure at any requested precision.

    ``evaluator(bits)`` must always enclose the same number.  Results are
    memoised per precision; the cache is guarded so instances can be shared
    between threads.

    ``rational`` is set when the number is known to be rational (it is then
    the exact value).  ``log_args`` records ``(x, base)`` for numbers of the
    form ``log(x) / log(base)``; the reduction code uses it to decide exact
    vanishing of linear forms with integer arithmetic.
    """

    def __init__(self, evaluator: Callable[[int], RealInterval], *, rational: Optional[Fraction] = None,
                 label: str = "", log_args=None):
        self._evaluator = evaluator
        self.rational = None if rational is None else Fraction(rational)
        self.label = label
        self.log_args = log_args
        self._cache = {}
        self._lock = threading.Lock()
        self._quotients: List[int] = []

    def __call__(self, precision_bits: int) -> RealInterval:
        hit = self._cache.get(precision_bits)
        if hit is None:
            hit = self._evaluator(precision_bits)
            with self._lock:
                self._cache[precision_bits] = hit
        return hit

    def __repr__(self):
        return f"RefinableReal({self.label or '?'})"

    @classmethod
    def from_rational(cls, x: Number) -> "RefinableReal":
        x = Fraction(x)
        return cls(lambda bits: RealInterval.exact(x, bits), rational=x, label=str(x))

    @classmethod
    def log_ratio(cls, x: Number, base: Number) -> "RefinableReal":
        """``log(x) / log(base)`` for positive rationals, ``base != 1``."""
        x, base = Fraction(x), Fraction(base)
        if base <= 0 or base == 1 or x <= 0:
            raise ValueError("log_ratio needs x > 0 and 0 < base != 1")
        rational = _exact_log_ratio(x, base)

        def evaluate(bits):
            return interval_log(x, bits) / interval_log(base, bits)

        return cls(evaluate, rational=rational, label=f"log({x})/log({base})", log_args=(x, base))

    @classmethod
    def sqrt(cls, x: Number) -> "RefinableReal":
        x = Fraction(x)
        return cls(lambda bits: interval_sqrt(x, bits), label=f"sqrt({x})")

    @classmethod
    def golden_ratio(cls) -> "RefinableReal":
        return cls(lambda bits: (1 + interval_sqrt(5, bits)) / 2, label="(1+sqrt(5))/2")

    @classmethod
    def quotient(cls, numerator: Number, denominator: "RefinableReal", label: str = "") -> "RefinableReal":
        """``numerator / denominator`` for a rational numerator."""
        numerator = Fraction(numerator)
        return cls(lambda bits: RealInterval.exact(numerator, bits) / denominator(bits),
                   label=label or f"{numerator}/{denominator.label}")


def _expansion(x: Fraction, limit: int) -> List[int]:
    """Partial quotients of a rational, at most ``limit + 1`` of them."""
    out = []
    num, den = x.numerator, x.denominator
    while den and len(out) <= limit:
        a, r = divmod(num, den)
        out.append(a)
        num, den = den, r
    if den == 0:
        # finished: the last quotient is not stable under perturbation
        out.append(None)
    return out


def certified_prefix(interval: RealInterval, limit: int) -> List[int]:
    """Partial quotients shared by every real number in ``interval``.

    A quotient is accepted only when both endpoint expansions agree on it
    and both continue past it, which forces the complete quotient of every
    interior point to exceed one at that depth.
    """
    a = _expansion(interval.lo, limit)
    b = _expansion(interval.hi, limit)
    out = []
    for i in range(min(len(a), len(b)) - 1):
        if a[i] is None or a[i] != b[i] or a[i + 1] is None or b[i + 1] is None:
            break
        out.append(a[i])
    return out[:limit]


def cf_partial_quotients(x: RefinableReal, count: int, policy: PrecisionPolicy = PrecisionPolicy()) -> List[int]:
    """The first ``count`` partial quotients of an irrational ``x``."""
    if x.rational is not None:
        raise ValueError(f"{x!r} is rational; its expansion is finite")
    if len(x._quotients) >= count:
        return x._quotients[:count]
    for bits in policy.levels():
        prefix = certified_prefix(x(bits), count)
        # a shorter prefix is still certified; keep it for later callers
        with x._lock:
            if len(prefix) > len(x._quotients):
                x._quotients = prefix
        if len(prefix) >= count:
            return prefix[:count]
    raise PrecisionExhausted(
        f"could not certify {count} partial quotients of {x!r} at {policy.max_bits} bits")


def convergents(x: RefinableReal, policy: PrecisionPolicy = PrecisionPolicy()) -> Iterator[Convergent]:
    """Yield the convergents of ``x`` in order, escalating precision as needed."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    want = 32
    k = 0
    while True:
        try:
            quotients = cf_partial_quotients(x, want, policy)
        except PrecisionExhausted:
            # hand out what is certified before giving up
            quotients = x._quotients
            if len(quotients) <= k:
                raise
        while k < len(quotients):
            a = quotients[k]
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            yield Convergent(p1, q1, k)
            k += 1
        want *= 2


def first_convergent_above(x: RefinableReal, threshold: int,
                           policy: PrecisionPolicy = PrecisionPolicy()) -> Convergent:
    """The convergent of smallest index with ``q > threshold``."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    for c in convergents(x, policy):
        if c.q > threshold:
            return c
    raise AssertionError("unreachable")


def next_convergent(c: Convergent, x: RefinableReal, policy: PrecisionPolicy = PrecisionPolicy()) -> Convergent:
    for d in convergents(x, policy):
        if d.index == c.index + 1:
            return d
    raise AssertionError("unreachable")


def approximation_gap(c: Convergent, x: RefinableReal, bits: int) -> RealInterval:
    """Enclosure of ``|p - q x|``; below ``1/q`` for every convergent."""
    return abs(c.p - c.q * x(bits))


def check_convergent(c: Convergent, x: RefinableReal, policy: PrecisionPolicy = PrecisionPolicy()) -> bool:
    """Certify ``gcd(p, q) = 1`` and ``|x - p/q| < 1/q**2``."""
    if gcd(c.p, c.q) != 1:
        return False
    bound = Fraction(1, c.q)
    for bits in policy.levels():
        gap = approximation_gap(c, x, bits)
        if gap.hi < bound:
            return True
        if gap.lo >= bound:
            return False
    raise PrecisionExhausted("could not certify the convergent inequality")


def log_quotient(numerator: Number, denominator: Number) -> RefinableReal:
    """Shorthand for ``RefinableReal.log_ratio``."""
    return RefinableReal.log_ratio(numerator, denominator)


__all__ = [
    "Convergent",
    "RefinableReal",
    "approximation_gap",
    "certified_prefix",
    "cf_partial_quotients",
    "check_convergent",
    "convergents",
    "first_convergent_above",
    "log_quotient",
    "next_convergent",
]

# keep interval_log importable from here for callers building custom reals
_ = interval_log
