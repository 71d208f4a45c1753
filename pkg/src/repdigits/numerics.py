"""Certified real arithmetic on dyadic intervals.

Every irrational quantity in the package (logarithms, their quotients, the
reduction parameter epsilon, ...) is carried as a :class:`RealInterval`
whose endpoints are dyadic rationals ``m * 2**e``.  Arithmetic rounds
outward, so each result is an enclosure of the exact value.

Logarithms are computed in fixed point with the series
``log(y) = 2 * atanh((y - 1) / (y + 1))`` after a table-driven argument
reduction; every truncation is tracked and added to the error radius.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterator, Optional, Union

Number = Union[int, Fraction]

GUARD_BITS = 64


class PrecisionExhausted(ArithmeticError):
    """Raised when a decision could not be certified at ``max_bits``."""


class Sign(enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class PrecisionPolicy:
    initial_bits: int = 1024
    max_bits: int = 16384
    escalation_factor: Fraction = Fraction(2)

    def __post_init__(self):
        if self.initial_bits < 16:
            raise ValueError("initial_bits must be at least 16")
        if self.initial_bits > self.max_bits:
            raise ValueError("initial_bits must not exceed max_bits")
        if Fraction(self.escalation_factor) <= 1:
            raise ValueError("escalation_factor must be > 1")

    def levels(self) -> Iterator[int]:
        """Yield the working precisions, ending exactly at ``max_bits``."""
        bits = self.initial_bits
        factor = Fraction(self.escalation_factor)
        while bits < self.max_bits:
            yield bits
            bits = max(bits + 1, int(bits * factor))
        yield self.max_bits

    @classmethod
    def from_env(cls, environ=None) -> "PrecisionPolicy":
        """Policy honouring ``REPDIGITS_INITIAL_BITS`` / ``REPDIGITS_MAX_BITS``."""
        env = os.environ if environ is None else environ
        default = cls()
        initial = int(env.get("REPDIGITS_INITIAL_BITS", default.initial_bits))
        maximum = int(env.get("REPDIGITS_MAX_BITS", max(default.max_bits, initial)))
        return cls(initial_bits=initial, max_bits=maximum)


def _floor_shift(m: int, s: int) -> int:
    # floor(m / 2**s), s >= 0
    return m >> s


def _ceil_shift(m: int, s: int) -> int:
    return -((-m) >> s)


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


class RealInterval:
    """Closed interval ``[lo_m * 2**exp, hi_m * 2**exp]``.

    Instances are immutable.  ``precision_bits`` controls how far results
    are rounded: endpoints are kept on a grid of step at most
    ``2**-precision_bits * max(1, |x|)``.
    """

    __slots__ = ("_lo", "_hi", "_exp", "precision_bits")

    def __init__(self, lo_m: int, hi_m: int, exp: int, precision_bits: int):
        if lo_m > hi_m:
            raise ValueError("interval endpoints out of order")
        object.__setattr__(self, "_lo", lo_m)
        object.__setattr__(self, "_hi", hi_m)
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "precision_bits", precision_bits)

    def __setattr__(self, name, value):
        raise AttributeError("RealInterval is immutable")

    # -- construction -------------------------------------------------

    @classmethod
    def _rounded(cls, lo_m: int, hi_m: int, exp: int, prec: int) -> "RealInterval":
        mag = max(abs(lo_m), abs(hi_m)).bit_length() + exp
        target = max(mag, 1) - 1 - prec
        if exp < target:
            s = target - exp
            lo_m, hi_m, exp = _floor_shift(lo_m, s), _ceil_shift(hi_m, s), target
        return cls(lo_m, hi_m, exp, prec)

    @classmethod
    def exact(cls, x: Number, precision_bits: int) -> "RealInterval":
        """Enclosure of the rational ``x`` (exact when ``x`` is dyadic)."""
        x = Fraction(x)
        if _is_dyadic(x):
            e = -(x.denominator.bit_length() - 1)
            return cls._rounded(x.numerator, x.numerator, e, precision_bits)
        k = precision_bits + GUARD_BITS + x.denominator.bit_length()
        num = x.numerator << k
        lo = num // x.denominator
        hi = -((-num) // x.denominator)
        return cls._rounded(lo, hi, -k, precision_bits)

    @classmethod
    def hull(cls, lo: Number, hi: Number, precision_bits: int) -> "RealInterval":
        a = cls.exact(lo, precision_bits)
        b = cls.exact(hi, precision_bits)
        return a.join(b)

    def join(self, other: "RealInterval") -> "RealInterval":
        e = min(self._exp, other._exp)
        lo = min(self._lo << (self._exp - e), other._lo << (other._exp - e))
        hi = max(self._hi << (self._exp - e), other._hi << (other._exp - e))
        return RealInterval._rounded(lo, hi, e, max(self.precision_bits, other.precision_bits))

    # -- views ---------------------------------------------------------

    @property
    def lo(self) -> Fraction:
        return _dyadic(self._lo, self._exp)

    @property
    def hi(self) -> Fraction:
        return _dyadic(self._hi, self._exp)

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def is_exact(self) -> bool:
        return self._lo == self._hi

    def contains(self, x: Union[Number, "RealInterval"]) -> bool:
        if isinstance(x, RealInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def issubset(self, other: "RealInterval") -> bool:
        return other.contains(self)

    def sign(self) -> Sign:
        if self._hi < 0:
            return Sign.NEGATIVE
        if self._lo > 0:
            return Sign.POSITIVE
        return Sign.AMBIGUOUS

    def __repr__(self):
        return f"RealInterval([{_sci(self.lo, 20)}, {_sci(self.hi, 20)}], bits={self.precision_bits})"

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> "RealInterval":
        if isinstance(other, RealInterval):
            return other
        if isinstance(other, (int, Fraction)):
            return RealInterval.exact(other, self.precision_bits)
        return NotImplemented

    def __neg__(self):
        return RealInterval(-self._hi, -self._lo, self._exp, self.precision_bits)

    def __abs__(self):
        if self._lo >= 0:
            return self
        if self._hi <= 0:
            return -self
        return RealInterval(0, max(-self._lo, self._hi), self._exp, self.precision_bits)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        e = min(self._exp, other._exp)
        lo = (self._lo << (self._exp - e)) + (other._lo << (other._exp - e))
        hi = (self._hi << (self._exp - e)) + (other._hi << (other._exp - e))
        return RealInterval._rounded(lo, hi, e, max(self.precision_bits, other.precision_bits))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other._lo == other._hi:
            products = (self._lo * other._lo, self._hi * other._lo)
        elif self._lo == self._hi:
            products = (self._lo * other._lo, self._lo * other._hi)
        else:
            products = (self._lo * other._lo, self._lo * other._hi,
                        self._hi * other._lo, self._hi * other._hi)
        return RealInterval._rounded(min(products), max(products), self._exp + other._exp,
                                     max(self.precision_bits, other.precision_bits))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other._lo <= 0 <= other._hi:
            raise ZeroDivisionError("divisor interval contains zero")
        prec = max(self.precision_bits, other.precision_bits)
        k = prec + GUARD_BITS + max(abs(other._lo), abs(other._hi)).bit_length()
        los, his = [], []
        for a in (self._lo, self._hi):
            for b in (other._lo, other._hi):
                num = a << k
                if b < 0:
                    num, b = -num, -b
                los.append(num // b)
                his.append(-((-num) // b))
        return RealInterval._rounded(min(los), max(his), self._exp - other._exp - k, prec)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = RealInterval.exact(1, self.precision_bits)
        if k % 2 == 0:
            base = abs(self)
        else:
            base = self
        for _ in range(k):
            result = result * base
        return result

    def log(self) -> "RealInterval":
        """Natural logarithm; the interval must be strictly positive."""
        if self._lo <= 0:
            raise ValueError("log of an interval that is not strictly positive")
        lo = interval_log(self.lo, self.precision_bits)
        if self.is_exact():
            return lo
        return lo.join(interval_log(self.hi, self.precision_bits))

    def sqrt(self) -> "RealInterval":
        if self._lo < 0:
            raise ValueError("sqrt of an interval with negative part")
        lo = interval_sqrt(self.lo, self.precision_bits)
        if self.is_exact():
            return lo
        return lo.join(interval_sqrt(self.hi, self.precision_bits))


def _dyadic(m: int, e: int) -> Fraction:
    if e >= 0:
        return Fraction(m << e)
    return Fraction(m, 1 << -e)


def _sci(x: Fraction, digits: int) -> str:
    return format_decimal(x, digits)


def format_decimal(x: Number, digits: int = 17, rounding: str = "nearest") -> str:
    """Deterministic scientific-notation rendering of a rational.

    ``rounding`` is ``"nearest"``, ``"up"`` (towards +inf) or ``"down"``.
    """
    x = Fraction(x)
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    a = abs(x)
    exp10 = len(str(a.numerator)) - len(str(a.denominator))
    if Fraction(10) ** exp10 > a:
        exp10 -= 1
    scale = Fraction(10) ** (digits - 1 - exp10)
    v = a * scale
    if rounding == "nearest":
        mant = int(v + Fraction(1, 2))
    else:
        away = (rounding == "up") != (x < 0)
        mant = int(v)
        if away and mant != v:
            mant += 1
    if mant >= 10 ** digits:
        mant //= 10
        exp10 += 1
    s = str(mant)
    body = s[0] + ("." + s[1:] if len(s) > 1 else "")
    return f"{sign}{body}e{exp10:+d}"


# -- logarithms ---------------------------------------------------------

def _atanh_fixed(num: int, den: int, w: int):
    """Return ``(v, err)`` with ``|v - atanh(num/den) * 2**w| <= err``.

    Requires ``0 <= num/den <= 1/3``.
    """
    if num == 0:
        return 0, 0
    p = (num << w) // den
    q = ((num * num) << w) // (den * den)
    total = 0
    terms = 0
    i = 0
    while p:
        total += p // (2 * i + 1)
        p = (p * q) >> w
        i += 1
        terms += 1
    # per-term error < 3.25 ulp, truncated tail < 3 ulp
    return total, 4 * terms + 4


@lru_cache(maxsize=64)
def _ln2_fixed(w: int):
    v, err = _atanh_fixed(1, 3, w)
    return 2 * v, 2 * err


_TABLE_SIZE = 32


@lru_cache(maxsize=512)
def _table_fixed(j: int, w: int):
    """``ln((32 + j) / 32)`` for j in [0, 32)."""
    v, err = _atanh_fixed(j, 2 * _TABLE_SIZE + j, w)
    return 2 * v, 2 * err


@lru_cache(maxsize=8192)
def _ln_int_fixed(n: int, w: int):
    """Fixed-point ``ln(n) * 2**w`` with error radius, for an integer ``n >= 1``."""
    if n == 1:
        return 0, 0
    k = n.bit_length() - 1
    # y = n / 2**k in [1, 2); pick table node c_j = (32 + j)/32 <= y
    j = ((n << 5) >> k) - _TABLE_SIZE
    ln2, e2 = _ln2_fixed(w)
    cj, ej = _table_fixed(j, w)
    # z = (y - c_j) / (y + c_j) < 1/65
    top = (n << 5) - ((_TABLE_SIZE + j) << k)
    bottom = (n << 5) + ((_TABLE_SIZE + j) << k)
    z, ez = _atanh_fixed(top, bottom, w)
    return k * ln2 + cj + 2 * z, k * e2 + ej + 2 * ez


def interval_log(x: Number, precision_bits: int) -> RealInterval:
    """Certified enclosure of ``ln(x)`` for a positive rational ``x``."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("interval_log: argument must be positive")
    if precision_bits < 16:
        raise ValueError("interval_log: precision_bits must be >= 16")
    if x == 1:
        return RealInterval(0, 0, 0, precision_bits)
    bits = max(x.numerator.bit_length(), x.denominator.bit_length())
    w = precision_bits + GUARD_BITS + bits.bit_length()
    vn, en = _ln_int_fixed(x.numerator, w)
    vd, ed = _ln_int_fixed(x.denominator, w)
    v, err = vn - vd, en + ed
    return RealInterval._rounded(v - err, v + err, -w, precision_bits)


def interval_sqrt(x: Number, precision_bits: int) -> RealInterval:
    """Certified enclosure of ``sqrt(x)`` for a non-negative rational."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("interval_sqrt: negative argument")
    k = precision_bits + GUARD_BITS
    # sqrt(n/d) = sqrt(n*d) / d
    s = x.numerator * x.denominator << (2 * k)
    r = isqrt(s)
    lo = Fraction(r, x.denominator << k)
    hi = lo if r * r == s else Fraction(r + 1, x.denominator << k)
    return RealInterval.hull(lo, hi, precision_bits)


# -- nearest-integer operators ------------------------------------------

def _floor_half(m: int, e: int) -> int:
    """floor(m * 2**e + 1/2)."""
    if e >= 0:
        return m << e
    s = -e
    return (m + (1 << (s - 1))) >> s


def floor_nearest(x: RealInterval) -> Optional[int]:
    """``floor(x + 1/2)`` when both endpoints agree, else ``None``."""
    a = _floor_half(x._lo, x._exp)
    b = _floor_half(x._hi, x._exp)
    return a if a == b else None


def nearest_integer_distance(x: RealInterval) -> Optional[RealInterval]:
    """Enclosure of the distance from ``x`` to the nearest integer.

    Returns ``None`` (indeterminate) when the endpoints round to different
    integers; the caller is expected to retry at higher precision.
    """
    n = floor_nearest(x)
    if n is None:
        return None
    d = x - n
    return abs(d)


def compare_zero(x: RealInterval) -> Sign:
    return x.sign()
