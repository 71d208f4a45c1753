"""Closed-form bounds: Matveev constants, log-power transfer, parameter relations."""

from __future__ import annotations

import enum
from dataclasses import dataclass, asdict
from fractions import Fraction
from math import ceil, floor
from typing import Union

from .numerics import Number, RealInterval, format_decimal, interval_log, interval_sqrt

BITS = 256

Real = Union[Number, RealInterval]


class Mode(str, enum.Enum):
    SUM = "sum"
    DIFF = "diff"


def _iv(x: Real, bits: int = BITS) -> RealInterval:
    return x if isinstance(x, RealInterval) else RealInterval.exact(Fraction(x), bits)


def _ln(x: Number, bits: int = BITS) -> RealInterval:
    return interval_log(Fraction(x), bits)


def strict_floor(x: RealInterval) -> int:
    """Largest integer certainly admissible under ``value < x``."""
    return ceil(x.hi) - 1


def log_height_rational(x: Number, bits: int = BITS) -> RealInterval:
    """``h(p/q) = log max(|p|, q)``."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("height of zero is undefined")
    return _ln(max(abs(x.numerator), x.denominator), bits)


def matveev_constant(s: int, D: int, extra_factor: Real = 1, bits: int = BITS) -> RealInterval:
    """``1.4 * 30^(s+3) * s^4.5 * D^2 * (1 + log D) * extra_factor``."""
    if s < 1 or D < 1:
        raise ValueError("s and D must be positive")
    extra = _iv(extra_factor, bits)
    if extra.lo <= 0:
        raise ValueError("extra_factor must be positive")
    core = Fraction(14, 10) * 30 ** (s + 3) * s ** 4 * D ** 2
    return interval_sqrt(s, bits) * core * (1 + _ln(D, bits)) * extra


def log_power_transfer(l: int, H: Real, bits: int = BITS) -> RealInterval:
    """Upper bound ``2^l H (log H)^l`` on ``L`` when ``L < H (log L)^l``.

    Requires ``H > (4 l^2)^l``.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    H = _iv(H, bits)
    if not H.lo > (4 * l * l) ** l:
        raise ValueError(f"log_power_transfer needs H > (4l^2)^l = {(4 * l * l) ** l}")
    return H * 2 ** l * H.log() ** l


def relation_n_from_m(b: int, g: int, m: int, mode: Mode) -> int:
    """Largest n allowed by ``n < 2.5 m log g`` (sum) or ``n < 1.5 l log g`` (diff)."""
    c = Fraction(5, 2) if Mode(mode) is Mode.SUM else Fraction(3, 2)
    return strict_floor(_ln(g) * (c * m))


def relation_m_from_n(b: int, g: int, n: int, mode: Mode) -> int:
    """Largest m (sum) or l (diff) allowed by ``1.3 (n + 1.6) log b / log g + c``."""
    offset = 1 if Mode(mode) is Mode.SUM else 2
    x = _ln(b) / _ln(g) * (Fraction(13, 10) * (n + Fraction(8, 5))) + offset
    return strict_floor(x)


_THEOREM = {
    # (lm constant, n constant, H constant)
    Mode.SUM: (Fraction("2.71e29"), Fraction("2.08e29"), Fraction("1.35e25")),
    Mode.DIFF: (Fraction("2.85e29"), Fraction("2.19e29"), Fraction("1.42e25")),
}


def theorem_bounds_real(b: int, g: int, mode: Mode, bits: int = BITS):
    c_lm, c_n, _ = _THEOREM[Mode(mode)]
    lb, lg, lmax = _ln(b, bits), _ln(g, bits), _ln(max(b, g), bits)
    lm = lg ** 2 * lb ** 3 * lmax ** 2 * c_lm
    n = lg ** 3 * lb ** 2 * lmax ** 2 * c_n
    return lm, n


def theorem_bounds(b: int, g: int, mode: Mode) -> dict:
    """Integer bounds ``{"n_max", "lm_max"}`` from the strict theorem inequalities."""
    lm, n = theorem_bounds_real(b, g, mode)
    return {"n_max": strict_floor(n), "lm_max": strict_floor(lm)}


def intermediate_gap_bound(b: int, g: int, m_cap: int, mode: Mode, bits: int = BITS) -> RealInterval:
    """Gap bound ``3.73e11 (1 + log(c m log g)) log b log max(b, g)``, c = 2.5 or 1.5."""
    if m_cap < 1:
        raise ValueError("m_cap must be >= 1")
    c = Fraction(5, 2) if Mode(mode) is Mode.SUM else Fraction(3, 2)
    inner = (_ln(g, bits) * (c * m_cap)).log() + 1
    return inner * _ln(b, bits) * _ln(max(b, g), bits) * Fraction("3.73e11")


def linear_form_height_H(b: int, g: int, mode: Mode, bits: int = BITS) -> RealInterval:
    """``H`` fed to the log-power transfer with ``L = n + 1.6`` and ``l = 2``."""
    _, _, c_h = _THEOREM[Mode(mode)]
    return _ln(g, bits) ** 3 * _ln(b, bits) ** 2 * _ln(max(b, g), bits) * c_h


@dataclass(frozen=True)
class BoundReport:
    C1: str
    C2: str
    gap_bound: int
    step2_n_bound: int
    H: str
    L_bound: str
    n_max: int
    lm_max: int

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("gap_bound", "step2_n_bound", "n_max", "lm_max"):
            d[key] = str(d[key])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        d = dict(d)
        for key in ("gap_bound", "step2_n_bound", "n_max", "lm_max"):
            d[key] = int(d[key])
        return cls(**d)


def bound_report(b: int, g: int, mode: Mode) -> BoundReport:
    """All theorem-level quantities for one equation, upper endpoints throughout."""
    mode = Mode(mode)
    c1 = matveev_constant(3, 1, Fraction(26, 10))
    c2 = matveev_constant(3, 1)
    tb = theorem_bounds(b, g, mode)
    gap = intermediate_gap_bound(b, g, tb["lm_max"], mode) if g >= 2 else RealInterval.exact(0, BITS)
    H = linear_form_height_H(b, g, mode)
    try:
        L = log_power_transfer(2, H)
        step2 = strict_floor(L - Fraction(8, 5))
        L_str = format_decimal(L.hi, 6, "up")
    except ValueError:
        # tiny H (g or b near 2): the chain is vacuous, fall back to the theorem bound
        step2 = tb["n_max"]
        L_str = "n/a"
    return BoundReport(
        C1=format_decimal(c1.hi, 6, "up"),
        C2=format_decimal(c2.hi, 6, "up"),
        gap_bound=strict_floor(gap),
        step2_n_bound=step2,
        H=format_decimal(H.hi, 6, "up"),
        L_bound=L_str,
        n_max=tb["n_max"],
        lm_max=tb["lm_max"],
    )


__all__ = [
    "BoundReport",
    "Mode",
    "bound_report",
    "intermediate_gap_bound",
    "linear_form_height_H",
    "log_height_rational",
    "log_power_transfer",
    "matveev_constant",
    "relation_m_from_n",
    "relation_n_from_m",
    "strict_floor",
    "theorem_bounds",
    "theorem_bounds_real",
]

_ = floor
