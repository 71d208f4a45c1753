"""Exact evaluation of the equations, infinite families and bounded search."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .bounds import Mode

Range = Tuple[int, int]

# accepted conventions for l == m in sum mode
ORDERED = "ordered"
D1_LE_D2 = "d1<=d2"
TIE_RULES = (ORDERED, D1_LE_D2)

ORACLE_BUDGET = 10 ** 7


class CapTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class EquationSpec:
    """``(b + base_sign) b^n + const_sign = d1 R(l) +/- d2 R(m)`` in base ``g``."""

    b: int
    g: int
    base_sign: int
    const_sign: int
    mode: Mode

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.b < 2 or self.g < 2:
            raise ValueError("b and g must be >= 2")
        if self.base_sign not in (1, -1) or self.const_sign not in (1, -1):
            raise ValueError("signs must be +1 or -1")

    @property
    def label(self) -> str:
        bs = "+" if self.base_sign > 0 else "-"
        cs = "+" if self.const_sign > 0 else "-"
        return f"{self.mode.value} b={self.b} g={self.g} (b{bs}1)b^n{cs}1"

    def to_dict(self) -> dict:
        return {"b": self.b, "g": self.g, "base_sign": self.base_sign,
                "const_sign": self.const_sign, "mode": self.mode.value}

    @classmethod
    def from_dict(cls, d: dict) -> "EquationSpec":
        return cls(int(d["b"]), int(d["g"]), int(d["base_sign"]), int(d["const_sign"]), Mode(d["mode"]))


def all_specs(b: int, g: int, mode: Mode) -> List[EquationSpec]:
    """The four sign choices for one (b, g, mode)."""
    return [EquationSpec(b, g, bs, cs, mode) for bs in (1, -1) for cs in (1, -1)]


class SolutionTuple(NamedTuple):
    d1: int
    d2: int
    l: int
    m: int
    n: int

    def sort_key(self):
        return (self.n, self.m, self.l, self.d1, self.d2)


@dataclass(frozen=True)
class SearchBox:
    """Inclusive ranges; ``lm_caps`` optionally caps max(l, m) per n."""

    n_range: Range
    l_range: Range
    m_range: Range
    d1_range: Range
    d2_range: Range
    lm_caps: Optional[Tuple[Tuple[int, int], ...]] = None

    def __post_init__(self):
        for name in ("n_range", "l_range", "m_range", "d1_range", "d2_range"):
            lo, hi = getattr(self, name)
            object.__setattr__(self, name, (int(lo), int(hi)))

    @classmethod
    def for_spec(cls, spec: EquationSpec, n_max: int, lm_max: int, lm_caps=None) -> "SearchBox":
        caps = None if lm_caps is None else tuple((int(n), int(c)) for n, c in lm_caps)
        return cls((0, n_max), (1, lm_max), (1, lm_max), (1, spec.g - 1), (1, spec.g - 1), caps)

    def cap_for(self, n: int) -> int:
        """Upper limit on max(l, m) at this n."""
        hi = max(self.l_range[1], self.m_range[1])
        if self.lm_caps is not None:
            hi = min(hi, dict(self.lm_caps).get(n, hi))
        return hi

    def contains(self, t: SolutionTuple) -> bool:
        inside = all(lo <= v <= hi for v, (lo, hi) in (
            (t.n, self.n_range), (t.l, self.l_range), (t.m, self.m_range),
            (t.d1, self.d1_range), (t.d2, self.d2_range)))
        return inside and max(t.l, t.m) <= self.cap_for(t.n)

    def inflate(self, k: int) -> "SearchBox":
        grow = lambda r: (r[0], r[1] + k)
        caps = None if self.lm_caps is None else tuple((n, c + k) for n, c in self.lm_caps)
        if caps is not None:
            last = max(self.lm_caps)[1] + k
            caps = caps + tuple((n, last) for n in range(self.n_range[1] + 1, self.n_range[1] + k + 1))
        return SearchBox(grow(self.n_range), grow(self.l_range), grow(self.m_range),
                         self.d1_range, self.d2_range, caps)

    def to_dict(self) -> dict:
        d = {k: [str(v[0]), str(v[1])] for k, v in (
            ("n_range", self.n_range), ("l_range", self.l_range), ("m_range", self.m_range),
            ("d1_range", self.d1_range), ("d2_range", self.d2_range))}
        d["lm_caps"] = None if self.lm_caps is None else [[str(n), str(c)] for n, c in self.lm_caps]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SearchBox":
        r = lambda key: (int(d[key][0]), int(d[key][1]))
        caps = d.get("lm_caps")
        caps = None if caps is None else tuple((int(n), int(c)) for n, c in caps)
        return cls(r("n_range"), r("l_range"), r("m_range"), r("d1_range"), r("d2_range"), caps)


def repunit(g: int, m: int) -> int:
    if g < 2 or m < 1:
        raise ValueError("repunit needs g >= 2 and m >= 1")
    return (g ** m - 1) // (g - 1)


def lhs_value(spec: EquationSpec, n: int) -> int:
    if n < 0:
        raise ValueError("n must be >= 0")
    return (spec.b + spec.base_sign) * spec.b ** n + spec.const_sign


def rhs_value(spec: EquationSpec, t: SolutionTuple) -> int:
    a, c = t.d1 * repunit(spec.g, t.l), t.d2 * repunit(spec.g, t.m)
    return a + c if spec.mode is Mode.SUM else a - c


def in_type_bounds(spec: EquationSpec, t: SolutionTuple) -> bool:
    return (1 <= t.d1 < spec.g and 1 <= t.d2 < spec.g and t.l >= 1 and t.m >= 1 and t.n >= 0)


def check_solution(spec: EquationSpec, t: SolutionTuple) -> bool:
    return in_type_bounds(spec, t) and lhs_value(spec, t.n) == rhs_value(spec, t)


def is_canonical(spec: EquationSpec, t: SolutionTuple, tie_rule: str = ORDERED) -> bool:
    if spec.mode is Mode.DIFF:
        return t.m <= t.l
    if t.l < t.m:
        return True
    return t.l == t.m and (tie_rule == ORDERED or t.d1 <= t.d2)


# -- families -----------------------------------------------------------

@dataclass(frozen=True)
class FamilyDescriptor:
    """An infinite family ``t -> (d1, d2, l0 + dl(t-1), m0 + dm(t-1), n0 + dn(t-1))``.

    Kinds A, B and C are the classical sum-mode families, kind D is any
    further family found by exact analysis of a vanishing linear form, and
    kind Z is the diff-mode identity ``d R(l) - d R(l) = 0`` that appears
    when the left-hand side vanishes at n = 0.  Z is reported but not
    excluded from counts.
    """

    kind: str
    g: int
    d1: int
    d2: int
    l0: int
    dl: int
    m0: int
    dm: int
    n0: int
    dn: int
    k: Optional[int] = None
    excluded: bool = True

    def __post_init__(self):
        if not (self.dl or self.dm or self.dn):
            raise ValueError("a family needs a nonzero step")

    def member(self, t: int) -> SolutionTuple:
        if t < 1:
            raise ValueError("family parameter must be >= 1")
        s = t - 1
        return SolutionTuple(self.d1, self.d2, self.l0 + self.dl * s, self.m0 + self.dm * s,
                             self.n0 + self.dn * s)

    def parameter_of(self, s: SolutionTuple) -> Optional[int]:
        """The parameter generating ``s``, or None if ``s`` is not a member."""
        for start, step, value in ((self.m0, self.dm, s.m), (self.l0, self.dl, s.l), (self.n0, self.dn, s.n)):
            if step:
                q, r = divmod(value - start, step)
                if r or q < 0:
                    return None
                return q + 1 if self.member(q + 1) == s else None
        return None

    def contains(self, s: SolutionTuple) -> bool:
        return self.parameter_of(s) is not None

    def same_members(self, other: "FamilyDescriptor") -> bool:
        return all(self.member(t) == other.member(t) for t in (1, 2, 3))

    @property
    def pattern(self) -> str:
        def lin(start, step, var="t"):
            if not step:
                return str(start)
            off = start - step
            body = var if step == 1 else f"{step}{var}"
            return body if off == 0 else f"{body}{off:+d}"
        return f"({self.d1},{self.d2},{lin(self.l0, self.dl)},{lin(self.m0, self.dm)},{lin(self.n0, self.dn)})"

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in ("kind", "g", "d1", "d2", "l0", "dl", "m0", "dm", "n0", "dn", "k", "excluded")}
        d["pattern"] = self.pattern
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FamilyDescriptor":
        d = {k: v for k, v in d.items() if k != "pattern"}
        return cls(**d)


def family_a(g: int, k: int) -> FamilyDescriptor:
    """``(2, g-1, 1, m, mk)``."""
    return FamilyDescriptor("A", g, 2, g - 1, 1, 0, 1, 1, k, k, k=k)


def family_b(g: int, k: int, d1: int) -> FamilyDescriptor:
    """``(d1, g-1-d1, m, m, mk)``."""
    return FamilyDescriptor("B", g, d1, g - 1 - d1, 1, 1, 1, 1, k, k, k=k)


def family_c(g: int) -> FamilyDescriptor:
    """``(1, g-2, n, n+1, n)``."""
    return FamilyDescriptor("C", g, 1, g - 2, 1, 1, 2, 1, 1, 1)


def family_z(g: int, d: int) -> FamilyDescriptor:
    """``(d, d, l, l, 0)``."""
    return FamilyDescriptor("Z", g, d, d, 1, 1, 1, 1, 0, 0, excluded=False)


def _power_of_two_exponent(g: int) -> Optional[int]:
    return g.bit_length() - 1 if g & (g - 1) == 0 else None


def family_member(f: FamilyDescriptor, t: int) -> SolutionTuple:
    return f.member(t)


def detect_families(spec: EquationSpec) -> List[FamilyDescriptor]:
    """Infinite sum-mode families whose hypotheses match ``spec``."""
    out: List[FamilyDescriptor] = []
    if spec.mode is not Mode.SUM or spec.base_sign != -1:
        return out
    k = _power_of_two_exponent(spec.g)
    if spec.b == 2 and k is not None and k >= 2:
        if spec.const_sign == 1:
            out.append(family_a(spec.g, k))
        else:
            out.extend(family_b(spec.g, k, d1) for d1 in range(1, spec.g - 1))
    if spec.const_sign == -1 and spec.b == spec.g and spec.g >= 3:
        out.append(family_c(spec.g))
    return out


def detect_degenerate_families(spec: EquationSpec) -> List[FamilyDescriptor]:
    """Diff-mode identities from a vanishing left-hand side at n = 0."""
    if spec.mode is Mode.DIFF and lhs_value(spec, 0) == 0:
        return [family_z(spec.g, d) for d in range(1, spec.g)]
    return []


# -- search -------------------------------------------------------------

def _excluded(t: SolutionTuple, exclude: Sequence[FamilyDescriptor]) -> bool:
    return any(f.excluded and f.contains(t) for f in exclude)


def enumerate_box(spec: EquationSpec, box: SearchBox, exclude: Sequence[FamilyDescriptor] = (),
                  tie_rule: str = ORDERED) -> List[SolutionTuple]:
    """Every canonical solution inside ``box``, minus excluded family members.

    For each n and each ``(d2, m)`` the remaining term ``d1 R(l)`` is known,
    so l is located by bisection among the precomputed repunits.
    """
    if tie_rule not in TIE_RULES:
        raise ValueError(f"tie_rule must be one of {TIE_RULES}")
    g = spec.g
    top = max(box.l_range[1], box.m_range[1])
    reps = [0] + [repunit(g, k) for k in range(1, top + 1)]
    d1_lo, d1_hi = box.d1_range
    out = []
    for n in range(box.n_range[0], box.n_range[1] + 1):
        lhs = lhs_value(spec, n)
        cap = box.cap_for(n)
        m_hi = min(box.m_range[1], cap)
        for m in range(box.m_range[0], m_hi + 1):
            for d2 in range(box.d2_range[0], box.d2_range[1] + 1):
                if spec.mode is Mode.SUM:
                    rest = lhs - d2 * reps[m]
                else:
                    rest = lhs + d2 * reps[m]
                if rest <= 0:
                    continue
                # d1 R(l) = rest with d1 in [d1_lo, d1_hi]: R(l) in [rest/d1_hi, rest/d1_lo]
                lo = bisect.bisect_left(reps, -(-rest // d1_hi), 1)
                hi = bisect.bisect_right(reps, rest // d1_lo)
                for l in range(lo, hi):
                    if not box.l_range[0] <= l <= min(box.l_range[1], cap):
                        continue
                    d1, r = divmod(rest, reps[l])
                    if r or not d1_lo <= d1 <= d1_hi:
                        continue
                    t = SolutionTuple(d1, d2, l, m, n)
                    if is_canonical(spec, t, tie_rule) and not _excluded(t, exclude):
                        out.append(t)
    out.sort(key=SolutionTuple.sort_key)
    return out


def oracle_enumerate(spec: EquationSpec, caps: SearchBox, exclude: Sequence[FamilyDescriptor] = (),
                     tie_rule: str = ORDERED) -> List[SolutionTuple]:
    """Naive nested-loop search; deliberately shares no helpers with the fast path."""
    sizes = [r[1] - r[0] + 1 for r in (caps.n_range, caps.l_range, caps.m_range, caps.d1_range, caps.d2_range)]
    total = 1
    for s in sizes:
        total *= max(s, 0)
    if total > ORACLE_BUDGET:
        raise CapTooLarge(f"{total} tuples exceed the oracle budget of {ORACLE_BUDGET}")
    caps_by_n = dict(caps.lm_caps) if caps.lm_caps is not None else {}
    b, g = spec.b, spec.g
    found = []
    for n in range(caps.n_range[0], caps.n_range[1] + 1):
        left = (b + spec.base_sign) * b ** n + spec.const_sign
        for l in range(caps.l_range[0], caps.l_range[1] + 1):
            for m in range(caps.m_range[0], caps.m_range[1] + 1):
                if n in caps_by_n and max(l, m) > caps_by_n[n]:
                    continue
                for d1 in range(caps.d1_range[0], caps.d1_range[1] + 1):
                    for d2 in range(caps.d2_range[0], caps.d2_range[1] + 1):
                        x = d1 * (g ** l - 1) // (g - 1)
                        y = d2 * (g ** m - 1) // (g - 1)
                        if spec.mode is Mode.SUM:
                            if l > m or (l == m and tie_rule == D1_LE_D2 and d1 > d2):
                                continue
                            ok = left == x + y
                        else:
                            if m > l:
                                continue
                            ok = left == x - y
                        if ok:
                            found.append((n, m, l, d1, d2))
    found.sort()
    result = [SolutionTuple(d1, d2, l, m, n) for n, m, l, d1, d2 in found]
    return [t for t in result if not any(f.excluded and f.contains(t) for f in exclude)]


def g2_search_limit(b: int) -> int:
    """Exponent limit for g = 2; ``2^m <= b + 4`` holds for every solution."""
    return (b + 3).bit_length() + 1


def solve_g2(spec: EquationSpec, tie_rule: str = ORDERED) -> List[SolutionTuple]:
    """All g = 2 solutions; parity forces n = 0.

    When the left-hand side vanishes in diff mode every ``(1,1,l,l,0)`` is a
    solution; those are listed up to the search limit only.
    """
    if spec.g != 2:
        raise ValueError("solve_g2 needs g = 2")
    L = g2_search_limit(spec.b)
    box = SearchBox((0, 0), (1, L), (1, L), (1, 1), (1, 1))
    return enumerate_box(spec, box, tie_rule=tie_rule)


__all__ = [
    "CapTooLarge",
    "D1_LE_D2",
    "EquationSpec",
    "FamilyDescriptor",
    "ORDERED",
    "SearchBox",
    "SolutionTuple",
    "all_specs",
    "check_solution",
    "detect_degenerate_families",
    "detect_families",
    "enumerate_box",
    "family_a",
    "family_b",
    "family_c",
    "family_member",
    "family_z",
    "g2_search_limit",
    "is_canonical",
    "lhs_value",
    "oracle_enumerate",
    "repunit",
    "rhs_value",
    "solve_g2",
]
