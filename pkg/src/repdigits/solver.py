"""End-to-end pipeline: bounds, two-step reduction, exact degenerate cases, enumeration."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .bounds import BoundReport, Mode, bound_report, relation_m_from_n, theorem_bounds
from .contfrac import RefinableReal
from .enumeration import (
    ORDERED,
    EquationSpec,
    FamilyDescriptor,
    SearchBox,
    SolutionTuple,
    check_solution,
    detect_degenerate_families,
    detect_families,
    enumerate_box,
    g2_search_limit,
    solve_g2,
)
from .numerics import (
    PrecisionExhausted,
    PrecisionPolicy,
    RealInterval,
    Sign,
    compare_zero,
    floor_nearest,
    interval_log,
    nearest_integer_distance,
)
from .reduction import (
    BoundOnW,
    Candidate,
    FirstAboveSixM,
    NoCandidate,
    ReductionProblem,
    RetryNext,
    apply_reduction,
    check_candidate_inequality,
    nearest_n,
)

log = logging.getLogger(__name__)

GAP_REDUCTION = "GapReduction"
N_REDUCTION = "NReduction"
BOUND_ACCEPTED = "BoundAccepted"
CANDIDATE_CONTRADICTION = "CandidateContradiction"
CANDIDATE_PINNED = "CandidatePinned"
DIRECT_SCAN = "DirectScan"
SCREENED = "Screened"

# a pinned candidate is scanned at most this far past its threshold
PIN_SCAN_LIMIT = 200


class RationalTau(ValueError):
    """The reduction needs ``log b / log g`` irrational."""


class UnresolvedDegenerateCase(ArithmeticError):
    """A vanishing linear form that matches no known pattern."""


# -- exact helpers ------------------------------------------------------

def _integer_root(x: int, e: int) -> Optional[int]:
    r = round(x ** (1.0 / e))
    for c in (r - 1, r, r + 1):
        if c >= 2 and c ** e == x:
            return c
    return None


def multiplicative_dependence(b: int, g: int) -> Optional[Tuple[int, int, int]]:
    """``(a, e_b, e_g)`` with ``b = a^e_b``, ``g = a^e_g`` and a minimal, else None."""
    if b < 2 or g < 2:
        raise ValueError("b and g must be >= 2")
    best = None
    for e in range(max(b, g).bit_length(), 0, -1):
        a = _integer_root(b, e)
        if a is None:
            continue
        # a is the smallest base for b at this exponent; g must be a power of it
        k, x = 0, g
        while x % a == 0:
            x //= a
            k += 1
        if x == 1:
            best = (a, e, k)
            break
    return best


def _valuation(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _prime_factors(x: int) -> List[int]:
    out, p = [], 2
    while p * p <= x:
        if x % p == 0:
            out.append(p)
            while x % p == 0:
                x //= p
        p += 1
    if x > 1:
        out.append(x)
    return out


def _exact_log(x: int, a: int) -> Optional[int]:
    """k with ``a^k == x``, else None."""
    k = 0
    while x % a == 0 and x > 1:
        x //= a
        k += 1
    return k if x == 1 else None


@dataclass(frozen=True)
class PowerRelation:
    """Nonnegative solutions ``(u0 + du t, v0 + dv t)`` of ``P b^u = Q g^v``, t >= 0."""

    u0: int
    v0: int
    du: int = 0
    dv: int = 0

    @property
    def infinite(self) -> bool:
        return bool(self.du or self.dv)

    def first(self, u_min: int = 0, v_min: int = 0) -> Optional[Tuple[int, int]]:
        u, v = self.u0, self.v0
        if not self.infinite:
            return (u, v) if u >= u_min and v >= v_min else None
        t = 0
        if self.du:
            t = max(t, -(-(u_min - u) // self.du))
        if self.dv:
            t = max(t, -(-(v_min - v) // self.dv))
        return u + self.du * t, v + self.dv * t


def power_relation(P: Fraction, Q: Fraction, b: int, g: int) -> Optional[PowerRelation]:
    """All ``u, v >= 0`` with ``P b^u == Q g^v`` for positive rationals P, Q."""
    r = Fraction(P) / Fraction(Q)
    rn, rd = r.numerator, r.denominator
    dep = multiplicative_dependence(b, g)
    if dep is not None:
        a, eb, eg = dep
        # r = a^(eg v - eb u)
        if rd == 1:
            s = _exact_log(rn, a)
        elif rn == 1:
            s = _exact_log(rd, a)
            s = None if s is None else -s
        else:
            s = None
        if s is None:
            return None
        h = gcd(eb, eg)
        if s % h:
            return None
        du, dv = eg // h, eb // h
        for u in range(du):
            if (s + eb * u) % eg == 0:
                v = (s + eb * u) // eg
                if v < 0:
                    t = -(-(-v) // dv)
                    u, v = u + du * t, v + dv * t
                return PowerRelation(u, v, du, dv)
        return None
    rows = []
    for p in sorted(set(_prime_factors(b)) | set(_prime_factors(g))):
        rows.append((_valuation(b, p), _valuation(g, p), _valuation(rd, p) - _valuation(rn, p)))
    # u vb - v vg = c for each prime; independence gives two independent rows
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            (a1, b1, c1), (a2, b2, c2) = rows[i], rows[j]
            det = -a1 * b2 + a2 * b1
            if det == 0:
                continue
            u = Fraction(-c1 * b2 + c2 * b1, det)
            v = Fraction(a1 * c2 - a2 * c1, det)
            if u.denominator != 1 or v.denominator != 1 or u < 0 or v < 0:
                return None
            u, v = int(u), int(v)
            return PowerRelation(u, v) if rn * b ** u == rd * g ** v else None
    return None


# -- refinable constants --------------------------------------------------

@lru_cache(maxsize=None)
def _ln(x: int) -> RefinableReal:
    return RefinableReal(lambda bits: interval_log(x, bits), label=f"log({x})")


@lru_cache(maxsize=None)
def _ratio(x: int, base: int) -> RefinableReal:
    return RefinableReal.log_ratio(x, base)


def _a_constant(numerator: int, base: int) -> RefinableReal:
    return RefinableReal.quotient(numerator, _ln(base), label=f"{numerator}/log({base})")


def step1_numerator(g: int) -> int:
    """Integer ``>= g^3/(g-1)``; equals 112 for g = 10."""
    return -(-g ** 3 // (g - 1))


# -- traces -------------------------------------------------------------

def _outcome_dict(o) -> dict:
    if o is None:
        return {"kind": DIRECT_SCAN}
    d = {"kind": o.kind, "q": str(o.q_used.q), "p": str(o.q_used.p), "index": o.q_used.index}
    if o.epsilon is not None:
        d["epsilon_sign"] = compare_zero(o.epsilon).value
    if isinstance(o, BoundOnW):
        d["w_max"] = str(o.w_max)
    else:
        d["w_threshold"] = str(o.w_threshold)
        d["m0"] = str(o.m0)
        d["r"] = str(o.r)
    return d


@dataclass
class CaseTrace:
    step: str
    base_sign: int
    d1: Optional[int]
    d2: Optional[int]
    gap: Optional[int]
    problem: dict
    outcome: dict
    resolution: str
    w: int
    note: str = ""

    def to_dict(self) -> dict:
        return {"step": self.step, "base_sign": self.base_sign, "d1": self.d1, "d2": self.d2,
                "gap": self.gap, "problem": self.problem, "outcome": self.outcome,
                "resolution": self.resolution, "w": str(self.w), "note": self.note}

    @classmethod
    def from_dict(cls, d: dict) -> "CaseTrace":
        d = dict(d)
        d["w"] = int(d["w"])
        return cls(**d)


@dataclass(frozen=True)
class ZeroForm:
    """A linear form that vanishes exactly for the exponent pairs in ``relation``."""

    step: str
    base_sign: int
    d1: Optional[int]
    d2: Optional[int]
    gap: Optional[int]
    relation: PowerRelation


@dataclass
class StepResult:
    w_max: int
    traces: List[CaseTrace]
    zero_forms: List[ZeroForm]


# -- case construction ----------------------------------------------------

@dataclass(frozen=True)
class _Case:
    step: str
    base_sign: int
    d1: Optional[int]
    d2: Optional[int]
    gap: Optional[int]
    tau: Tuple[int, int]      # tau = log x / log base
    mu: Tuple[Fraction, int]  # mu = log y / log base
    A_num: int
    B: int
    # (P, Q) with P b^u = Q g^v exactly when the form vanishes
    zero: Tuple[Fraction, Fraction]
    # w implied by the companion integer of a part-b candidate, and its cap
    offset: int


def _step1_cases(b: int, g: int, base_sign: int, mode: Mode) -> List[_Case]:
    lhs = (g - 1) * (b + base_sign)
    out = []
    for d in range(1, g):
        mu = Fraction(lhs, d)
        if mode is Mode.SUM:
            out.append(_Case(GAP_REDUCTION, base_sign, None, d, None, (b, g), (mu, g),
                             step1_numerator(g), g, (Fraction(lhs), Fraction(d)), 1))
        else:
            out.append(_Case(GAP_REDUCTION, base_sign, d, None, None, (b, g), (mu, g),
                             2, g, (Fraction(lhs), Fraction(d)), 3))
    return out


def _step2_cases(b: int, g: int, base_sign: int, mode: Mode, gap_max: int) -> Tuple[List[_Case], List[CaseTrace]]:
    y = (g - 1) * (b + base_sign)
    out, screened = [], []
    for gap in range(gap_max + 1):
        for d1 in range(1, g):
            for d2 in range(1, g):
                x = d1 + d2 * g ** gap if mode is Mode.SUM else d1 * g ** gap - d2
                if x <= 0:
                    screened.append(CaseTrace(N_REDUCTION, base_sign, d1, d2, gap, {}, {"kind": SCREENED},
                                              SCREENED, -1, "difference of repdigits is nonpositive"))
                    continue
                out.append(_Case(N_REDUCTION, base_sign, d1, d2, gap, (g, b), (Fraction(x, y), b),
                                 2, b, (Fraction(y), Fraction(x)), 2 if mode is Mode.SUM else 1))
    return out, screened


def _problem(case: _Case, M: int) -> ReductionProblem:
    x, base = case.tau
    y, _ = case.mu
    mu = RefinableReal.log_ratio(y, base)
    return ReductionProblem(_ratio(x, base), mu, _a_constant(case.A_num, base), case.B, M)


# -- reduction path ---------------------------------------------------------

def _resolve(case: _Case, problem: ReductionProblem, outcome, policy: PrecisionPolicy) -> Tuple[int, str, str]:
    if isinstance(outcome, BoundOnW):
        return outcome.w_max, BOUND_ACCEPTED, ""
    if isinstance(outcome, NoCandidate):
        return outcome.w_threshold, BOUND_ACCEPTED, "m0 exceeds M"
    m0, thr = outcome.m0, outcome.w_threshold
    companion = nearest_n(problem, m0, policy)
    if case.step == GAP_REDUCTION:
        # companion is the longer repunit length; w <= companion - offset
        w_cap = companion - case.offset
        w = thr
        while w + 1 <= w_cap and check_candidate_inequality(problem, m0, w + 1, policy):
            w += 1
            if w - thr > PIN_SCAN_LIMIT:
                raise UnresolvedDegenerateCase(f"candidate m0={m0} keeps satisfying the inequality")
        if w == thr:
            return thr, CANDIDATE_CONTRADICTION, f"m0={m0} companion={companion}"
        return w, CANDIDATE_PINNED, f"m0={m0} companion={companion} holds up to w={w}"
    # exponent of b is the companion, so w is forced
    w = companion - case.offset
    if m0 >= 1 and w > thr and check_candidate_inequality(problem, m0, w, policy):
        return w, CANDIDATE_PINNED, f"l={m0} n={companion}"
    return thr, CANDIDATE_CONTRADICTION, f"l={m0} n={companion}"


def _reduce_case(case: _Case, M: int, policy: PrecisionPolicy, strategy) -> CaseTrace:
    problem = _problem(case, M)
    outcome = apply_reduction(problem, policy, strategy)
    w, resolution, note = _resolve(case, problem, outcome, policy)
    return CaseTrace(case.step, case.base_sign, case.d1, case.d2, case.gap, problem.summary(),
                     _outcome_dict(outcome), resolution, w, note)


# -- rational tau ---------------------------------------------------------

def _scan_case(case: _Case, policy: PrecisionPolicy) -> CaseTrace:
    """Bound w when tau is rational: the form only takes values ``k/Q + mu``."""
    x, base = case.tau
    dep = multiplicative_dependence(x, base)
    a, ex, ebase = dep
    h = gcd(ex, ebase)
    Q = ebase // h
    y, _ = case.mu
    mu = RefinableReal.log_ratio(y, base)
    A = _a_constant(case.A_num, base)
    integral = False
    delta = None
    for bits in policy.levels():
        z = mu(bits) * Q
        r = floor_nearest(z)
        if r is not None and Fraction(y) ** Q == Fraction(base) ** r:
            integral = True
            delta = RealInterval.exact(Fraction(1, Q), bits)
            break
        dist = nearest_integer_distance(z)
        if dist is not None and dist.lo > 0:
            delta = dist / Q
            break
    if delta is None:
        raise PrecisionExhausted("could not separate the scanned form from zero")
    bits = delta.precision_bits
    X = (A(bits) / delta).log() / interval_log(case.B, bits)
    w = ceil(X.hi) - 1
    note = f"Q={Q}" + (", form vanishes for some exponents" if integral else "")
    problem = {"tau": f"log({x})/log({base})", "mu": mu.label, "A": A.label, "B": str(case.B), "M": "n/a"}
    return CaseTrace(case.step, case.base_sign, case.d1, case.d2, case.gap, problem,
                     {"kind": DIRECT_SCAN, "delta_min": str(delta.lo)}, BOUND_ACCEPTED, w, note)


# -- steps ----------------------------------------------------------------

def _zero_form(case: _Case, b: int, g: int) -> Optional[ZeroForm]:
    P, Q = case.zero
    rel = power_relation(P, Q, b, g)
    if rel is None:
        return None
    return ZeroForm(case.step, case.base_sign, case.d1, case.d2, case.gap, rel)


def _run_cases(cases, b, g, M, policy, strategy, rational: bool) -> StepResult:
    traces, zeros = [], []
    for case in cases:
        if rational:
            traces.append(_scan_case(case, policy))
        else:
            traces.append(_reduce_case(case, M, policy, strategy))
        z = _zero_form(case, b, g)
        if z is not None:
            zeros.append(z)
    w_max = max((t.w for t in traces), default=-1)
    return StepResult(w_max, traces, zeros)


@lru_cache(maxsize=None)
def _step1_cached(b, g, base_sign, mode, M, policy, strategy) -> StepResult:
    rational = multiplicative_dependence(b, g) is not None
    return _run_cases(_step1_cases(b, g, base_sign, mode), b, g, M, policy, strategy, rational)


@lru_cache(maxsize=None)
def _step2_cached(b, g, base_sign, mode, gap_max, M, policy, strategy) -> StepResult:
    rational = multiplicative_dependence(b, g) is not None
    cases, screened = _step2_cases(b, g, base_sign, mode, gap_max)
    res = _run_cases(cases, b, g, M, policy, strategy, rational)
    return StepResult(res.w_max, screened + res.traces, res.zero_forms)


def default_M(b: int, g: int, mode: Mode, step: str) -> int:
    """Reduction size bound: the n-bound for the sum gap step, else the l, m bound."""
    tb = theorem_bounds(b, g, mode)
    if mode is Mode.SUM and step == GAP_REDUCTION:
        return tb["n_max"]
    return tb["lm_max"]


def gap_from_w(mode: Mode, w: int) -> int:
    """Largest gap ``m - l`` (sum) or ``l - m`` (diff) given the step-1 exponent bound."""
    return max(2, w) if Mode(mode) is Mode.SUM else max(2, w + 2)


def n_from_w(mode: Mode, w: int) -> int:
    """Largest n given the step-2 exponent bound (small n is always kept)."""
    return max(3, w + 2) if Mode(mode) is Mode.SUM else max(1, w + 1)


def step1_gap(spec: EquationSpec, policy: PrecisionPolicy = PrecisionPolicy(), M: Optional[int] = None,
              strategy=FirstAboveSixM()) -> Tuple[int, StepResult]:
    """Bound on ``m - l`` (sum) or ``l - m`` (diff) and the per-case traces."""
    if multiplicative_dependence(spec.b, spec.g) is not None:
        raise RationalTau(f"log {spec.b} / log {spec.g} is rational; use direct_scan")
    M = default_M(spec.b, spec.g, spec.mode, GAP_REDUCTION) if M is None else M
    res = _step1_cached(spec.b, spec.g, spec.base_sign, spec.mode, M, policy, strategy)
    return gap_from_w(spec.mode, res.w_max), res


def step2_n(spec: EquationSpec, gap_max: int, policy: PrecisionPolicy = PrecisionPolicy(),
            M: Optional[int] = None, strategy=FirstAboveSixM()) -> Tuple[int, StepResult]:
    """Bound on n for gaps ``0..gap_max`` and the per-case traces."""
    if multiplicative_dependence(spec.b, spec.g) is not None:
        raise RationalTau(f"log {spec.b} / log {spec.g} is rational; use direct_scan")
    M = default_M(spec.b, spec.g, spec.mode, N_REDUCTION) if M is None else M
    res = _step2_cached(spec.b, spec.g, spec.base_sign, spec.mode, gap_max, M, policy, strategy)
    return n_from_w(spec.mode, res.w_max), res


def direct_scan(spec: EquationSpec, policy: PrecisionPolicy = PrecisionPolicy()):
    """Gap and n bounds when ``log b / log g`` is rational."""
    if multiplicative_dependence(spec.b, spec.g) is None:
        raise ValueError("direct_scan needs multiplicatively dependent b and g")
    r1 = _step1_cached(spec.b, spec.g, spec.base_sign, spec.mode, 0, policy, None)
    gap = gap_from_w(spec.mode, r1.w_max)
    r2 = _step2_cached(spec.b, spec.g, spec.base_sign, spec.mode, gap, 0, policy, None)
    return gap, n_from_w(spec.mode, r2.w_max), r1, r2


# -- exact analysis of vanishing forms -------------------------------------

def _family_from_zero(spec: EquationSpec, z: ZeroForm) -> Tuple[List[FamilyDescriptor], List[SolutionTuple], List[str]]:
    """Solutions forced by a vanishing form: infinite families or single tuples."""
    b, g = spec.b, spec.g
    rel = z.relation
    flags: List[str] = []
    families: List[FamilyDescriptor] = []
    singles: List[SolutionTuple] = []
    if z.base_sign != spec.base_sign:
        return families, singles, flags
    if spec.mode is Mode.DIFF:
        # both diff forms vanish only when |d1 - d2| = g - 1, impossible; verify on members
        first = rel.first(0, 1)
        if first is not None:
            n, v = first
            tuples = []
            if z.step == N_REDUCTION:
                tuples = [SolutionTuple(z.d1, z.d2, v + z.gap, v, n)]
            else:
                tuples = [SolutionTuple(z.d1, d2, v, m, n) for m in range(1, v + 1) for d2 in range(1, g)]
            if any(check_solution(spec, t) for t in tuples):
                raise UnresolvedDegenerateCase(f"vanishing diff form has a solution: {z}")
            flags.append(f"vanishing form {z.step} d1={z.d1} d2={z.d2} gap={z.gap}: verified non-solutions")
        return families, singles, flags
    if z.step == GAP_REDUCTION:
        # (n, m) pairs; the remaining term d1 R(l) is then fixed
        first = rel.first(0, 1)
        if first is None:
            return families, singles, flags
        n, m = first
        hits = [SolutionTuple(d1, z.d2, l, m, n) for l in range(1, m + 1) for d1 in range(1, g)
                if check_solution(spec, SolutionTuple(d1, z.d2, l, m, n))]
        for t in hits:
            if rel.infinite:
                families.append(FamilyDescriptor("D", g, t.d1, t.d2, t.l, 0, t.m, rel.dv, t.n, rel.du))
            else:
                singles.append(t)
    else:
        first = rel.first(0, 1)
        if first is None:
            return families, singles, flags
        n, l = first
        t = SolutionTuple(z.d1, z.d2, l, l + z.gap, n)
        if check_solution(spec, t):
            if rel.infinite:
                families.append(FamilyDescriptor("D", g, t.d1, t.d2, t.l, rel.dv, t.m, rel.dv, t.n, rel.du))
            else:
                singles.append(t)
    for f in families:
        if not all(check_solution(spec, f.member(t)) for t in range(1, 6)):
            raise UnresolvedDegenerateCase(f"derived family {f.pattern} fails verification")
    return families, singles, flags


# -- reports ---------------------------------------------------------------

@dataclass
class SolverReport:
    spec: EquationSpec
    bounds: Optional[BoundReport]
    step1_gap_max: int
    step2_n_max: int
    step1_w: int
    step2_w: int
    final_box: SearchBox
    solutions: List[SolutionTuple]
    families: List[FamilyDescriptor]
    traces: List[CaseTrace]
    counts: Dict[str, int]
    flags: List[str] = field(default_factory=list)
    method: str = "reduction"

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "method": self.method,
            "bounds": None if self.bounds is None else self.bounds.to_dict(),
            "step1": {"gap_max": str(self.step1_gap_max), "w_max": str(self.step1_w),
                      "per_case": [t.to_dict() for t in self.traces if t.step == GAP_REDUCTION]},
            "step2": {"n_max": str(self.step2_n_max), "w_max": str(self.step2_w),
                      "per_case": [t.to_dict() for t in self.traces if t.step == N_REDUCTION]},
            "box": self.final_box.to_dict(),
            "solutions": [[str(x) for x in s] for s in self.solutions],
            "families": [f.to_dict() for f in self.families],
            "counts": {k: str(v) for k, v in self.counts.items()},
            "flags": list(self.flags),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SolverReport":
        traces = [CaseTrace.from_dict(t) for t in d["step1"]["per_case"] + d["step2"]["per_case"]]
        return cls(
            spec=EquationSpec.from_dict(d["spec"]),
            bounds=None if d["bounds"] is None else BoundReport.from_dict(d["bounds"]),
            step1_gap_max=int(d["step1"]["gap_max"]),
            step2_n_max=int(d["step2"]["n_max"]),
            step1_w=int(d["step1"]["w_max"]),
            step2_w=int(d["step2"]["w_max"]),
            final_box=SearchBox.from_dict(d["box"]),
            solutions=[SolutionTuple(*map(int, s)) for s in d["solutions"]],
            families=[FamilyDescriptor.from_dict(f) for f in d["families"]],
            traces=traces,
            counts={k: int(v) for k, v in d["counts"].items()},
            flags=list(d["flags"]),
            method=d.get("method", "reduction"),
        )


def solution_counts(solutions: Sequence[SolutionTuple]) -> Dict[str, int]:
    return {
        "n_eq_0": sum(1 for s in solutions if s.n == 0),
        "n_ge_1": sum(1 for s in solutions if s.n >= 1),
        "max_l": max((s.l for s in solutions), default=0),
        "max_m": max((s.m for s in solutions), default=0),
        "max_n": max((s.n for s in solutions), default=0),
    }


@dataclass(frozen=True)
class Overrides:
    """Pooled reduction inputs, used to mirror a table computed over a whole b range."""

    step1_M: Optional[int] = None
    step2_M: Optional[int] = None
    step2_gap_max: Optional[int] = None


def _solve_g2(spec: EquationSpec, tie_rule: str) -> SolverReport:
    sols = solve_g2(spec, tie_rule)
    L = g2_search_limit(spec.b)
    box = SearchBox((0, 0), (1, L), (1, L), (1, 1), (1, 1))
    fams = detect_degenerate_families(spec)
    flags = ["g=2: parity forces n=0"]
    if fams:
        flags.append(f"left-hand side vanishes at n=0: every (1,1,l,l,0) solves; listed for l <= {L}")
    return SolverReport(spec, None, 0, 0, -1, -1, box, sols, fams, [], solution_counts(sols), flags, "g2")


def solve(spec: EquationSpec, policy: PrecisionPolicy = PrecisionPolicy(), strategy=FirstAboveSixM(),
          overrides: Overrides = Overrides(), tie_rule: str = ORDERED) -> SolverReport:
    """Run the full pipeline for one equation."""
    if spec.g == 2:
        return _solve_g2(spec, tie_rule)
    b, g, mode = spec.b, spec.g, spec.mode
    flags: List[str] = []
    families = detect_families(spec)
    degenerate = detect_degenerate_families(spec)
    bounds = bound_report(b, g, mode)
    dep = multiplicative_dependence(b, g)
    if dep is not None:
        gap, n_cap, r1, r2 = direct_scan(spec, policy)
        method = "direct_scan"
        flags.append(f"log b/log g rational (b, g powers of {dep[0]}): bounds from direct scan")
    else:
        M1 = overrides.step1_M if overrides.step1_M is not None else default_M(b, g, mode, GAP_REDUCTION)
        M2 = overrides.step2_M if overrides.step2_M is not None else default_M(b, g, mode, N_REDUCTION)
        gap, r1 = step1_gap(spec, policy, M1, strategy)
        gap_range = overrides.step2_gap_max if overrides.step2_gap_max is not None else gap
        n_cap, r2 = step2_n(spec, max(gap, gap_range), policy, M2, strategy)
        method = "reduction"
    traces = r1.traces + r2.traces
    for t in traces:
        if t.resolution == CANDIDATE_PINNED:
            flags.append(f"pinned candidate {t.step} d1={t.d1} d2={t.d2} gap={t.gap}: w={t.w} ({t.note})")

    singles: List[SolutionTuple] = []
    for z in r1.zero_forms + r2.zero_forms:
        fams, ones, notes = _family_from_zero(spec, z)
        flags.extend(notes)
        singles.extend(ones)
        for f in fams:
            if any(f.same_members(k) for k in families):
                continue
            families.append(f)
            flags.append(f"infinite family {f.pattern} from a vanishing linear form (beyond the classical list)")
    for s in singles:
        flags.append(f"isolated solution {tuple(s)} from a vanishing linear form")
        n_cap = max(n_cap, s.n)

    n_cap = min(n_cap, bounds.n_max)
    caps = tuple((n, min(relation_m_from_n(b, g, n, mode), bounds.lm_max)) for n in range(n_cap + 1))
    top = max(c for _, c in caps)
    box = SearchBox((0, n_cap), (1, top), (1, top), (1, g - 1), (1, g - 1), caps)
    for s in singles:
        if not box.contains(s):
            raise UnresolvedDegenerateCase(f"isolated solution {s} escapes the search box")
    sols = enumerate_box(spec, box, families, tie_rule)
    for f in families:
        flags.append(f"family {f.kind} {f.pattern} excluded from counts")
    if degenerate:
        families = families + degenerate
        flags.append(f"left-hand side vanishes at n=0: every (d,d,l,l,0) solves; counted for l <= {caps[0][1]}")
    return SolverReport(spec, bounds, gap, n_cap, r1.w_max, r2.w_max, box, sols, families, traces,
                        solution_counts(sols), flags, method)


__all__ = [
    "CaseTrace",
    "Overrides",
    "PowerRelation",
    "RationalTau",
    "RetryNext",
    "SolverReport",
    "UnresolvedDegenerateCase",
    "direct_scan",
    "multiplicative_dependence",
    "power_relation",
    "solution_counts",
    "solve",
    "step1_gap",
    "step2_n",
    "run_suite",
    "SuiteResult",
]


# -- suites ----------------------------------------------------------------

PAPER = "paper"
PER_B = "per-b"


@dataclass
class SuiteResult:
    g: int
    mode: Mode
    b_values: List[int]
    reports: Dict[int, List[SolverReport]]
    errors: Dict[int, str]
    pooling: str

    def cell(self, b: int) -> Dict[str, int]:
        """Aggregated quantities of one column (all four sign choices)."""
        reps = self.reports[b]
        sols = [s for r in reps for s in r.solutions]
        out = solution_counts(sols)
        out["step1_w"] = max(r.step1_w for r in reps)
        out["step2_w"] = max(r.step2_w for r in reps)
        out["gap_max"] = max(r.step1_gap_max for r in reps)
        out["n_cap"] = max(r.step2_n_max for r in reps)
        out["ml_cap"] = relation_m_from_n(b, self.g, out["n_cap"], self.mode) if self.g > 2 else 0
        out["rational"] = int(any(r.method == "direct_scan" for r in reps))
        return out

    def columns(self) -> List[int]:
        return [b for b in self.b_values if b in self.reports]


def _solve_job(args):
    spec, policy, strategy, overrides, tie_rule = args
    try:
        return spec, solve(spec, policy, strategy, overrides, tie_rule), None
    except (ArithmeticError, ValueError) as exc:
        return spec, None, f"{type(exc).__name__}: {exc}"


def _map(fn, jobs, workers: int):
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _step1_job(args):
    spec, policy, strategy, M = args
    try:
        return step1_gap(spec, policy, M, strategy)[0]
    except (ArithmeticError, ValueError):
        return None


def run_suite(b_values: Sequence[int], g: int, mode: Mode, policy: PrecisionPolicy = PrecisionPolicy(),
              strategy=FirstAboveSixM(), pooling: str = PAPER, workers: int = 1,
              tie_rule: str = ORDERED) -> SuiteResult:
    """Solve every sign choice for each b.

    With ``pooling="paper"`` the step-2 gap range is the largest step-1 gap
    over the whole b range, and in diff mode both steps use the largest
    theorem bound over the range as M.  ``"per-b"`` keeps every column
    independent.
    """
    mode = Mode(mode)
    b_values = list(b_values)
    specs = [EquationSpec(b, g, bs, cs, mode) for b in b_values for bs in (1, -1) for cs in (1, -1)]
    overrides = Overrides()
    irrational = [b for b in b_values if g > 2 and multiplicative_dependence(b, g) is None]
    if pooling == PAPER and irrational:
        M = None
        if mode is Mode.DIFF:
            M = max(theorem_bounds(b, g, mode)["lm_max"] for b in irrational)
        jobs = [(EquationSpec(b, g, bs, 1, mode), policy, strategy, M) for b in irrational for bs in (1, -1)]
        gaps = [x for x in _map(_step1_job, jobs, workers) if x is not None]
        overrides = Overrides(step1_M=M, step2_M=M, step2_gap_max=max(gaps, default=None))
    elif pooling not in (PAPER, PER_B):
        raise ValueError(f"pooling must be {PAPER!r} or {PER_B!r}")
    results = _map(_solve_job, [(s, policy, strategy, overrides, tie_rule) for s in specs], workers)
    reports: Dict[int, List[SolverReport]] = {}
    errors: Dict[int, str] = {}
    for spec, rep, err in results:
        if err is not None:
            log.error("%s failed: %s", spec.label, err)
            errors[spec.b] = err
            continue
        reports.setdefault(spec.b, []).append(rep)
    for b in errors:
        reports.pop(b, None)
    return SuiteResult(g, mode, b_values, reports, errors, pooling)
