"""Self-checks run by ``repdigits verify``: each property prints PASS or FAIL."""

from __future__ import annotations

import math
import random
import time
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from math import gcd
from typing import Callable, List, Optional

from . import enumeration
from .bounds import Mode
from .contfrac import RefinableReal, convergents
from .enumeration import (
    EquationSpec,
    SearchBox,
    check_solution,
    enumerate_box,
    family_a,
    family_b,
    family_c,
    oracle_enumerate,
)
from .numerics import PrecisionPolicy, Sign, compare_zero
from .reduction import BoundOnW, Candidate, ReductionProblem, apply_reduction
from .solver import solve

SIGN_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


class PropertyFailure(AssertionError):
    pass


@dataclass(frozen=True)
class Caps:
    b_max: int = 5
    g_max: int = 8
    n_max: int = 20
    lm_max: int = 6
    family_t: int = 100
    convergents: int = 10_000
    reduction_instances: int = 200
    g2_b_max: int = 200


QUICK = Caps(b_max=4, g_max=6, n_max=12, lm_max=5, family_t=30, convergents=1000,
             reduction_instances=60, g2_b_max=60)


def check_oracle_equivalence(caps: Caps) -> None:
    for b in range(2, caps.b_max + 1):
        for g in range(3, caps.g_max + 1):
            for mode in Mode:
                for bs, cs in SIGN_PAIRS:
                    spec = EquationSpec(b, g, bs, cs, mode)
                    box = SearchBox((0, caps.n_max), (1, caps.lm_max), (1, caps.lm_max), (1, g - 1), (1, g - 1))
                    fast, slow = enumerate_box(spec, box), oracle_enumerate(spec, box)
                    if fast != slow:
                        extra = sorted(set(fast) ^ set(slow))[:3]
                        raise PropertyFailure(f"{spec.label}: fast and naive search differ at {extra}")


def check_families(caps: Caps) -> None:
    for g in range(3, 13):
        fams = [(EquationSpec(g, g, -1, -1, Mode.SUM), family_c(g))]
        for k in (2, 3, 4):
            if g == 2 ** k:
                fams.append((EquationSpec(2, g, -1, 1, Mode.SUM), family_a(g, k)))
                fams += [(EquationSpec(2, g, -1, -1, Mode.SUM), family_b(g, k, d1)) for d1 in range(1, g - 1)]
        for spec, fam in fams:
            for t in range(1, caps.family_t + 1):
                s = fam.member(t)
                if not check_solution(spec, s):
                    raise PropertyFailure(f"family {fam.kind} {fam.pattern} member t={t} {tuple(s)} fails {spec.label}")


def _check_convergent_sequence(x: RefinableReal, count: int, policy: PrecisionPolicy) -> None:
    xb = x(policy.max_bits)
    prev_sign = None
    prev = None
    for c in islice(convergents(x, policy), count):
        # p_k q_{k-1} - p_{k-1} q_k = +-1 certifies gcd(p, q) = 1
        if prev is not None and abs(c.p * prev.q - prev.p * c.q) != 1:
            raise PropertyFailure(f"convergent {c.index} of {x.label} is not reduced")
        if prev is None and gcd(c.p, c.q) != 1:
            raise PropertyFailure(f"convergent {c.index} of {x.label} is not reduced")
        if prev is not None and c.q <= prev.q and c.index > 1:
            raise PropertyFailure(f"denominators of {x.label} stop growing at index {c.index}")
        gap = c.p - c.q * xb
        if compare_zero(abs(gap) * c.q - 1) is not Sign.NEGATIVE:
            raise PropertyFailure(f"convergent {c.index} of {x.label} misses |p - q x| < 1/q")
        sign = compare_zero(gap)
        if sign is Sign.AMBIGUOUS:
            raise PropertyFailure(f"sign of p - q x undecided at index {c.index} for {x.label}")
        if prev_sign is not None and sign is prev_sign:
            raise PropertyFailure(f"convergents of {x.label} do not alternate at index {c.index}")
        prev_sign, prev = sign, c


def check_convergents(caps: Caps) -> None:
    # certifying k quotients needs about twice log2(q_k) bits: 2.6k for sqrt 2, 3.5k for log2/log10
    for x, per_quotient in ((RefinableReal.sqrt(2), 2.6), (RefinableReal.log_ratio(2, 10), 3.5)):
        bits = int(caps.convergents * per_quotient) + 512
        _check_convergent_sequence(x, caps.convergents, PrecisionPolicy(initial_bits=bits, max_bits=bits))


def _brute_force(problem: ReductionProblem, w_cap: int, bits: int):
    """Every ``(m, w)`` with ``0 < |m tau - n + mu| < A B^-w`` certainly holding, w <= w_cap.

    ``w`` is the largest such exponent; a float estimate is confirmed with intervals.
    """
    tau, mu, A = problem.tau(bits), problem.mu(bits), problem.A(bits)
    a_mid, log_b = float(A.mid), math.log(problem.B)
    out = []
    for m in range(problem.M + 1):
        x = m * tau + mu
        form = abs(x - round(x.mid))
        if form.lo <= 0 or form.hi >= A.lo:
            continue
        guess = min(w_cap, int(math.log(a_mid / float(form.mid)) / log_b) + 1)
        for w in range(guess, -1, -1):
            if form.hi < (A / problem.B ** w).lo:
                out.append((m, w))
                break
    return out


def check_reduction(caps: Caps, seed: int = 20240611) -> None:
    rng = random.Random(seed)
    taus = [RefinableReal.sqrt(2), RefinableReal.sqrt(3), RefinableReal.log_ratio(2, 3)]
    policy = PrecisionPolicy(initial_bits=256, max_bits=4096)
    for i in range(caps.reduction_instances):
        tau = rng.choice(taus)
        mu = Fraction(rng.randint(-500, 500), rng.randint(1, 97))
        A = Fraction(rng.randint(1, 20), rng.randint(1, 4))
        B = rng.choice((2, 3, 10))
        M = rng.randint(1, 1000)
        problem = ReductionProblem(tau, mu, A, B, M)
        out = apply_reduction(problem, policy)
        found = _brute_force(problem, 64, 512)
        label = f"instance {i} (tau={tau.label}, mu={mu}, A={A}, B={B}, M={M})"
        if isinstance(out, BoundOnW):
            bad = [(m, w) for m, w in found if w > out.w_max]
            if bad:
                raise PropertyFailure(f"{label}: w={bad[0][1]} at m={bad[0][0]} exceeds bound {out.w_max}")
        elif isinstance(out, Candidate):
            bad = [(m, w) for m, w in found if w > out.w_threshold and m != out.m0]
            if bad:
                raise PropertyFailure(f"{label}: survivor m={bad[0][0]} is not the candidate {out.m0}")
        else:
            bad = [(m, w) for m, w in found if w > out.w_threshold]
            if bad:
                raise PropertyFailure(f"{label}: w={bad[0][1]} exceeds threshold {out.w_threshold}")


def check_g2(caps: Caps) -> None:
    for b in range(2, caps.g2_b_max + 1):
        for mode in Mode:
            for bs, cs in SIGN_PAIRS:
                spec = EquationSpec(b, 2, bs, cs, mode)
                rep = solve(spec)
                if any(s.n != 0 for s in rep.solutions):
                    raise PropertyFailure(f"{spec.label}: solution with n >= 1")
                if b <= 12:
                    box = SearchBox((1, 8), (1, 8), (1, 8), (1, 1), (1, 1))
                    if oracle_enumerate(spec, box):
                        raise PropertyFailure(f"{spec.label}: naive search finds n >= 1")


PROPERTIES: List[tuple] = [
    ("oracle equivalence", check_oracle_equivalence),
    ("family correctness", check_families),
    ("convergent invariants", check_convergents),
    ("reduction soundness", check_reduction),
    ("g=2 parity lemma", check_g2),
]


@contextmanager
def injected_fault(name: Optional[str]):
    """Temporarily corrupt a helper so the checks can prove they catch it."""
    if name is None:
        yield
        return
    if name != "repunit":
        raise ValueError(f"unknown fault {name!r}")
    original = enumeration.repunit

    def corrupted(g: int, m: int) -> int:
        return original(g, m) + (1 if m == 3 else 0)

    enumeration.repunit = corrupted
    try:
        yield
    finally:
        enumeration.repunit = original


def run(quick: bool = False, inject_fault: Optional[str] = None, policy: Optional[PrecisionPolicy] = None,
        out: Callable[[str], None] = print) -> int:
    """Run every property; returns 0 iff all pass, else stops at the first failure."""
    caps = QUICK if quick else Caps()
    with injected_fault(inject_fault):
        for name, fn in PROPERTIES:
            start = time.perf_counter()
            try:
                fn(caps)
            except PropertyFailure as exc:
                out(f"FAIL {name}: {exc}")
                return 1
            out(f"PASS {name} ({time.perf_counter() - start:.1f} s)")
    return 0
