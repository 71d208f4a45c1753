"""Command-line front end: solve, suite, reduce, bounds, verify, families."""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .bounds import Mode, bound_report
from .contfrac import RefinableReal
from .enumeration import D1_LE_D2, ORDERED, EquationSpec, detect_degenerate_families, detect_families
from .numerics import PrecisionPolicy, format_decimal, interval_log
from .reduction import FirstAboveSixM, ReductionProblem, RetryNext, apply_reduction
from .report import emit_report
from .solver import PAPER, PER_B, run_suite, solve

COMMANDS = ("solve", "suite", "reduce", "bounds", "verify", "families")
FORMATS = ("json", "csv", "text")
SIGNS = {"+": 1, "-": -1, "both": None}


@dataclass
class CliConfig:
    command: str
    b_values: List[int] = field(default_factory=list)
    g: int = 10
    modes: List[Mode] = field(default_factory=list)
    base_signs: Tuple[int, ...] = (1, -1)
    const_signs: Tuple[int, ...] = (1, -1)
    policy: PrecisionPolicy = field(default_factory=PrecisionPolicy)
    output_path: Optional[str] = None
    output_format: str = "text"
    strategy: object = field(default_factory=FirstAboveSixM)
    tie_rule: str = ORDERED
    pooling: str = PAPER
    workers: int = 1
    quick: bool = False
    inject_fault: Optional[str] = None
    tau: str = ""
    mu: str = ""
    A: str = ""
    B: str = ""
    M: int = 0
    verbose: bool = False


def parse_b_values(text: str) -> List[int]:
    """``"2..12"``, ``"2,3,5"`` or a mix such as ``"2..4,7"``."""
    out: List[int] = []
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)\.\.(\d+)", part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo > hi:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        elif re.fullmatch(r"-?\d+", part):
            out.append(int(part))
        else:
            raise ValueError(f"cannot parse b value {part!r}")
    if not out:
        raise ValueError("no b values given")
    return sorted(set(out))


def parse_real(text: str) -> RefinableReal:
    """``p/q``, ``sqrt(x)``, ``log(x)/log(y)`` or ``c/log(x)`` with rational x, y, c."""
    s = text.replace(" ", "")
    rat = r"-?\d+(?:/\d+)?"
    m = re.fullmatch(rf"sqrt\(({rat})\)", s)
    if m:
        return RefinableReal.sqrt(Fraction(m.group(1)))
    m = re.fullmatch(rf"log\(({rat})\)/log\(({rat})\)", s)
    if m:
        return RefinableReal.log_ratio(Fraction(m.group(1)), Fraction(m.group(2)))
    m = re.fullmatch(rf"(\d+)/log\(({rat})\)", s)
    if m:
        x = Fraction(m.group(2))
        ln = RefinableReal(lambda bits: interval_log(x, bits), label=f"log({x})")
        return RefinableReal.quotient(int(m.group(1)), ln, label=s)
    if re.fullmatch(rat, s):
        return RefinableReal.from_rational(Fraction(s))
    raise ValueError(f"cannot parse real {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="repdigits", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, b_default=None, mode_default="sum"):
        sp.add_argument("--b", default=b_default, required=b_default is None,
                        help="base b: an integer, a range a..b or a comma list")
        sp.add_argument("--g", type=int, default=10, help="repdigit base g (default 10)")
        sp.add_argument("--mode", default=mode_default, help="sum, diff or sum,diff")

    def output(sp):
        sp.add_argument("--out", dest="output_path", help="write the report to this file")
        sp.add_argument("--format", choices=FORMATS, default="text")

    def solving(sp):
        sp.add_argument("--strategy", choices=("first", "retry"), default="first",
                        help="convergent choice: first q > 6M, or retry the next ones when epsilon <= 0")
        sp.add_argument("--retries", type=int, default=3)
        sp.add_argument("--tie-rule", choices=(ORDERED, D1_LE_D2), default=ORDERED)

    s = sub.add_parser("solve", help="solve the equations for one or more b")
    common(s)
    s.add_argument("--base-sign", choices=tuple(SIGNS), default="both")
    s.add_argument("--const-sign", choices=tuple(SIGNS), default="both")
    solving(s)
    output(s)

    s = sub.add_parser("suite", help="tables over a range of b")
    common(s, b_default="2..12", mode_default="sum,diff")
    s.add_argument("--pooling", choices=(PAPER, PER_B), default=PAPER)
    s.add_argument("--workers", type=int, default=1)
    solving(s)
    output(s)

    s = sub.add_parser("reduce", help="apply the reduction lemma to |m tau - n + mu| < A B^-w")
    s.add_argument("--tau", required=True)
    s.add_argument("--mu", required=True)
    s.add_argument("--A", required=True)
    s.add_argument("--B", required=True)
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--strategy", choices=("first", "retry"), default="first")
    s.add_argument("--retries", type=int, default=3)

    s = sub.add_parser("bounds", help="theorem-level bounds for one equation")
    common(s)
    output(s)

    s = sub.add_parser("families", help="infinite families matching the hypotheses")
    common(s)

    s = sub.add_parser("verify", help="run the property checks")
    s.add_argument("--quick", action="store_true", help="smaller subset, well under a minute")
    s.add_argument("--inject-fault", choices=("repunit",), help="mutation check: corrupt a helper first")
    return p


def _signs(choice: str) -> Tuple[int, ...]:
    s = SIGNS[choice]
    return (1, -1) if s is None else (s,)


def parse_args(argv: Optional[Sequence[str]] = None) -> CliConfig:
    """Validated configuration; usage errors exit with status 2."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = CliConfig(command=ns.command, policy=PrecisionPolicy.from_env(), verbose=ns.verbose)
    try:
        if ns.command == "reduce":
            cfg.tau, cfg.mu, cfg.A, cfg.B, cfg.M = ns.tau, ns.mu, ns.A, ns.B, ns.M
            if ns.M < 1:
                raise ValueError("--M must be >= 1")
            if Fraction(ns.B) <= 1:
                raise ValueError("--B must exceed 1")
            cfg.strategy = RetryNext(ns.retries) if ns.strategy == "retry" else FirstAboveSixM()
            return cfg
        if ns.command == "verify":
            cfg.quick, cfg.inject_fault = ns.quick, ns.inject_fault
            return cfg
        cfg.b_values = parse_b_values(ns.b)
        if min(cfg.b_values) < 2:
            raise ValueError("b must be >= 2")
        if ns.g < 2:
            raise ValueError("g must be >= 2")
        cfg.g = ns.g
        cfg.modes = [Mode(m.strip()) for m in ns.mode.split(",") if m.strip()]
        if not cfg.modes:
            raise ValueError("no mode given")
        if hasattr(ns, "format"):
            cfg.output_format = ns.format
            cfg.output_path = ns.output_path
        if hasattr(ns, "strategy"):
            cfg.strategy = RetryNext(ns.retries) if ns.strategy == "retry" else FirstAboveSixM()
            cfg.tie_rule = ns.tie_rule
        if ns.command == "solve":
            cfg.base_signs = _signs(ns.base_sign)
            cfg.const_signs = _signs(ns.const_sign)
        if ns.command == "suite":
            cfg.pooling = ns.pooling
            if ns.workers < 1:
                raise ValueError("--workers must be >= 1")
            cfg.workers = ns.workers
    except ValueError as exc:
        parser.error(str(exc))
    return cfg


def _write(cfg: CliConfig, data: bytes) -> None:
    if cfg.output_path:
        with open(cfg.output_path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def cmd_solve(cfg: CliConfig) -> int:
    reports = []
    for b in cfg.b_values:
        for mode in cfg.modes:
            for bs in cfg.base_signs:
                for cs in cfg.const_signs:
                    spec = EquationSpec(b, cfg.g, bs, cs, mode)
                    reports.append(solve(spec, cfg.policy, cfg.strategy, tie_rule=cfg.tie_rule))
    _write(cfg, emit_report(reports if len(reports) > 1 else reports[0], cfg.output_format))
    return 0


def cmd_suite(cfg: CliConfig) -> int:
    suites = [run_suite(cfg.b_values, cfg.g, mode, cfg.policy, cfg.strategy, cfg.pooling,
                        cfg.workers, cfg.tie_rule) for mode in cfg.modes]
    _write(cfg, emit_report(suites if len(suites) > 1 else suites[0], cfg.output_format))
    return 1 if any(s.errors for s in suites) else 0


def cmd_reduce(cfg: CliConfig) -> int:
    problem = ReductionProblem(parse_real(cfg.tau), parse_real(cfg.mu), parse_real(cfg.A), Fraction(cfg.B), cfg.M)
    out = apply_reduction(problem, cfg.policy, cfg.strategy)
    print(f"outcome: {out.kind}")
    print(f"convergent: q = {out.q_used.q} (index {out.q_used.index})")
    if out.epsilon is not None:
        print(f"epsilon in [{format_decimal(out.epsilon.lo, 10, 'down')}, {format_decimal(out.epsilon.hi, 10, 'up')}]")
    if out.kind == "BoundOnW":
        print(f"w <= {out.w_max}")
    elif out.kind == "Candidate":
        print(f"w <= {out.w_threshold} unless m = {out.m0}")
    else:
        print(f"w <= {out.w_threshold} (m0 = {out.m0} > M)")
    return 0


def cmd_bounds(cfg: CliConfig) -> int:
    items = []
    for b in cfg.b_values:
        for mode in cfg.modes:
            r = bound_report(b, cfg.g, mode)
            items.append({"b": str(b), "g": str(cfg.g), "mode": mode.value, **r.to_dict()})
    if cfg.output_format == "json":
        data = (json.dumps({"schema_version": 1, "bounds": items}, indent=2, sort_keys=True) + "\n").encode()
    elif cfg.output_format == "csv":
        keys = list(items[0])
        lines = [",".join(keys)] + [",".join(str(it[k]) for k in keys) for it in items]
        data = ("\n".join(lines) + "\n").encode()
    else:
        data = "".join(" ".join(f"{k}={v}" for k, v in it.items()) + "\n" for it in items).encode()
    _write(cfg, data)
    return 0


def cmd_families(cfg: CliConfig) -> int:
    found = False
    for b in cfg.b_values:
        for mode in cfg.modes:
            for bs in (1, -1):
                for cs in (1, -1):
                    spec = EquationSpec(b, cfg.g, bs, cs, mode)
                    for f in detect_families(spec) + detect_degenerate_families(spec):
                        found = True
                        note = "excluded" if f.excluded else "counted in the box"
                        print(f"{spec.label}: kind {f.kind} {f.pattern} ({note})")
    if not found:
        print("no infinite families match")
    return 0


def cmd_verify(cfg: CliConfig) -> int:
    from . import verify
    return verify.run(quick=cfg.quick, inject_fault=cfg.inject_fault, policy=cfg.policy)


HANDLERS = {
    "solve": cmd_solve,
    "suite": cmd_suite,
    "reduce": cmd_reduce,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "families": cmd_families,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    cfg = parse_args(argv)
    logging.basicConfig(level=logging.INFO if cfg.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    rc = HANDLERS[cfg.command](cfg)
    logging.getLogger(__name__).info("%s finished in %.1f s", cfg.command, time.perf_counter() - start)
    return rc


if __name__ == "__main__":
    sys.exit(main())
