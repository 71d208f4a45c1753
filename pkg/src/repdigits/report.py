"""Byte-stable JSON, CSV and text rendering of solver reports."""

from __future__ import annotations

import json
from typing import Dict, Iterable, List, Optional, Sequence

from .bounds import Mode
from .reference import (
    B_COLUMNS,
    DIFF_B10,
    DIFF_GAP_OVERALL,
    DIFF_N_OVERALL,
    DIFF_TOTAL_N_GE_1,
    SUM_B10,
    SUM_N0_EXTRAS,
    SUM_TOTAL_N_GE_1,
    TABLE_TOLERANCE,
    check_representations,
    reference_rows,
)
from .solver import SolverReport, SuiteResult

SCHEMA_VERSION = 1

SUM_ROW_ORDER = ("m-l<=", "n-2<=", "n_b", "ml_b", "N0", "N=", "l<=", "m<=", "n<=")
DIFF_ROW_ORDER = ("l-m-2<=", "n-1<=", "N0", "N=", "l<=", "m<=", "n<=")


def _dumps(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n").encode("ascii")


def report_json(report: SolverReport) -> bytes:
    d = report.to_dict()
    d["schema_version"] = SCHEMA_VERSION
    return _dumps(d)


def parse_report_json(data: bytes) -> SolverReport:
    d = json.loads(data)
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {d.get('schema_version')!r}")
    return SolverReport.from_dict(d)


def table_rows(suite: SuiteResult) -> Dict[str, List[int]]:
    """The per-b rows of a suite, keyed by row label."""
    cols = suite.columns()
    cells = {b: suite.cell(b) for b in cols}
    if suite.mode is Mode.SUM:
        spec = {
            "m-l<=": "step1_w", "n-2<=": "step2_w", "n_b": "n_cap", "ml_b": "ml_cap",
            "N0": "n_eq_0", "N=": "n_ge_1", "l<=": "max_l", "m<=": "max_m", "n<=": "max_n",
        }
        order = SUM_ROW_ORDER
    else:
        spec = {
            "l-m-2<=": "step1_w", "n-1<=": "step2_w", "N0": "n_eq_0", "N=": "n_ge_1",
            "l<=": "max_l", "m<=": "max_m", "n<=": "max_n",
        }
        order = DIFF_ROW_ORDER
    return {row: [cells[b][spec[row]] for b in cols] for row in order}


def suite_totals(suite: SuiteResult) -> Dict[str, int]:
    cols = suite.columns()
    cells = {b: suite.cell(b) for b in cols}
    irrational = [b for b in cols if not cells[b]["rational"]]
    rational = [b for b in cols if cells[b]["rational"]]
    out = {
        "n_ge_1_irrational_columns": sum(cells[b]["n_ge_1"] for b in irrational),
        "n_ge_1_rational_columns": sum(cells[b]["n_ge_1"] for b in rational),
        "n_ge_1_all": sum(cells[b]["n_ge_1"] for b in cols),
        "gap_max_overall": max((cells[b]["gap_max"] for b in irrational), default=0),
        "n_cap_overall": max((cells[b]["n_cap"] for b in irrational), default=0),
    }
    return out


def _row_flags(suite: SuiteResult, rows: Dict[str, List[int]]) -> List[str]:
    flags = []
    cols = suite.columns()
    for label, ref in reference_rows(suite.mode).items():
        if label not in rows:
            continue
        for b, want in zip(B_COLUMNS, ref):
            if b not in cols:
                continue
            got = rows[label][cols.index(b)]
            if got != want:
                tol = "within" if abs(got - want) <= TABLE_TOLERANCE else "OUTSIDE"
                flags.append(f"row {label} b={b}: computed {got}, reference {want} "
                             f"(deviation {got - want:+d}, {tol} tolerance {TABLE_TOLERANCE})")
    return flags


def reference_flags(suite: SuiteResult) -> List[str]:
    """Differences between a g = 10 suite and the published reference values."""
    if suite.g != 10:
        return []
    rows = table_rows(suite)
    flags = _row_flags(suite, rows)
    totals = suite_totals(suite)
    cols = suite.columns()
    if suite.mode is Mode.SUM:
        flags.append(f"total n>=1 over irrational columns: {totals['n_ge_1_irrational_columns']} "
                     f"(reference total {SUM_TOTAL_N_GE_1}); including b=10: {totals['n_ge_1_all']}")
        for b, want in SUM_N0_EXTRAS.items():
            if b in cols:
                got = sum(1 for r in suite.reports[b] for s in r.solutions if s.n == 0 and (s.l, s.m) != (1, 1))
                if got != want:
                    flags.append(f"n=0 solutions with (l,m) != (1,1) for b={b}: computed {got}, reference {want}")
        if 10 in cols:
            c = suite.cell(10)
            if c["gap_max"] != SUM_B10["gap"] or c["n_cap"] != SUM_B10["n"]:
                flags.append(f"b=10 direct scan: gap <= {c['gap_max']}, n <= {c['n_cap']} "
                             f"(reference gap <= {SUM_B10['gap']}, n <= {SUM_B10['n']})")
    else:
        flags.append(f"total n>=1: {totals['n_ge_1_irrational_columns']} + {totals['n_ge_1_rational_columns']}"
                     f" = {totals['n_ge_1_all']} (reference {DIFF_TOTAL_N_GE_1})")
        if totals["gap_max_overall"] != DIFF_GAP_OVERALL or totals["n_cap_overall"] != DIFF_N_OVERALL:
            flags.append(f"overall l-m <= {totals['gap_max_overall']}, n <= {totals['n_cap_overall']} "
                         f"(reference {DIFF_GAP_OVERALL}, {DIFF_N_OVERALL})")
        if 10 in cols:
            c = suite.cell(10)
            if c["gap_max"] != DIFF_B10["gap"] or c["n_cap"] != DIFF_B10["n"]:
                flags.append(f"b=10 direct scan: l-m <= {c['gap_max']}, n <= {c['n_cap']} "
                             f"(reference l-m <= {DIFF_B10['gap']}, n <= {DIFF_B10['n']})")
    if 2 in cols:
        by_sign = {(r.spec.base_sign, r.spec.const_sign): r.solutions for r in suite.reports[2]}
        for t, found, note in check_representations(suite.mode, by_sign):
            if note:
                flags.append(f"representation check: {note}")
            elif not found:
                flags.append(f"representation {tuple(t)} not among the solutions")
    return flags


def suite_csv(suite: SuiteResult) -> bytes:
    """Comma-separated table: header ``b,<columns>`` then one row per label."""
    rows = table_rows(suite)
    lines = ["b," + ",".join(str(b) for b in suite.columns())]
    lines += [label + "," + ",".join(str(v) for v in values) for label, values in rows.items()]
    return ("\n".join(lines) + "\n").encode("ascii")


def suite_dict(suite: SuiteResult, with_reports: bool = True) -> dict:
    d = {
        "schema_version": SCHEMA_VERSION,
        "g": str(suite.g),
        "mode": suite.mode.value,
        "pooling": suite.pooling,
        "columns": [str(b) for b in suite.columns()],
        "rows": {k: [str(v) for v in vals] for k, vals in table_rows(suite).items()},
        "totals": {k: str(v) for k, v in suite_totals(suite).items()},
        "errors": {str(b): e for b, e in suite.errors.items()},
        "flags": reference_flags(suite),
    }
    if with_reports:
        d["reports"] = [r.to_dict() for b in suite.columns() for r in suite.reports[b]]
    return d


def suite_json(suite: SuiteResult, with_reports: bool = True) -> bytes:
    return _dumps(suite_dict(suite, with_reports))


def report_text(report: SolverReport) -> str:
    c = report.counts
    lines = [
        report.spec.label,
        f"  method: {report.method}",
        f"  gap bound: {report.step1_gap_max} (step-1 w <= {report.step1_w})",
        f"  n bound: {report.step2_n_max} (step-2 w <= {report.step2_w})",
        f"  box: n <= {report.final_box.n_range[1]}, l, m <= {report.final_box.l_range[1]}",
        f"  solutions: {c['n_eq_0']} with n=0, {c['n_ge_1']} with n>=1; "
        f"max l={c['max_l']} m={c['max_m']} n={c['max_n']}",
    ]
    for s in report.solutions:
        lines.append(f"    {tuple(s)}")
    for f in report.flags:
        lines.append(f"  flag: {f}")
    return "\n".join(lines) + "\n"


def suite_text(suite: SuiteResult) -> str:
    rows = table_rows(suite)
    cols = suite.columns()
    width = max(len(k) for k in rows) + 1
    out = [f"{suite.mode.value} suite, g={suite.g}, pooling={suite.pooling}",
           "b".ljust(width) + "".join(f"{b:>5}" for b in cols)]
    for label, vals in rows.items():
        out.append(label.ljust(width) + "".join(f"{v:>5}" for v in vals))
    for k, v in suite_totals(suite).items():
        out.append(f"{k}: {v}")
    for b, e in suite.errors.items():
        out.append(f"error b={b}: {e}")
    for f in reference_flags(suite):
        out.append(f"flag: {f}")
    return "\n".join(out) + "\n"


def emit_report(obj, fmt: str) -> bytes:
    """Serialize a SolverReport, a SuiteResult or a list of them."""
    items = obj if isinstance(obj, (list, tuple)) else [obj]
    if fmt == "json":
        if len(items) == 1:
            x = items[0]
            return suite_json(x) if isinstance(x, SuiteResult) else report_json(x)
        parts = [suite_dict(x) if isinstance(x, SuiteResult) else dict(x.to_dict(), schema_version=SCHEMA_VERSION)
                 for x in items]
        return _dumps({"schema_version": SCHEMA_VERSION, "items": parts})
    if fmt == "csv":
        suites = [x for x in items if isinstance(x, SuiteResult)]
        if suites:
            return b"".join(suite_csv(s) for s in suites)
        lines = ["b,g,base_sign,const_sign,mode,d1,d2,l,m,n"]
        for r in items:
            s = r.spec
            for t in r.solutions:
                lines.append(f"{s.b},{s.g},{s.base_sign},{s.const_sign},{s.mode.value},"
                             f"{t.d1},{t.d2},{t.l},{t.m},{t.n}")
        return ("\n".join(lines) + "\n").encode("ascii")
    if fmt == "text":
        return "".join(suite_text(x) if isinstance(x, SuiteResult) else report_text(x)
                       for x in items).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")
