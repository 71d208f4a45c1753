"""Published reference values for g = 10, used to flag differences in suite output."""

from __future__ import annotations

from typing import Dict, List, Tuple

from .bounds import Mode
from .enumeration import EquationSpec, SolutionTuple, check_solution

B_COLUMNS = (2, 3, 4, 5, 6, 7, 8, 9, 11, 12)

SUM_ROWS: Dict[str, Tuple[int, ...]] = {
    "m-l<=": (34, 35, 35, 36, 38, 36, 35, 36, 37, 38),
    "n-2<=": (119, 77, 61, 52, 49, 45, 40, 38, 36, 33),
    "n_b": (121, 79, 63, 54, 51, 47, 42, 40, 38, 35),
    "ml_b": (49, 51, 52, 52, 55, 55, 53, 53, 55, 48),
    "N=": (66, 37, 21, 13, 3, 6, 10, 4, 1, 2),
    "l<=": (2, 2, 2, 2, 1, 2, 2, 1, 2, 2),
    "m<=": (3, 2, 3, 3, 2, 2, 3, 2, 3, 3),
    "n<=": (8, 3, 3, 3, 1, 1, 2, 1, 1, 1),
}

DIFF_ROWS: Dict[str, Tuple[int, ...]] = {
    "l-m-2<=": (34, 33, 34, 34, 34, 35, 35, 33, 37, 34),
    "N0": (40, 27, 24, 20, 16, 12, 9, 13, 18, 4),
    "N=": (68, 29, 16, 4, 4, 7, 7, 5, 9, 0),
    "l<=": (4, 3, 3, 2, 2, 2, 2, 3, 3, 3),
    "m<=": (2, 2, 2, 1, 1, 2, 2, 2, 3, 2),
    "n<=": (10, 4, 4, 1, 1, 1, 1, 2, 1, 0),
}

DIFF_GAP_OVERALL = 39
DIFF_N_OVERALL = 127
SUM_TOTAL_N_GE_1 = 163
DIFF_TOTAL_N_GE_1 = 160

# b = 10 column (rational log ratio)
SUM_B10 = {"gap": 4, "n": 2, "solutions": 34}
DIFF_B10 = {"gap": 5, "n": 4, "n_eq_0": 5, "n_eq_1": 11}

# n = 0 solutions other than (d1, d2, 1, 1, 0) in sum mode
SUM_N0_EXTRAS = {11: 1, 12: 4}

# displayed representations for b = 2: (base_sign, const_sign, tuple)
SUM_REPRESENTATIONS = [
    (-1, -1, SolutionTuple(3, 2, 2, 3, 8)),
    (-1, 1, SolutionTuple(9, 8, 1, 1, 4)),
    (1, 1, SolutionTuple(9, 8, 1, 2, 5)),
    (1, -1, SolutionTuple(1, 2, 2, 2, 3)),
]
DIFF_REPRESENTATIONS = [
    (-1, -1, SolutionTuple(5, 4, 3, 2, 9)),
    (-1, 1, SolutionTuple(6, 1, 2, 1, 6)),
    (1, 1, SolutionTuple(7, 8, 3, 1, 8)),
    (1, -1, SolutionTuple(7, 6, 2, 2, 2)),
]

# tolerance for reduction-dependent table cells
TABLE_TOLERANCE = 2


def reference_rows(mode: Mode) -> Dict[str, Tuple[int, ...]]:
    return SUM_ROWS if Mode(mode) is Mode.SUM else DIFF_ROWS


def check_representations(mode: Mode, solutions_by_sign) -> List[Tuple[SolutionTuple, bool, str]]:
    """Each displayed representation: (tuple, found, note).

    ``solutions_by_sign`` maps ``(base_sign, const_sign)`` to the b = 2
    solution list.  A representation that does not satisfy its equation is
    matched against the solutions that share its left-hand side.
    """
    mode = Mode(mode)
    reps = SUM_REPRESENTATIONS if mode is Mode.SUM else DIFF_REPRESENTATIONS
    out = []
    for bs, cs, t in reps:
        spec = EquationSpec(2, 10, bs, cs, mode)
        sols = solutions_by_sign.get((bs, cs), [])
        if check_solution(spec, t):
            out.append((t, t in sols, ""))
            continue
        near = [s for s in sols if s.n == t.n and (s.d1, s.d2) == (t.d1, t.d2)]
        note = (f"printed tuple {tuple(t)} does not satisfy its equation"
                + (f"; matched by {tuple(near[0])}" if near else "; no nearby solution"))
        out.append((near[0] if near else t, bool(near), note))
    return out
