from fractions import Fraction

import pytest

from repdigits.bounds import Mode
from repdigits.enumeration import EquationSpec, SolutionTuple, check_solution, enumerate_box, oracle_enumerate
from repdigits.solver import (
    RationalTau,
    SolverReport,
    direct_scan,
    multiplicative_dependence,
    power_relation,
    solve,
    step1_gap,
)

SIGNS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]


@pytest.mark.parametrize(
    "b, g, expected",
    [(10, 10, (10, 1, 1)), (4, 8, (2, 2, 3)), (2, 10, None), (9, 27, (3, 2, 3)), (6, 10, None)],
)
def test_multiplicative_dependence(b, g, expected):
    assert multiplicative_dependence(b, g) == expected


def test_power_relation_independent_bases():
    # (5/2) 2^u = 10^v only at (u, v) = (2, 1)
    rel = power_relation(Fraction(5, 2), Fraction(1), 2, 10)
    assert rel is not None and not rel.infinite
    assert rel.first() == (2, 1)
    assert power_relation(Fraction(3), Fraction(1), 2, 10) is None


def test_power_relation_dependent_bases_is_a_line():
    rel = power_relation(Fraction(1), Fraction(2), 4, 8)
    assert rel.infinite
    u, v = rel.first(0, 0)
    assert 4 ** u == 2 * 8 ** v


@pytest.mark.parametrize("b", [2, 3, 7, 31, 200])
def test_g2_has_only_n0(b):
    for mode in Mode:
        for bs, cs in SIGNS:
            rep = solve(EquationSpec(b, 2, bs, cs, mode))
            assert rep.method == "g2"
            assert all(s.n == 0 for s in rep.solutions)


def test_rational_tau_routes_to_direct_scan():
    spec = EquationSpec(10, 10, -1, 1, Mode.SUM)
    with pytest.raises(RationalTau):
        step1_gap(spec)
    gap, n_cap, _, _ = direct_scan(spec)
    assert gap >= 2 and n_cap >= 3


def _small_case_complete(spec: EquationSpec):
    rep = solve(spec)
    for s in rep.solutions:
        assert check_solution(spec, s)
        assert rep.final_box.contains(s)
    # no solution hides just outside the certified box
    big = rep.final_box.inflate(2)
    big = type(big)((0, min(big.n_range[1], 14)), (1, 8), (1, 8), big.d1_range, big.d2_range)
    found = oracle_enumerate(spec, big, rep.families)
    assert all(s in rep.solutions for s in found if rep.final_box.contains(s))
    assert all(rep.final_box.contains(s) or any(f.contains(s) for f in rep.families) for s in found)


@pytest.mark.parametrize("b, g", [(2, 3), (3, 5), (5, 7), (3, 10)])
def test_solve_complete_on_small_grids(b, g):
    for mode in Mode:
        for bs, cs in SIGNS:
            _small_case_complete(EquationSpec(b, g, bs, cs, mode))


def test_new_family_for_b4_g8():
    rep = solve(EquationSpec(4, 8, -1, -1, Mode.SUM))
    patterns = {f.pattern for f in rep.families if f.kind == "D"}
    assert "(5,2,2t,2t+1,3t)" in patterns
    fam = next(f for f in rep.families if f.pattern == "(5,2,2t,2t+1,3t)")
    spec = rep.spec
    assert all(check_solution(spec, fam.member(t)) for t in range(1, 30))
    assert not any(fam.contains(s) for s in rep.solutions)


def test_family_c_excluded_at_b10():
    rep = solve(EquationSpec(10, 10, -1, -1, Mode.SUM))
    assert any(f.kind == "C" for f in rep.families)
    assert all(not (s.d1 == 1 and s.d2 == 8 and s.m == s.l + 1 and s.l == s.n) for s in rep.solutions)


def test_known_b2_solution_and_bounds():
    rep = solve(EquationSpec(2, 10, -1, -1, Mode.SUM))
    assert SolutionTuple(3, 2, 2, 3, 8) in rep.solutions
    assert rep.step1_gap_max <= 40
    assert rep.final_box.n_range[1] >= 8


def test_report_round_trip():
    rep = solve(EquationSpec(3, 10, 1, -1, Mode.DIFF))
    assert SolverReport.from_dict(rep.to_dict()) == rep


def test_diff_zero_lhs_family_reported():
    rep = solve(EquationSpec(2, 10, -1, -1, Mode.DIFF))
    assert any(f.kind == "Z" for f in rep.families)
    zero = [s for s in rep.solutions if s.n == 0 and s.d1 == s.d2 and s.l == s.m]
    assert zero and all(s.l <= 2 for s in zero)
