import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repdigits.bounds import Mode
from repdigits.enumeration import (
    D1_LE_D2,
    ORDERED,
    CapTooLarge,
    EquationSpec,
    FamilyDescriptor,
    SearchBox,
    SolutionTuple,
    check_solution,
    detect_degenerate_families,
    detect_families,
    enumerate_box,
    family_a,
    family_b,
    family_c,
    family_z,
    oracle_enumerate,
    repunit,
    solve_g2,
)

SIGNS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]


@pytest.mark.parametrize("b", range(2, 6))
@pytest.mark.parametrize("g", range(3, 9))
def test_fast_search_matches_naive_search(b, g):
    for mode in Mode:
        for bs, cs in SIGNS:
            spec = EquationSpec(b, g, bs, cs, mode)
            box = SearchBox((0, 20), (1, 6), (1, 6), (1, g - 1), (1, g - 1))
            assert enumerate_box(spec, box) == oracle_enumerate(spec, box)


def test_per_n_caps_respected_by_both():
    spec = EquationSpec(2, 10, -1, -1, Mode.DIFF)
    box = SearchBox((0, 3), (1, 5), (1, 5), (1, 9), (1, 9), ((0, 2), (1, 3), (2, 4), (3, 5)))
    fast = enumerate_box(spec, box)
    assert fast == oracle_enumerate(spec, box)
    assert all(max(s.l, s.m) <= box.cap_for(s.n) for s in fast)


def test_tie_rule():
    spec = EquationSpec(2, 10, -1, 1, Mode.SUM)
    box = SearchBox((0, 3), (1, 3), (1, 3), (1, 9), (1, 9))
    ordered = enumerate_box(spec, box, tie_rule=ORDERED)
    halved = enumerate_box(spec, box, tie_rule=D1_LE_D2)
    assert set(halved) <= set(ordered)
    assert all(s.d1 <= s.d2 for s in halved if s.l == s.m)
    assert halved == oracle_enumerate(spec, box, tie_rule=D1_LE_D2)


def test_oracle_budget():
    spec = EquationSpec(2, 10, 1, 1, Mode.SUM)
    with pytest.raises(CapTooLarge):
        oracle_enumerate(spec, SearchBox((0, 200), (1, 50), (1, 50), (1, 9), (1, 9)))


def test_repunit():
    assert repunit(10, 3) == 111
    assert repunit(2, 4) == 15
    with pytest.raises(ValueError):
        repunit(10, 0)


@given(st.integers(2, 30), st.integers(3, 16), st.integers(0, 30), st.integers(1, 15), st.integers(1, 15))
@settings(max_examples=300)
def test_found_tuples_are_solutions(b, g, n, l, m):
    # any tuple the search returns must check exactly
    spec = EquationSpec(b, g, 1, 1, Mode.SUM)
    box = SearchBox((n, n), (1, 4), (1, 4), (1, g - 1), (1, g - 1))
    for s in enumerate_box(spec, box):
        assert check_solution(spec, s)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_families_a_and_b(k):
    g = 2 ** k
    for t in range(1, 101):
        assert check_solution(EquationSpec(2, g, -1, 1, Mode.SUM), family_a(g, k).member(t))
        for d1 in range(1, g - 1):
            assert check_solution(EquationSpec(2, g, -1, -1, Mode.SUM), family_b(g, k, d1).member(t))


@pytest.mark.parametrize("g", range(3, 13))
def test_family_c(g):
    spec = EquationSpec(g, g, -1, -1, Mode.SUM)
    assert all(check_solution(spec, family_c(g).member(t)) for t in range(1, 101))


def test_family_z_and_detection():
    spec = EquationSpec(2, 10, -1, -1, Mode.DIFF)
    fams = detect_degenerate_families(spec)
    assert len(fams) == 9 and not any(f.excluded for f in fams)
    assert all(check_solution(spec, family_z(10, d).member(t)) for d in range(1, 10) for t in range(1, 20))


def test_detect_families():
    kinds = [f.kind for f in detect_families(EquationSpec(2, 8, -1, 1, Mode.SUM))]
    assert kinds == ["A"]
    assert len(detect_families(EquationSpec(2, 8, -1, -1, Mode.SUM))) == 6
    assert [f.kind for f in detect_families(EquationSpec(10, 10, -1, -1, Mode.SUM))] == ["C"]
    assert detect_families(EquationSpec(3, 10, -1, -1, Mode.SUM)) == []


def test_family_membership():
    f = family_c(10)
    assert f.pattern == "(1,8,t,t+1,t)"
    s = f.member(7)
    assert f.parameter_of(s) == 7
    assert not f.contains(SolutionTuple(1, 8, 3, 3, 3))
    assert FamilyDescriptor.from_dict(f.to_dict()) == f


def test_excluded_family_removed_from_enumeration():
    spec = EquationSpec(10, 10, -1, -1, Mode.SUM)
    box = SearchBox((0, 5), (1, 7), (1, 7), (1, 9), (1, 9))
    full = enumerate_box(spec, box)
    pruned = enumerate_box(spec, box, detect_families(spec))
    assert set(full) - set(pruned) == {family_c(10).member(t) for t in range(1, 6)}


def test_g2_parity():
    for b in range(2, 60):
        for mode in Mode:
            for bs, cs in SIGNS:
                assert all(s.n == 0 for s in solve_g2(EquationSpec(b, 2, bs, cs, mode)))


def test_search_box_round_trip():
    box = SearchBox((0, 5), (1, 4), (1, 4), (1, 9), (1, 9), ((0, 2), (5, 4)))
    assert SearchBox.from_dict(box.to_dict()) == box
    assert box.inflate(2).n_range == (0, 7)


def test_spec_validation():
    with pytest.raises(ValueError):
        EquationSpec(1, 10, 1, 1, Mode.SUM)
    with pytest.raises(ValueError):
        EquationSpec(2, 10, 0, 1, Mode.SUM)
