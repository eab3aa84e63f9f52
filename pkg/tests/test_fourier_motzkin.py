from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from statemac.fourier_motzkin import Inequality, eliminate, fm_equivalence_check, projected_system


@pytest.mark.parametrize("abcd", [(1, 2, 3, 0.5), (1, 1, 1, 0.25), (2, 0.5, 1.75, 2)])
def test_equivalence_examples(abcd):
    assert fm_equivalence_check(*abcd, grid_step=0.05)


def test_zero_d_is_skipped():
    assert fm_equivalence_check(1, 1, 1, 0)


def test_rejects_negative():
    with pytest.raises(ValueError):
        fm_equivalence_check(-1, 1, 1, 1)


def test_symbolic_projection_is_the_three_inequality_slice():
    rows = projected_system(1, 2, 3, Fraction(1, 2))
    got = {(r.coef, r.rhs) for r in rows}
    want = {
        ((("R1", Fraction(1)),), Fraction(1)),
        ((("R1", Fraction(1)),), Fraction(2)),
        ((("R1", Fraction(1)), ("Rc", Fraction(1))), Fraction(3)),
        ((("R1", Fraction(-1)),), Fraction(0)),
        ((("Rc", Fraction(-1)),), Fraction(0)),
    }
    assert got == want
    assert all("Rc2" not in dict(r.coef) for r in rows)


def test_negative_d_leaves_an_infeasible_row():
    rows = projected_system(1, 1, 1, -1)
    assert any(not r.coef and r.rhs < 0 for r in rows)


def test_eliminate_simple_pair():
    # x <= 1 and -x + y <= 0 give y <= 1
    rows = eliminate([Inequality.make({"x": 1}, 1), Inequality.make({"x": -1, "y": 1}, 0)], "x")
    assert [(r.coef, r.rhs) for r in rows] == [((("y", Fraction(1)),), Fraction(1))]


quarter = st.integers(0, 8).map(lambda k: k / 4)


@given(quarter, quarter, quarter, st.integers(1, 8).map(lambda k: k / 4))
def test_equivalence_on_grid_points(a, b, c, d):
    assert fm_equivalence_check(a, b, c, d, grid_step=0.05)


@given(st.floats(0, 2), st.floats(0, 2), st.floats(0, 2), st.floats(0.01, 2))
def test_symbolic_projection_matches_direct_form(a, b, c, d):
    rows = projected_system(a, b, c, d)
    # any (rc, r1) obeys the projection iff it obeys the three-inequality slice
    for rc in (0, 0.3, 1.1):
        for r1 in (0, 0.4, 1.3):
            pt = {"Rc": rc, "R1": r1}
            direct = r1 <= min(a, b) + 1e-9 and rc + r1 <= c + 1e-9
            assert all(r.holds(pt) for r in rows) == direct
