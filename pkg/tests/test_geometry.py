import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from statemac.geometry import (
    RateConstraints,
    RatePair,
    RegionBoundary,
    boundary_from_constraints,
    constraint_polygon,
    dominates,
    max_abs_gap,
    rc_grid,
    union_upper_boundary,
    upper_concave_envelope,
)

INF = math.inf


def as_tuples(vs):
    return [(v.rc, v.r1) for v in vs]


# --- constraint_polygon -----------------------------------------------------

@pytest.mark.parametrize("c, expected", [
    ((1, 1, 1), [(0, 0), (0, 1), (1, 0)]),
    ((0.5, 2, 3), [(0, 0), (0, 0.5), (2.5, 0.5), (3, 0)]),
    ((1, 1, 0.5), [(0, 0), (0, 0.5), (0.5, 0)]),
])
def test_polygon_vertices(c, expected):
    assert as_tuples(constraint_polygon(RateConstraints(*c))) == pytest.approx(expected)


def test_polygon_degenerate():
    assert as_tuples(constraint_polygon(RateConstraints(0, 1, 0))) == [(0, 0)]
    assert as_tuples(constraint_polygon(RateConstraints(0, 1, 2))) == [(0, 0), (2, 0)]
    assert as_tuples(constraint_polygon(RateConstraints(1, INF, 1))) == [(0, 0), (0, 1), (1, 0)]


def test_polygon_needs_finite_sum():
    with pytest.raises(ValueError):
        constraint_polygon(RateConstraints(1, 1, INF))


def test_rate_types_validate():
    with pytest.raises(ValueError):
        RatePair(-0.1, 0)
    with pytest.raises(ValueError):
        RatePair(0, math.nan)
    with pytest.raises(ValueError):
        RateConstraints(-1, 0, 0)
    with pytest.raises(ValueError):
        RegionBoundary([0, 0], [1, 1])


rates = st.floats(0, 10, allow_nan=False, allow_infinity=False)


@given(rates, rates, rates)
def test_polygon_vertices_satisfy_constraints(a, b, s):
    c = RateConstraints(a, b, s)
    for v in constraint_polygon(c):
        assert v.rc >= 0 and v.r1 >= 0
        assert v.r1 <= min(a, b) + 1e-12
        assert v.rc + v.r1 <= s + 1e-12


# --- union_upper_boundary ---------------------------------------------------

def test_union_examples():
    polys = [constraint_polygon(RateConstraints(1, INF, 1)), constraint_polygon(RateConstraints(0.5, INF, 3))]
    b = union_upper_boundary(polys, [0.0, 0.75, 2.0, 3.5])
    assert b.value_at(0.0) == pytest.approx(1.0)
    assert b.value_at(0.75) == pytest.approx(0.5)
    assert b.value_at(2.0) == pytest.approx(0.5)
    assert math.isnan(b.value_at(3.5))


def test_union_of_nothing_is_empty():
    b = union_upper_boundary([], [0.0, 1.0])
    assert b.is_empty


def test_argmax_prefers_first_tuple():
    cs = [RateConstraints(1, 1, 2), RateConstraints(1, 1, 2), RateConstraints(0.5, 1, 3)]
    b = boundary_from_constraints(cs, [0.0, 1.0, 2.5])
    assert list(b.argmax) == [0, 0, 2]


caps = st.lists(st.tuples(rates, rates, rates), min_size=1, max_size=12)


@given(caps)
def test_union_is_non_increasing(cs):
    cons = [RateConstraints(*c) for c in cs]
    grid = rc_grid(max(c.sum_c for c in cons), 51)
    b = boundary_from_constraints(cons, grid)
    vals = b.r1_max[b.nonempty]
    assert np.all(np.diff(vals) <= 1e-12)
    # the union is reached by the per-slice maxima
    for c in cons:
        for rc, r1 in zip(grid, b.r1_max):
            if rc <= c.sum_c:
                assert r1 >= min(c.r1_cap, c.sum_c - rc) - 1e-12


# --- envelope -----------------------------------------------------------------

def test_envelope_chord():
    b = RegionBoundary([0.0, 1.0, 2.0], [1.0, 0.2, 0.0])
    assert upper_concave_envelope(b).value_at(1.0) == pytest.approx(0.5)


def test_envelope_keeps_concave_and_single_point():
    b = RegionBoundary([0.0, 1.0, 2.0], [1.0, 0.8, 0.0])
    assert np.array_equal(upper_concave_envelope(b).r1_max, b.r1_max)
    one = RegionBoundary([0.0], [0.7])
    assert np.array_equal(upper_concave_envelope(one).r1_max, one.r1_max)


@given(caps)
def test_envelope_idempotent_and_majorant(cs):
    cons = [RateConstraints(*c) for c in cs]
    b = boundary_from_constraints(cons, rc_grid(max(c.sum_c for c in cons), 41))
    e = upper_concave_envelope(b)
    m = b.nonempty
    assert np.array_equal(m, e.nonempty)
    assert np.all(e.r1_max[m] >= b.r1_max[m] - 1e-12)
    e2 = upper_concave_envelope(e)
    assert np.allclose(e2.r1_max[m], e.r1_max[m], atol=1e-12)
    # concave: second differences are non-positive on an even grid
    if m.sum() >= 3:
        assert np.all(np.diff(e.r1_max[m], 2) <= 1e-9)


# --- dominates ------------------------------------------------------------------

GRID = np.linspace(0, 2, 11)
BASE = RegionBoundary(GRID, np.clip(1.5 - GRID, 0, 1))


def shifted(d):
    return RegionBoundary(GRID, BASE.r1_max + d)


def test_dominates_examples():
    assert dominates(BASE, BASE, 0.0)
    assert not dominates(shifted(-0.1), BASE, 0.05)
    assert dominates(shifted(0.1), BASE, 0.0)


def test_dominates_grid_mismatch():
    with pytest.raises(ValueError):
        dominates(BASE, RegionBoundary(np.linspace(0, 1, 11), BASE.r1_max))


def test_dominates_empty_cells():
    inner = RegionBoundary([0.0, 1.0], [1.0, 0.01])
    outer = RegionBoundary([0.0, 1.0], [1.0, math.nan])
    assert not dominates(outer, inner, 0.0)
    assert dominates(outer, inner, 0.02)
    assert max_abs_gap(outer, inner) == pytest.approx(0.01)


frontiers = st.lists(st.floats(0, 3, allow_nan=False), min_size=11, max_size=11).map(
    lambda v: RegionBoundary(GRID, sorted(v, reverse=True)))


@given(frontiers, frontiers, frontiers)
def test_dominates_transitive(A, B, C):
    if dominates(A, B) and dominates(B, C):
        assert dominates(A, C)


@given(frontiers)
def test_dominates_reflexive(A):
    assert dominates(A, A)
