import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from statemac.gaussian import ChannelParams, InnerParams, OuterParams, binning_gain, inner_constraints, outer_constraints, q_tilde
from statemac.oracle import (
    CovMatrix,
    assemble_inner_covariance,
    assemble_outer_covariance,
    draw_inner_case,
    draw_outer_case,
    gaussian_cmi,
    gaussian_entropy_gap,
    oracle_inner,
    oracle_inner_raw,
    oracle_outer,
)

FIG2 = ChannelParams(2.5, 2.0, 1.5, 2.0)


def schur_var(cov, a, given):
    """Var(a | given) by direct Schur complement, independent of gaussian_cmi."""
    i = cov.index([a])
    g = cov.index(given)
    e = cov.entries
    return float((e[np.ix_(i, i)] - e[np.ix_(i, g)] @ np.linalg.pinv(e[np.ix_(g, g)]) @ e[np.ix_(g, i)])[0, 0])


# --- covariance assembly ----------------------------------------------------------

def test_effective_state_variance():
    ch = FIG2
    p = InnerParams(0.3, 0.4, -0.5, 0.7)
    cov = assemble_inner_covariance(ch, p)
    # U2 = V2 + alpha (1 + sigma_2s / Q) S with V2 independent of S
    assert cov.var("U2") - ch.p2 * p.xi == pytest.approx(p.alpha**2 * q_tilde(ch, p.rho), abs=1e-12)


def test_zero_power_u1():
    ch = ChannelParams(1.3, 2.0, 0.7, 1.0)
    cov = assemble_inner_covariance(ch, InnerParams(1, 1, 0, 1))
    i = cov.labels.index("U1")
    assert np.all(cov.entries[i] == 0) and np.all(cov.entries[:, i] == 0)
    assert cov.var("X2") == pytest.approx(ch.p2, abs=1e-12)


def test_output_variance_expansion():
    ch = ChannelParams(1, 1, 1, 1)
    p = InnerParams(0.5, 0.5, -0.5, 0.5)
    cov = assemble_inner_covariance(ch, p)
    s12 = p.rho12_prime * math.sqrt(p.theta_bar * ch.p1 * ch.p2)
    s2s = p.rho * math.sqrt(ch.p2 * ch.q)
    assert cov.var("Y") == pytest.approx(ch.p1 + ch.p2 + ch.q + ch.n0 + 2 * s12 + 2 * s2s, abs=1e-12)
    assert cov.cov("X1", "X2") == pytest.approx(s12, abs=1e-12)
    assert cov.cov("X2", "S") == pytest.approx(s2s, abs=1e-12)
    assert cov.var("S") == ch.q


def test_outer_covariance_structure():
    cov = assemble_outer_covariance(ChannelParams(1, 1, 1, 1), OuterParams(0, 0))
    assert cov.cov("X1", "X2") == 0 and cov.cov("X2", "S") == 0 and cov.cov("X1", "S") == 0

    ch = ChannelParams(2, 3, 1.5, 1)
    cov = assemble_outer_covariance(ch, OuterParams(0.6, -0.8))
    assert cov.is_psd()
    assert schur_var(cov, "X2", ["X1", "S"]) == pytest.approx(0.0, abs=1e-12)

    cov = assemble_outer_covariance(ChannelParams(1, 1, 1, 1), OuterParams(0.6, -0.6))
    assert cov.is_psd()
    assert np.linalg.det(cov.sub(["S", "X1", "X2"])) == pytest.approx(1 - 0.72, abs=1e-12)


def test_covmatrix_validation():
    with pytest.raises(ValueError):
        CovMatrix(("A", "B"), [[1, 0.5], [0.4, 1]])
    with pytest.raises(ValueError):
        CovMatrix(("A", "A"), np.eye(2))
    cov = CovMatrix(("A", "B"), np.eye(2))
    with pytest.raises(KeyError):
        gaussian_cmi(cov, "A", "C")
    with pytest.raises(ValueError):
        gaussian_cmi(cov, "A", "A")
    with pytest.raises(ValueError):
        gaussian_cmi(cov, (), "A")


# --- gaussian_cmi --------------------------------------------------------------------

def test_cmi_basic():
    assert gaussian_cmi(CovMatrix(("A", "B"), np.eye(2)), "A", "B") == 0.0
    # Y = X + Z, unit variances
    cov = CovMatrix(("X", "Z", "Y"), [[1, 0, 1], [0, 1, 1], [1, 1, 2]])
    assert gaussian_cmi(cov, "X", "Y") == pytest.approx(0.5, abs=1e-12)
    # given Y, X and Z become dependent
    assert gaussian_cmi(cov, "X", "Z", "Y") > 0.1


def random_cov(seed, n=5, rank=None):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, rank or n))
    return CovMatrix(tuple("ABCDE"[:n]), a @ a.T)


seeds = st.integers(0, 2**32 - 1)


@given(seeds)
def test_cmi_two_ways(seed):
    cov = random_cov(seed)
    direct = gaussian_cmi(cov, ("A", "B"), "C", ("D",))
    via_h = gaussian_entropy_gap(cov, ("A", "B"), ("D",)) - gaussian_entropy_gap(cov, ("A", "B"), ("C", "D"))
    assert direct == pytest.approx(via_h, abs=1e-10)


@given(seeds)
def test_cmi_symmetric_and_chain_rule(seed):
    cov = random_cov(seed)
    assert gaussian_cmi(cov, "A", ("B", "C"), "E") == pytest.approx(gaussian_cmi(cov, ("B", "C"), "A", "E"), abs=1e-10)
    whole = gaussian_cmi(cov, "A", ("B", "C"), "E")
    parts = gaussian_cmi(cov, "A", "B", "E") + gaussian_cmi(cov, "A", "C", ("B", "E"))
    assert whole == pytest.approx(parts, abs=1e-10)


@given(seeds)
def test_cmi_singular_is_finite(seed):
    cov = random_cov(seed, rank=3)
    v = gaussian_cmi(cov, "A", "B", ("C",))
    assert math.isfinite(v) and v >= 0


# --- oracle vs closed forms ----------------------------------------------------------------

INNER_FROZEN = (0.3390394655213176, 0.4658671640334115, 0.904645065121779, 0.25295813124996375)
OUTER_FROZEN = (0.43723455895807173, 0.9823607283536597)


def test_oracle_frozen_examples():
    c, feas = oracle_inner(FIG2, InnerParams(0.5, 0.5, -0.3, 0.6))
    assert (c.r1_a, c.r1_b, c.sum_c, feas) == pytest.approx(INNER_FROZEN, abs=1e-12)
    o = oracle_outer(FIG2, OuterParams(0.5, -0.5))
    assert (o.r1_a, o.sum_c) == pytest.approx(OUTER_FROZEN, abs=1e-12)


def test_oracle_outer_trivial():
    o = oracle_outer(ChannelParams(1, 1, 1, 1), OuterParams(0, 0))
    assert o.r1_a == pytest.approx(0.5, abs=1e-12)
    assert o.r1_b == math.inf
    assert o.sum_c == pytest.approx(0.70752, abs=1e-5)


def test_degenerate_binning_has_no_gain():
    _, feas = oracle_inner(ChannelParams(1, 1, 0, 1), InnerParams(0, 1e-4, 0, 0))
    assert abs(feas) < 1e-4


inner_cases = seeds.map(lambda s: draw_inner_case(np.random.default_rng(s)))
outer_cases = seeds.map(lambda s: draw_outer_case(np.random.default_rng(s)))


@given(inner_cases)
def test_inner_closed_form_agrees(case):
    ch, p = case
    ra, rb, sc, feas = oracle_inner_raw(ch, p)
    assert binning_gain(ch, p) == pytest.approx(feas, abs=1e-9)
    c = inner_constraints(ch, p)
    if c is not None:
        assert (c.r1_a, c.r1_b, c.sum_c) == pytest.approx((ra, rb, sc), abs=1e-9)


@given(outer_cases)
def test_outer_closed_form_agrees(case):
    ch, p = case
    a, b = outer_constraints(ch, p), oracle_outer(ch, p)
    assert (a.r1_a, a.sum_c) == pytest.approx((b.r1_a, b.sum_c), abs=1e-9)
    assert gaussian_cmi(assemble_outer_covariance(ch, p), "X1", "S", "Y") >= 0


@given(inner_cases)
def test_inner_covariance_properties(case):
    ch, p = case
    cov = assemble_inner_covariance(ch, p)
    assert cov.is_psd(1e-10)
    assert cov.var("S") == pytest.approx(ch.q)
    assert cov.var("X1") == pytest.approx(ch.p1)
    # data processing through the physical inputs
    lhs = gaussian_cmi(cov, "U2", "Y", ("U1", "X1"))
    rhs = gaussian_cmi(cov, ("X2", "S"), "Y", ("U1", "X1"))
    assert lhs <= rhs + 1e-10


@given(outer_cases)
def test_outer_covariance_psd(case):
    assert assemble_outer_covariance(*case).is_psd(1e-10)


@given(inner_cases, st.floats(0.01, 100))
def test_scaling_leaves_information_unchanged(case, k):
    ch, p = case
    a = oracle_inner_raw(ch, p)
    b = oracle_inner_raw(ch.scaled(k), p)
    assert a == pytest.approx(b, abs=1e-10)
    po = OuterParams(0.3, -0.4)
    oa, ob = oracle_outer(ch, po), oracle_outer(ch.scaled(k), po)
    assert (oa.r1_a, oa.sum_c) == pytest.approx((ob.r1_a, ob.sum_c), abs=1e-10)
