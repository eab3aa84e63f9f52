"""Verification suites behind ``statemac verify``."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import gaussian as G
from .discrete import random_channel, xor_channel
from .fourier_motzkin import fm_grid_sweep
from .geometry import dominates, max_abs_gap, max_shortfall
from .oracle import (
    assemble_inner_covariance,
    draw_inner_case,
    draw_outer_case,
    gaussian_cmi,
    oracle_inner,
    oracle_outer,
)
from .search import dm_inner_pool, dm_outer_pool, pool_boundary, shared_grid

FIGURE_PRESETS = {
    "fig2": G.ChannelParams(p1=2.5, p2=2.0, q=1.5, n0=2.0),
    "fig3": G.ChannelParams(p1=1.0, p2=2.0, q=1.5, n0=2.0),
    "fig4": G.ChannelParams(p1=1.5, p2=1.0, q=2.5, n0=1.0),
}


@dataclass
class Check:
    name: str
    passed: bool
    max_error: float
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        err = f"{self.max_error:.3e}" if math.isfinite(self.max_error) else str(self.max_error)
        return f"[{tag}] {self.name}: max_err={err}" + (f" ({self.detail})" if self.detail else "")


def inner_oracle_agreement(trials: int = 1000, seed: int = 42, tol: float = 1e-9) -> Check:
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_gain = 0.0
    kept = discarded = 0
    t0 = time.perf_counter()
    while kept < trials:
        ch, p = draw_inner_case(rng)
        closed = G.inner_constraints(ch, p)
        if closed is None:
            discarded += 1
            continue
        kept += 1
        orc, feas = oracle_inner(ch, p)
        worst = max(worst, abs(closed.r1_a - orc.r1_a), abs(closed.r1_b - orc.r1_b), abs(closed.sum_c - orc.sum_c))
        worst_gain = max(worst_gain, abs(G.binning_gain(ch, p) - feas))
    err = max(worst, worst_gain)
    dt = time.perf_counter() - t0
    return Check("inner closed form vs log-det oracle", err <= tol, err,
                 f"{kept} draws, {discarded} inadmissible discarded, admissibility-term err {worst_gain:.1e}, {dt:.1f}s")


def outer_oracle_agreement(trials: int = 1000, seed: int = 42, tol: float = 1e-9) -> Check:
    rng = np.random.default_rng(seed)
    worst = 0.0
    t0 = time.perf_counter()
    for _ in range(trials):
        ch, p = draw_outer_case(rng)
        a = G.outer_constraints(ch, p)
        b = oracle_outer(ch, p)
        worst = max(worst, abs(a.r1_a - b.r1_a), abs(a.sum_c - b.sum_c))
    dt = time.perf_counter() - t0
    return Check("outer closed form vs log-det oracle", worst <= tol, worst, f"{trials} draws, {dt:.1f}s")


def data_processing(trials: int = 200, seed: int = 43) -> Check:
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for _ in range(trials):
        ch, p = draw_inner_case(rng)
        cov = assemble_inner_covariance(ch, p)
        lhs = gaussian_cmi(cov, "U2", "Y", ("U1", "X1"))
        rhs = gaussian_cmi(cov, ("X2", "S"), "Y", ("U1", "X1"))
        worst = max(worst, lhs - rhs)
    return Check("I(U2;Y|U1,X1) <= I(X2,S;Y|U1,X1)", worst <= 1e-10, max(worst, 0.0), f"{trials} draws")


def oracle_suite(trials: int = 1000, seed: int = 42, tol: float = 1e-9) -> list[Check]:
    return [
        inner_oracle_agreement(trials, seed, tol),
        outer_oracle_agreement(trials, seed, tol),
        data_processing(min(trials, 200), seed + 1),
    ]


def containment(name: str, ch: G.ChannelParams, g: G.GridSpec = G.DEFAULT_GRID, tol: float = 1e-6) -> Check:
    inner, outer = G.region_pair(ch, g)
    over = max_shortfall(outer, inner)
    return Check(f"containment {name}", dominates(outer, inner, tol), max(over, 0.0),
                 f"inner - outer peaks at {over:.2e} bits")


def zero_state_match(ch: G.ChannelParams, g: G.GridSpec = G.DEFAULT_GRID, tol: float = 0.02) -> Check:
    inner, outer = G.region_pair(ch, g)
    gap = max_abs_gap(inner, outer)
    return Check(f"Q=0 inner/outer match at P1={ch.p1:g},P2={ch.p2:g},N={ch.n0:g}", gap <= tol, gap)


def common_message(g: G.GridSpec = G.DEFAULT_GRID) -> list[Check]:
    lo, hi = G.common_message_capacity(FIGURE_PRESETS["fig2"], g)
    out = [Check("common-message bounds match (fig2)", abs(hi - lo) <= 0.02, abs(hi - lo),
                 f"lower={lo:.6f} upper={hi:.6f}")]
    ch = G.ChannelParams(1.0, 1.0, 0.0, 1.0)
    lo, hi = G.common_message_capacity(ch, g)
    target = 0.5 * math.log2(1 + (math.sqrt(ch.p1) + math.sqrt(ch.p2)) ** 2 / ch.n0)
    err = max(abs(lo - target), abs(hi - target))
    out.append(Check("common-message capacity at Q=0", err <= 0.02, err,
                     f"lower={lo:.6f} upper={hi:.6f} target={target:.6f}"))
    return out


def helper(g: G.GridSpec = G.DEFAULT_GRID) -> list[Check]:
    out = []
    for q in (10.0, 100.0, 1000.0):
        ch = G.ChannelParams(1.0, 3.0, q, 1.0)
        lo, hi = G.helper_rate_bounds(ch, g)
        target = 0.5 * math.log2(1 + min(ch.p1, ch.p2) / ch.n0)
        err = max(abs(lo - target), abs(hi - target))
        out.append(Check(f"helper rate at Q={q:g}", err <= 0.01, err, f"lower={lo:.6f} upper={hi:.6f}"))
    return out


def strong_interference_trend(g: G.GridSpec = G.DEFAULT_GRID, powers=(1e2, 1e3, 1e4)) -> Check:
    gaps = [max(G.strong_interference_gaps(G.ChannelParams(P, P, 10 * P, 1.0), g)) for P in powers]
    shrinking = all(b < a for a, b in zip(gaps, gaps[1:]))
    ok = shrinking and gaps[-1] < 0.05
    return Check("strong-interference corners approach the reference", ok, gaps[-1],
                 "relative gaps " + ", ".join(f"{x:.4f}" for x in gaps))


def special_cases_suite(g: G.GridSpec = G.DEFAULT_GRID) -> list[Check]:
    checks = [containment(k, ch, g) for k, ch in FIGURE_PRESETS.items()]
    for p1, p2, n0 in ((1.0, 1.0, 1.0), (2.5, 2.0, 2.0)):
        checks.append(zero_state_match(G.ChannelParams(p1, p2, 0.0, n0), g))
    checks += common_message(g)
    checks += helper(g)
    checks.append(strong_interference_trend(g))
    return checks


def xor_corners(budget: int = 2000, seed: int = 7, tol: float = 0.02) -> list[Check]:
    ch = xor_channel()
    ip = dm_inner_pool(ch, 2, 2, budget, seed)
    op = dm_outer_pool(ch, budget, seed)
    grid = shared_grid(ip, op)
    inner = pool_boundary(ip, grid)
    outer = pool_boundary(op, grid)
    r1_corner = inner.r1_max[0]
    rc_corner = float(np.max(ip[1])) if ip[1].size else 0.0
    err = max(abs(1.0 - r1_corner), abs(1.0 - rc_corner))
    return [
        Check("XOR inner search reaches (0,1) and (1,0)", err <= tol, err,
              f"R1 intercept {r1_corner:.6f}, largest Rc {rc_corner:.6f}"),
        Check("XOR outer search dominates inner", dominates(outer, inner, tol), max(max_shortfall(outer, inner), 0.0)),
    ]


def random_channel_containment(channels: int = 20, seed: int = 7, budget: int = 2000, tol: float = 0.02) -> Check:
    rng = np.random.default_rng(seed)
    worst = -math.inf
    bad = 0
    for k in range(channels):
        ch = random_channel(rng)
        ip = dm_inner_pool(ch, 2, 2, budget, seed + k)
        op = dm_outer_pool(ch, 2 * budget, seed + k)
        grid = shared_grid(ip, op)
        over = max_shortfall(pool_boundary(op, grid), pool_boundary(ip, grid))
        worst = max(worst, over)
        bad += over > tol
    return Check(f"DM inner within outer on {channels} random binary channels", bad == 0, max(worst, 0.0),
                 f"{bad} channel(s) over tolerance")


def dm_suite(channels: int = 20, seed: int = 7) -> list[Check]:
    return xor_corners(seed=seed) + [random_channel_containment(channels, seed)]


def fm_suite() -> list[Check]:
    t0 = time.perf_counter()
    checked, failures = fm_grid_sweep()
    dt = time.perf_counter() - t0
    return [Check("Fourier-Motzkin projection on {0,0.25,...,2}^4, d>0", not failures, float(len(failures)),
                  f"{checked} tuples, {dt:.1f}s")]
