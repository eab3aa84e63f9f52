"""Seeded random search over factorized distributions for the DM bounds.

Candidates are drawn slice-wise from Dirichlet(1). The best candidates of each
rc cell are then refined greedily: one conditional slice is perturbed at a
time and the move is kept when the candidate's target cell improves. Every
evaluated admissible candidate is a genuine distribution, so all of them enter
the final union.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .discrete import (
    INNER_AXES,
    OUTER_AXES,
    DmChannel,
    JointPmf,
    dm_inner_terms,
    dm_outer_terms,
    inner_joint_array,
    is_admissible,
    outer_joint_array,
)
from .geometry import RegionBoundary, frontier_from_caps, rc_grid as make_rc_grid

MAX_JOINT_ENTRIES = 10**6
REFINE_ROUNDS = 50
TOP_PER_CELL = 10
BLOCK = 500
_CHUNK_ENTRIES = 2_000_000


def _evaluate_chunked(joint_fn, terms_fn, axes, factors, entries):
    n = factors[0].shape[0]
    step = max(1, _CHUNK_ENTRIES // entries)
    outs = []
    for lo in range(0, n, step):
        arr = joint_fn(*(f[lo:lo + step] for f in factors))
        outs.append(terms_fn(JointPmf(arr, axes)))
    return [np.concatenate([np.atleast_1d(o[k]) for o in outs]) for k in range(len(outs[0]))]


@dataclass
class _Problem:
    """Factor shapes plus a batched evaluator returning (r1 cap, sum cap, ok)."""

    shapes: list          # per factor: (slice grid shape, alphabet size)
    entries: int          # joint pmf size per candidate
    score: Callable       # factors -> (cap, sum, ok)

    def sample(self, rng, n):
        return [rng.dirichlet(np.ones(k), size=(n, *grid)) for grid, k in self.shapes]

    def evaluate(self, factors):
        if factors[0].shape[0] == 0:
            z = np.zeros(0)
            return z, z, np.zeros(0, dtype=bool)
        return self.score(factors)


def _inner_problem(ch: DmChannel, u1: int, u2: int) -> _Problem:
    sz = ch.sizes
    shapes = [((), u1), ((u1,), sz["X1"]), ((u1, sz["S"]), u2), ((u1, u2, sz["S"]), sz["X2"])]
    entries = sz["S"] * u1 * u2 * sz["X1"] * sz["X2"] * sz["Y"]

    def joint(pu1, px1, pu2, px2):
        return inner_joint_array(ch.state_dist, ch.kernel, pu1, px1, pu2, px2)

    def score(factors):
        r1_a, r1_b, sum_c, feas = _evaluate_chunked(joint, dm_inner_terms, INNER_AXES, factors, entries)
        ok = is_admissible(feas) & (sum_c >= 0)
        return np.maximum(np.minimum(r1_a, r1_b), 0.0), np.maximum(sum_c, 0.0), ok

    return _Problem(shapes, entries, score)


def _outer_problem(ch: DmChannel) -> _Problem:
    sz = ch.sizes
    shapes = [((), sz["X1"]), ((sz["X1"], sz["S"]), sz["X2"])]
    entries = sz["S"] * sz["X1"] * sz["X2"] * sz["Y"]

    def joint(px1, px2):
        return outer_joint_array(ch.state_dist, ch.kernel, px1, px2)

    def score(factors):
        r1_a, sum_c = _evaluate_chunked(joint, dm_outer_terms, OUTER_AXES, factors, entries)
        return np.maximum(r1_a, 0.0), np.maximum(sum_c, 0.0), np.ones(r1_a.shape, dtype=bool)

    return _Problem(shapes, entries, score)


def _cell_values(cap, s, grid):
    """Value of each candidate in each rc cell; -inf where it does not reach."""
    v = np.minimum(cap[None, :], s[None, :] - grid[:, None])
    return np.where(grid[:, None] <= s[None, :] + 1e-12, np.maximum(v, 0.0), -np.inf)


def _perturb(rng, prob: _Problem, factors):
    """Perturb one random slice of one random factor in every candidate.

    Moves: mix with a fresh Dirichlet draw, snap to the most likely symbol,
    mix toward uniform, or sharpen (square and renormalize).
    """
    n = factors[0].shape[0]
    out = [f.copy() for f in factors]
    which = rng.integers(len(factors), size=n)
    kind = rng.integers(4, size=n)
    lam = rng.uniform(0.05, 1.0, size=n)
    for fi, (grid, k) in enumerate(prob.shapes):
        rows = np.flatnonzero(which == fi)
        if rows.size == 0:
            continue
        f = out[fi].reshape(n, -1, k)
        slot = rng.integers(f.shape[1], size=rows.size)
        old = f[rows, slot]
        fresh = rng.dirichlet(np.ones(k), size=rows.size)
        snap = np.zeros_like(old)
        snap[np.arange(rows.size), np.argmax(old, axis=1)] = 1.0
        sq = old**2
        sq_tot = sq.sum(axis=1, keepdims=True)
        sharp = np.where(sq_tot > 0, sq / np.where(sq_tot > 0, sq_tot, 1.0), 1.0 / k)
        l = lam[rows, None]
        kd = kind[rows, None]
        new = np.where(kd == 0, (1 - l) * old + l * fresh,
              np.where(kd == 1, snap,
              np.where(kd == 2, (1 - l) * old + l / k, sharp)))
        f[rows, slot] = new / new.sum(axis=1, keepdims=True)
        out[fi] = f.reshape(out[fi].shape)
    return out


def _refine(rng, prob: _Problem, factors, cap, s, rc_points, rounds, top):
    """Greedy slice-wise hill climbing; returns every admissible proposal."""
    cells = make_rc_grid(float(s.max()), rc_points)
    vals = _cell_values(cap, s, cells)
    order = np.argsort(-vals, axis=1, kind="stable")[:, :top]
    picked, target, seen = [], [], set()
    for c in range(cells.size):
        for k in order[c]:
            if np.isfinite(vals[c, k]) and int(k) not in seen:
                seen.add(int(k))
                picked.append(int(k))
                target.append(c)
    picked = np.asarray(picked, dtype=np.int64)
    target = np.asarray(target, dtype=np.int64)
    cur = [f[picked] for f in factors]
    cur_val = vals[target, picked]
    rc_t = cells[target]
    caps, sums = [], []
    for _ in range(rounds):
        prop = _perturb(rng, prob, cur)
        pc, psum, pok = prob.evaluate(prop)
        caps.append(pc[pok])
        sums.append(psum[pok])
        pv = np.where(psum + 1e-12 >= rc_t, np.maximum(np.minimum(pc, psum - rc_t), 0.0), -np.inf)
        better = pok & (pv > cur_val)
        for f, p in zip(cur, prop):
            f[better] = p[better]
        cur_val = np.where(better, pv, cur_val)
    return caps, sums


def _pool(prob: _Problem, budget: int, seed: int, rc_points: int,
          rounds: int = REFINE_ROUNDS, top: int = TOP_PER_CELL):
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if prob.entries > MAX_JOINT_ENTRIES:
        raise ValueError(f"joint pmf would hold {prob.entries} entries (limit {MAX_JOINT_ENTRIES})")
    caps, sums = [], []
    # fixed-size blocks with their own streams: a larger budget replays every
    # full block of a smaller one, so the union can only grow
    for blk, lo in enumerate(range(0, budget, BLOCK)):
        rng = np.random.default_rng([seed, blk])
        factors = prob.sample(rng, min(BLOCK, budget - lo))
        cap, s, ok = prob.evaluate(factors)
        caps.append(cap[ok])
        sums.append(s[ok])
        if ok.any() and rounds > 0:
            rc_caps, rc_sums = _refine(rng, prob, [f[ok] for f in factors], cap[ok], s[ok], rc_points, rounds, top)
            caps += rc_caps
            sums += rc_sums

    cap_all = np.concatenate(caps) if caps else np.zeros(0)
    sum_all = np.concatenate(sums) if sums else np.zeros(0)
    return cap_all, sum_all


def pool_boundary(pool, rc_grid=None, rc_points: int = 201) -> RegionBoundary:
    """Union boundary of a (r1 cap, sum cap) candidate pool."""
    cap, s = pool
    if rc_grid is None:
        rc_grid = make_rc_grid(float(s.max()) if s.size else 0.0, rc_points)
    r1, _ = frontier_from_caps(cap, s, rc_grid)
    return RegionBoundary(rc_grid, r1)


def dm_inner_pool(ch: DmChannel, u1_size: int, u2_size: int, budget: int, seed: int,
                  rc_points: int = 201, rounds: int = REFINE_ROUNDS):
    """Admissible (r1 cap, sum cap) pairs found by the seeded inner search."""
    if u1_size < 1 or u2_size < 1:
        raise ValueError("auxiliary alphabets need at least one symbol")
    return _pool(_inner_problem(ch, u1_size, u2_size), budget, seed, rc_points, rounds)


def dm_outer_pool(ch: DmChannel, budget: int, seed: int, rc_points: int = 201, rounds: int = REFINE_ROUNDS):
    return _pool(_outer_problem(ch), budget, seed, rc_points, rounds)


def dm_inner_search(ch: DmChannel, u1_size: int, u2_size: int, budget: int, seed: int,
                    rc_grid=None, rc_points: int = 201, rounds: int = REFINE_ROUNDS) -> RegionBoundary:
    """Union of inner slices found by the seeded search (a lower estimate of the region)."""
    return pool_boundary(dm_inner_pool(ch, u1_size, u2_size, budget, seed, rc_points, rounds), rc_grid, rc_points)


def dm_outer_search(ch: DmChannel, budget: int, seed: int, rc_grid=None, rc_points: int = 201,
                    rounds: int = REFINE_ROUNDS) -> RegionBoundary:
    """Union of outer slices found by the seeded search (a lower estimate of the outer region)."""
    return pool_boundary(dm_outer_pool(ch, budget, seed, rc_points, rounds), rc_grid, rc_points)


def shared_grid(*pools, rc_points: int = 201) -> np.ndarray:
    top = max((float(p[1].max()) for p in pools if p[1].size), default=0.0)
    return make_rc_grid(top, rc_points)
