"""Two-dimensional rate-region geometry.

A region slice is the down-closed pentagon

    {(rc, r1) : 0 <= r1 <= min(r1_a, r1_b), rc >= 0, rc + r1 <= sum_c}

and a region is a union of such slices. Regions are stored by their Pareto
frontier ``r1_max(rc)`` sampled on an ``rc`` grid. Grid cells that no slice
reaches hold NaN.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

EMPTY = float("nan")


@dataclass(frozen=True)
class RatePair:
    rc: float
    r1: float

    def __post_init__(self):
        if not (math.isfinite(self.rc) and math.isfinite(self.r1)):
            raise ValueError(f"rates must be finite, got {self}")
        if self.rc < 0 or self.r1 < 0:
            raise ValueError(f"rates must be non-negative, got {self}")


@dataclass(frozen=True)
class RateConstraints:
    """Right-hand sides, in bits, of R1 <= r1_a, R1 <= r1_b, Rc + R1 <= sum_c.

    ``math.inf`` marks an absent constraint.
    """

    r1_a: float
    r1_b: float
    sum_c: float

    def __post_init__(self):
        for name in ("r1_a", "r1_b", "sum_c"):
            v = getattr(self, name)
            if math.isnan(v) or v < 0:
                raise ValueError(f"{name} must be a non-negative extended real, got {v}")

    @property
    def r1_cap(self) -> float:
        return min(self.r1_a, self.r1_b)

    def contains(self, rc: float, r1: float, tol: float = 0.0) -> bool:
        return (
            rc >= -tol
            and r1 >= -tol
            and r1 <= self.r1_cap + tol
            and rc + r1 <= self.sum_c + tol
        )


@dataclass(frozen=True, eq=False)
class RegionBoundary:
    rc_grid: np.ndarray
    r1_max: np.ndarray
    # flat index of the maximizing candidate per cell, -1 where empty
    argmax: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        rc = np.array(self.rc_grid, dtype=float)
        r1 = np.array(self.r1_max, dtype=float)
        if rc.ndim != 1 or rc.shape != r1.shape:
            raise ValueError("rc_grid and r1_max must be 1-D arrays of equal length")
        if rc.size > 1 and not np.all(np.diff(rc) > 0):
            raise ValueError("rc_grid must be strictly increasing")
        if np.any(rc < 0):
            raise ValueError("rc_grid must be non-negative")
        rc.flags.writeable = False
        r1.flags.writeable = False
        object.__setattr__(self, "rc_grid", rc)
        object.__setattr__(self, "r1_max", r1)
        if self.argmax is not None:
            am = np.array(self.argmax, dtype=np.int64)
            am.flags.writeable = False
            object.__setattr__(self, "argmax", am)

    def __len__(self):
        return self.rc_grid.size

    @property
    def nonempty(self) -> np.ndarray:
        return ~np.isnan(self.r1_max)

    @property
    def is_empty(self) -> bool:
        return not self.nonempty.any()

    def value_at(self, rc: float) -> float:
        """r1_max at an exact grid rate."""
        idx = np.flatnonzero(np.isclose(self.rc_grid, rc, rtol=0, atol=1e-12))
        if idx.size == 0:
            raise KeyError(f"rc={rc} is not on the grid")
        return float(self.r1_max[idx[0]])

    @property
    def r1_intercept(self) -> float:
        return float(self.r1_max[0]) if self.rc_grid[0] == 0 else EMPTY

    def points(self) -> list[tuple[float, float]]:
        m = self.nonempty
        return list(zip(self.rc_grid[m].tolist(), self.r1_max[m].tolist()))


def rc_grid(rc_max: float, points: int = 201) -> np.ndarray:
    """Evenly spaced rates on [0, rc_max]; a single point when rc_max is 0."""
    if not math.isfinite(rc_max) or rc_max < 0:
        raise ValueError(f"rc_max must be finite and non-negative, got {rc_max}")
    if rc_max == 0:
        return np.zeros(1)
    return np.linspace(0.0, rc_max, points)


def constraint_polygon(c: RateConstraints) -> list[RatePair]:
    """Counterclockwise vertices of the slice, starting at the origin.

    Degenerate slices collapse to a segment or the origin.
    """
    if not math.isfinite(c.sum_c):
        raise ValueError("sum_c must be finite")
    s = c.sum_c
    m = min(c.r1_cap, s)
    raw = [(0.0, 0.0), (s, 0.0), (s - m, m), (0.0, m)]
    out: list[RatePair] = []
    for rc, r1 in raw:
        if out and abs(out[-1].rc - rc) <= 1e-15 and abs(out[-1].r1 - r1) <= 1e-15:
            continue
        out.append(RatePair(max(rc, 0.0), max(r1, 0.0)))
    while len(out) > 1 and out[-1] == out[0]:
        out.pop()
    # list makes the polygon start at the origin and go up the r1 axis first
    return [out[0]] + out[1:][::-1]


def _polygon_profile(vertices: Sequence[RatePair]) -> tuple[float, float]:
    """Recover (r1 cap, sum cap) from the vertex list of a slice."""
    s = max(v.rc for v in vertices)
    m = max(v.r1 for v in vertices)
    return m, s


def frontier_from_caps(r1_cap, sum_cap, grid: np.ndarray, *, with_argmax=False):
    """Upper boundary of the union of slices given by flat arrays of caps.

    Slice k contributes ``min(r1_cap[k], sum_cap[k] - rc)`` for rc <= sum_cap[k].
    Ties go to the lowest index. Returns ``(r1_max, argmax)``.
    """
    m = np.asarray(r1_cap, dtype=float).ravel()
    s = np.asarray(sum_cap, dtype=float).ravel()
    m = np.minimum(m, s)
    grid = np.asarray(grid, dtype=float)
    r1 = np.full(grid.shape, EMPTY)
    am = np.full(grid.shape, -1, dtype=np.int64)
    if m.size == 0:
        return r1, am

    # keep only Pareto-optimal (m, s) pairs; lowest index wins among equals
    order = np.lexsort((np.arange(s.size), -m, -s))
    ms = m[order]
    prev = np.concatenate(([-np.inf], np.maximum.accumulate(ms)[:-1]))
    keep = order[ms > prev]
    km, ks = m[keep], s[keep]

    vals = np.minimum(km[None, :], ks[None, :] - grid[:, None])
    reach = grid[:, None] <= ks[None, :] + 1e-12
    vals = np.where(reach, np.maximum(vals, 0.0), -np.inf)
    j = np.argmax(vals, axis=1)
    best = vals[np.arange(grid.size), j]
    hit = np.isfinite(best)
    r1[hit] = best[hit]
    if with_argmax:
        # resolve ties among all candidates, not only the Pareto survivors
        for i in np.flatnonzero(hit):
            cand = np.minimum(m, s - grid[i])
            ok = (s + 1e-12 >= grid[i]) & (np.maximum(cand, 0.0) >= best[i])
            am[i] = int(np.flatnonzero(ok)[0])
    return r1, am


def union_upper_boundary(polygons: Iterable[Sequence[RatePair]], rc_grid: Sequence[float]) -> RegionBoundary:
    grid = np.asarray(rc_grid, dtype=float)
    caps = [_polygon_profile(p) for p in polygons if len(p)]
    if not caps:
        return RegionBoundary(grid, np.full(grid.shape, EMPTY))
    m, s = map(np.asarray, zip(*caps))
    r1, _ = frontier_from_caps(m, s, grid)
    return RegionBoundary(grid, r1)


def boundary_from_constraints(constraints: Iterable[RateConstraints], rc_grid: Sequence[float]) -> RegionBoundary:
    cs = list(constraints)
    grid = np.asarray(rc_grid, dtype=float)
    if not cs:
        return RegionBoundary(grid, np.full(grid.shape, EMPTY))
    r1, am = frontier_from_caps([c.r1_cap for c in cs], [c.sum_c for c in cs], grid, with_argmax=True)
    return RegionBoundary(grid, r1, am)


def upper_concave_envelope(b: RegionBoundary) -> RegionBoundary:
    """Least concave majorant over the non-empty cells (time sharing).

    Empty cells stay empty. The result is non-increasing because the input is.
    """
    mask = b.nonempty
    if mask.sum() <= 2:
        return RegionBoundary(b.rc_grid, b.r1_max)
    x = b.rc_grid[mask]
    y = b.r1_max[mask]
    # upper hull by monotone chain
    hull: list[int] = []
    for i in range(x.size):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            cross = (x[i1] - x[i0]) * (y[i] - y[i0]) - (y[i1] - y[i0]) * (x[i] - x[i0])
            if cross >= 0:
                hull.pop()
            else:
                break
        hull.append(i)
    env = np.interp(x, x[hull], y[hull])
    env = np.maximum(env, y)
    out = np.full(b.r1_max.shape, EMPTY)
    out[mask] = env
    return RegionBoundary(b.rc_grid, out)


def dominates(outer: RegionBoundary, inner: RegionBoundary, tol: float = 0.0) -> bool:
    """True iff outer >= inner - tol wherever inner is non-empty.

    At tol = 0 an empty outer cell under a non-empty inner cell fails. With
    tol > 0 an empty outer cell counts as r1 = 0, so inner may overshoot the
    outer rc extent only with points within tol of the rc axis.
    """
    if outer.rc_grid.shape != inner.rc_grid.shape or not np.array_equal(outer.rc_grid, inner.rc_grid):
        raise ValueError("boundaries are sampled on different rc grids")
    m = inner.nonempty
    if not m.any():
        return True
    o = outer.r1_max[m]
    if tol > 0:
        o = np.where(np.isnan(o), 0.0, o)
    elif np.isnan(o).any():
        return False
    return bool(np.all(o >= inner.r1_max[m] - tol))


def max_shortfall(outer: RegionBoundary, inner: RegionBoundary) -> float:
    """Largest amount by which inner exceeds outer (<= 0 when contained).

    Empty outer cells count as r1 = 0, matching :func:`dominates` with tol > 0.
    """
    if not np.array_equal(outer.rc_grid, inner.rc_grid):
        raise ValueError("boundaries are sampled on different rc grids")
    m = inner.nonempty
    if not m.any():
        return -math.inf
    o = np.where(np.isnan(outer.r1_max[m]), 0.0, outer.r1_max[m])
    return float(np.max(inner.r1_max[m] - o))


def max_abs_gap(a: RegionBoundary, b: RegionBoundary) -> float:
    """Pointwise sup-distance between two boundaries; empty cells count as 0."""
    if not np.array_equal(a.rc_grid, b.rc_grid):
        raise ValueError("boundaries are sampled on different rc grids")
    m = a.nonempty | b.nonempty
    if not m.any():
        return 0.0
    fa = np.where(np.isnan(a.r1_max[m]), 0.0, a.r1_max[m])
    fb = np.where(np.isnan(b.r1_max[m]), 0.0, b.r1_max[m])
    return float(np.max(np.abs(fa - fb)))
