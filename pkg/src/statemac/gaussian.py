"""Closed-form inner and outer bounds for the Gaussian channel

    Y = X1 + X2 + S + Z,   S ~ N(0, Q),  Z ~ N(0, N),

where only encoder 2 knows S (non-causally) and sends the common message,
and encoder 1 sends the common message plus its own individual message.
All rates are in bits per channel use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import RateConstraints, RegionBoundary, frontier_from_caps, rc_grid as make_rc_grid


@dataclass(frozen=True)
class ChannelParams:
    p1: float
    p2: float
    q: float
    n0: float

    def __post_init__(self):
        for name in ("p1", "p2", "q", "n0"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.p1 < 0 or self.p2 < 0 or self.q < 0:
            raise ValueError("powers and state variance must be non-negative")
        if self.n0 <= 0:
            raise ValueError("noise variance must be positive")

    def scaled(self, k: float) -> "ChannelParams":
        return ChannelParams(k * self.p1, k * self.p2, k * self.q, k * self.n0)


@dataclass(frozen=True)
class InnerParams:
    theta: float
    xi: float
    rho: float
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        if not 0.0 <= self.xi <= 1.0:
            raise ValueError(f"xi must lie in [0, 1], got {self.xi}")
        if not (self.rho <= 0.0 and self.xi + self.rho**2 <= 1.0 + 1e-12):
            raise ValueError(f"rho must lie in [-sqrt(1-xi), 0], got rho={self.rho}, xi={self.xi}")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")

    @property
    def theta_bar(self) -> float:
        return 1.0 - self.theta

    @property
    def rho12_prime(self) -> float:
        """Correlation of X2 with U1 implied by (xi, rho)."""
        return math.sqrt(max(1.0 - self.xi - self.rho**2, 0.0))


@dataclass(frozen=True)
class OuterParams:
    rho12: float
    rho2s: float

    def __post_init__(self):
        if not 0.0 <= self.rho12 <= 1.0:
            raise ValueError(f"rho12 must lie in [0, 1], got {self.rho12}")
        if not -1.0 <= self.rho2s <= 0.0:
            raise ValueError(f"rho2s must lie in [-1, 0], got {self.rho2s}")
        if self.rho12**2 + self.rho2s**2 > 1.0 + 1e-12:
            raise ValueError("rho12^2 + rho2s^2 must not exceed 1")


@dataclass(frozen=True)
class GridSpec:
    """Resolution of the parameter sweeps.

    The inner sweep is the lexicographic product (theta, xi, rho, alpha); rho is
    spread over [-sqrt(1 - xi), 0] for each xi, and alpha always includes 0 and 1.
    The outer sweep is the (rho12, rho2s) product filtered to the quarter disk.
    """

    theta_points: int = 21
    xi_points: int = 21
    rho_points: int = 21
    alpha_points: int = 101
    alpha_range: tuple[float, float] = (-2.0, 3.0)
    xi_floor: float = 1e-4
    rho12_points: int = 41
    rho2s_points: int = 41
    rc_points: int = 201
    outer_refine: bool = True

    def __post_init__(self):
        counts = ("theta_points", "xi_points", "rho_points", "alpha_points", "rc_points")
        for name in counts:
            if getattr(self, name) < 2:
                raise ValueError(f"{name} must be at least 2")
        if self.rho12_points < 1 or self.rho2s_points < 1:
            raise ValueError("outer grid needs at least one point per axis")
        lo, hi = self.alpha_range
        if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
            raise ValueError(f"alpha_range must be a non-empty interval, got {self.alpha_range}")
        if not 0.0 < self.xi_floor < 1.0:
            raise ValueError("xi_floor must lie in (0, 1)")

    @classmethod
    def with_resolution(cls, n: int, **kw) -> "GridSpec":
        """n points per inner axis and 2n - 1 per outer axis."""
        return cls(theta_points=n, xi_points=n, rho_points=n, rho12_points=2 * n - 1, rho2s_points=2 * n - 1, **kw)

    def thetas(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.theta_points)

    def xis(self) -> np.ndarray:
        return np.linspace(self.xi_floor, 1.0, self.xi_points)

    def alphas(self) -> np.ndarray:
        a = np.linspace(*self.alpha_range, self.alpha_points)
        for special in (0.0, 1.0):
            near = np.abs(a - special) < 1e-9
            if near.any():
                a[near] = special
            else:
                a = np.append(a, special)
        return np.unique(a)

    def outer_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        r12 = np.linspace(0.0, 1.0, self.rho12_points) if self.rho12_points > 1 else np.zeros(1)
        r2s = np.linspace(-1.0, 0.0, self.rho2s_points) if self.rho2s_points > 1 else np.zeros(1)
        A, B = np.meshgrid(r12, r2s, indexing="ij")
        keep = A**2 + B**2 <= 1.0 + 1e-12
        return A[keep], B[keep]


DEFAULT_GRID = GridSpec()


def _half_log2(x):
    return 0.5 * np.log2(x)


def q_tilde(ch: ChannelParams, rho):
    """Power of the effective state (1 + E[X2 S]/Q) S seen at the receiver."""
    return (math.sqrt(ch.q) + np.asarray(rho, dtype=float) * math.sqrt(ch.p2)) ** 2


def inner_terms(ch: ChannelParams, theta, xi, rho, alpha):
    """Vectorized inner-bound terms.

    Returns ``(r1_a, r1_b, sum_c, binning_gain, feasible)`` as broadcast arrays.
    ``binning_gain`` is the second logarithm of the sum bound. Entries that are
    infeasible under the non-negativity rule are left as computed (possibly
    NaN or negative) and flagged False.
    """
    theta = np.asarray(theta, dtype=float)
    xi = np.asarray(xi, dtype=float)
    rho = np.asarray(rho, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    p1, p2, n0 = ch.p1, ch.p2, ch.n0

    a = p2 * xi
    qt = q_tilde(ch, rho)
    resid = a * qt * (1.0 - alpha) ** 2
    u2_power = a + alpha**2 * qt
    den = resid + n0 * u2_power
    with np.errstate(divide="ignore", invalid="ignore"):
        eff_noise = n0 + resid / u2_power
        r1_a = _half_log2(1.0 + theta * p1 / eff_noise)
        arg_b = a * (a + qt + n0 + theta * p1) / den
        arg_bin = a * (a + qt + n0) / den
        r1_b = _half_log2(arg_b)
        gain = _half_log2(arg_bin)
        coh = np.sqrt(np.maximum(1.0 - xi - rho**2, 0.0))
        top = (np.sqrt((1.0 - theta) * p1) + coh * math.sqrt(p2)) ** 2 + theta * p1
        sum_c = _half_log2(1.0 + top / (a + qt + n0)) + gain
    feasible = (
        np.isfinite(r1_a) & np.isfinite(r1_b) & np.isfinite(sum_c)
        & (arg_b >= 1.0) & (arg_bin >= 1.0)
    )
    feasible &= (r1_a >= 0) & (sum_c >= 0)
    return r1_a, r1_b, sum_c, gain, feasible


def inner_constraints(ch: ChannelParams, p: InnerParams) -> RateConstraints | None:
    """Inner-bound slice at one parameter tuple, or None when inadmissible."""
    r1_a, r1_b, sum_c, _, ok = inner_terms(ch, p.theta, p.xi, p.rho, p.alpha)
    if not bool(ok):
        return None
    return RateConstraints(float(r1_a), float(r1_b), float(sum_c))


def binning_gain(ch: ChannelParams, p: InnerParams) -> float:
    """Second logarithm of the sum bound (the admissibility term), in bits."""
    return float(inner_terms(ch, p.theta, p.xi, p.rho, p.alpha)[3])


def outer_terms(ch: ChannelParams, rho12, rho2s):
    rho12 = np.asarray(rho12, dtype=float)
    rho2s = np.asarray(rho2s, dtype=float)
    p1, p2, q, n0 = ch.p1, ch.p2, ch.q, ch.n0
    resid = np.maximum(1.0 - rho12**2 - rho2s**2, 0.0)
    free = 1.0 - rho2s**2
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(free > 0, resid / np.where(free > 0, free, 1.0), 0.0)
    r1_a = _half_log2(1.0 + p1 * ratio / n0)
    coherent = (math.sqrt(p1) + rho12 * math.sqrt(p2)) ** 2
    interf = p2 * resid + (math.sqrt(q) + rho2s * math.sqrt(p2)) ** 2 + n0
    sum_c = _half_log2(1.0 + coherent / interf) + _half_log2(1.0 + p2 * resid / n0)
    return r1_a, sum_c


def outer_constraints(ch: ChannelParams, p: OuterParams) -> RateConstraints:
    r1_a, sum_c = outer_terms(ch, p.rho12, p.rho2s)
    return RateConstraints(float(r1_a), math.inf, float(sum_c))


def inner_sweep(ch: ChannelParams, g: GridSpec = DEFAULT_GRID, theta=None):
    """All inner tuples in lexicographic (theta, xi, rho, alpha) order.

    Returns a dict of flat arrays: parameters, the three bounds and the
    feasibility mask. ``theta`` overrides the theta axis.
    """
    th = g.thetas() if theta is None else np.atleast_1d(np.asarray(theta, dtype=float))
    xi = g.xis()
    t = np.linspace(0.0, 1.0, g.rho_points)
    al = g.alphas()
    TH, XI, T, AL = np.meshgrid(th, xi, t, al, indexing="ij")
    RHO = (T - 1.0) * np.sqrt(1.0 - XI)
    r1_a, r1_b, sum_c, gain, ok = inner_terms(ch, TH, XI, RHO, AL)
    return {
        "theta": TH.ravel(), "xi": XI.ravel(), "rho": RHO.ravel(), "alpha": AL.ravel(),
        "r1_a": r1_a.ravel(), "r1_b": r1_b.ravel(), "sum_c": sum_c.ravel(),
        "gain": gain.ravel(), "feasible": ok.ravel(),
    }


def outer_sweep(ch: ChannelParams, g: GridSpec = DEFAULT_GRID):
    r12, r2s = g.outer_pairs()
    r1_a, sum_c = outer_terms(ch, r12, r2s)
    return {"rho12": r12, "rho2s": r2s, "r1_a": r1_a, "sum_c": sum_c}


def _boundary(r1_cap, sum_c, grid, rc_points, with_argmax):
    if grid is None:
        top = float(np.max(sum_c)) if sum_c.size else 0.0
        grid = make_rc_grid(max(top, 0.0), rc_points)
    r1, am = frontier_from_caps(r1_cap, sum_c, grid, with_argmax=with_argmax)
    return RegionBoundary(grid, r1, am if with_argmax else None)


def inner_boundary(ch: ChannelParams, g: GridSpec = DEFAULT_GRID, rc_grid=None, *, with_argmax=False) -> RegionBoundary:
    """Union of all admissible inner slices on the sweep grid.

    ``argmax`` (when requested) indexes the feasible tuples of ``inner_sweep``
    in lexicographic order.
    """
    sw = inner_sweep(ch, g)
    ok = sw["feasible"]
    cap = np.minimum(sw["r1_a"][ok], sw["r1_b"][ok])
    return _boundary(cap, sw["sum_c"][ok], rc_grid, g.rc_points, with_argmax)


def _outer_scalar(ch: ChannelParams, r12: float, r2s: float) -> tuple[float, float]:
    resid = max(1.0 - r12 * r12 - r2s * r2s, 0.0)
    free = 1.0 - r2s * r2s
    ratio = resid / free if free > 0 else 0.0
    r1_a = 0.5 * math.log2(1.0 + ch.p1 * ratio / ch.n0)
    coherent = (math.sqrt(ch.p1) + r12 * math.sqrt(ch.p2)) ** 2
    interf = ch.p2 * resid + (math.sqrt(ch.q) + r2s * math.sqrt(ch.p2)) ** 2 + ch.n0
    sum_c = 0.5 * math.log2(1.0 + coherent / interf) + 0.5 * math.log2(1.0 + ch.p2 * resid / ch.n0)
    return r1_a, sum_c


def _project_quarter_disk(z) -> tuple[float, float]:
    r12 = min(max(float(z[0]), 0.0), 1.0)
    r2s = min(max(float(z[1]), -1.0), 0.0)
    norm = math.hypot(r12, r2s)
    if norm > 1.0:
        r12, r2s = r12 / norm, r2s / norm
    return r12, r2s


def _outer_objective(ch, z, rc) -> float:
    f, g = _outer_scalar(ch, *_project_quarter_disk(z))
    return g if rc is None else min(f, g - rc)


def _polish_outer(ch: ChannelParams, start, rc) -> float:
    """Locally maximize min(r1_a, sum_c - rc), or sum_c alone when rc is None.

    The result is re-evaluated at a projected (rho12, rho2s), so it is always
    attained by a valid outer slice and never below the starting value.
    """
    from scipy.optimize import minimize

    x0 = np.array(start, dtype=float)
    v0 = _outer_objective(ch, x0, rc)
    disk = {"type": "ineq", "fun": lambda z: 1.0 - z[0] ** 2 - z[1] ** 2}
    opts = {"ftol": 1e-15, "maxiter": 100}
    if rc is None:
        res = minimize(lambda z: -_outer_scalar(ch, *_project_quarter_disk(z))[1], x0,
                       method="SLSQP", bounds=[(0, 1), (-1, 0)], constraints=[disk], options=opts)
    else:
        def slack_r1(z):
            return _outer_scalar(ch, *_project_quarter_disk(z))[0] - z[2]

        def slack_sum(z):
            return _outer_scalar(ch, *_project_quarter_disk(z))[1] - rc - z[2]

        cons = [disk, {"type": "ineq", "fun": slack_r1}, {"type": "ineq", "fun": slack_sum}]
        res = minimize(lambda z: -z[2], np.append(x0, v0), method="SLSQP",
                       bounds=[(0, 1), (-1, 0), (None, None)], constraints=cons, options=opts)
    v1 = _outer_objective(ch, res.x[:2], rc)
    return max(v0, v1) if math.isfinite(v1) else v0


def _refined_outer_frontier(ch, sw, grid, r1):
    """Polish every non-empty cell starting from its best grid tuple."""
    m, s = sw["r1_a"], sw["sum_c"]
    out = np.array(r1, dtype=float)
    for i, rc in enumerate(grid):
        if not np.isfinite(out[i]):
            continue
        vals = np.where(s + 1e-12 >= rc, np.minimum(m, s - rc), -np.inf)
        k = int(np.argmax(vals))
        v = _polish_outer(ch, (sw["rho12"][k], sw["rho2s"][k]), float(rc))
        out[i] = max(out[i], v, 0.0)
    return out


def _outer_sum_max(ch: ChannelParams, g: GridSpec, sw) -> float:
    k = int(np.argmax(sw["sum_c"]))
    top = float(sw["sum_c"][k])
    if g.outer_refine:
        top = max(top, _polish_outer(ch, (sw["rho12"][k], sw["rho2s"][k]), None))
    return top


def outer_boundary(ch: ChannelParams, g: GridSpec = DEFAULT_GRID, rc_grid=None, *, with_argmax=False) -> RegionBoundary:
    """Union of outer slices over the (rho12, rho2s) quarter disk.

    With ``g.outer_refine`` the grid optimum of each rc cell is polished by a
    local continuous maximization; a finite union of slices otherwise leaves
    notches between neighbouring corners that are first order in the grid step.
    """
    sw = outer_sweep(ch, g)
    if rc_grid is None:
        rc_grid = make_rc_grid(max(_outer_sum_max(ch, g, sw), 0.0), g.rc_points)
    b = _boundary(sw["r1_a"], sw["sum_c"], rc_grid, g.rc_points, with_argmax)
    if not g.outer_refine:
        return b
    r1 = _refined_outer_frontier(ch, sw, b.rc_grid, b.r1_max)
    return RegionBoundary(b.rc_grid, r1, b.argmax)


def region_pair(ch: ChannelParams, g: GridSpec = DEFAULT_GRID) -> tuple[RegionBoundary, RegionBoundary]:
    """Inner and outer boundaries on one shared rc grid.

    The grid spans [0, largest sum bound seen by either sweep].
    """
    isw = inner_sweep(ch, g)
    osw = outer_sweep(ch, g)
    ok = isw["feasible"]
    tops = [_outer_sum_max(ch, g, osw)]
    if ok.any():
        tops.append(float(np.max(isw["sum_c"][ok])))
    grid = make_rc_grid(max(tops), g.rc_points)
    inner = _boundary(np.minimum(isw["r1_a"][ok], isw["r1_b"][ok]), isw["sum_c"][ok], grid, g.rc_points, False)
    outer = outer_boundary(ch, g, grid)
    return inner, outer


def common_message_capacity(ch: ChannelParams, g: GridSpec = DEFAULT_GRID) -> tuple[float, float]:
    """Bounds on the largest Rc with R1 = 0 (no individual message, theta = 0)."""
    sw = inner_sweep(ch, g, theta=0.0)
    ok = sw["feasible"]
    lower = float(np.max(sw["sum_c"][ok])) if ok.any() else 0.0
    upper = _outer_sum_max(ch, g, outer_sweep(ch, g))
    return lower, upper


def helper_rate_bounds(ch: ChannelParams, g: GridSpec = DEFAULT_GRID) -> tuple[float, float]:
    """Bounds on R1 when the informed encoder only helps (Rc = 0)."""
    sw = inner_sweep(ch, g)
    ok = sw["feasible"]
    vals = np.minimum(np.minimum(sw["r1_a"], sw["r1_b"]), sw["sum_c"])[ok]
    lower = float(np.max(vals)) if vals.size else 0.0
    osw = outer_sweep(ch, g)
    vals = np.minimum(osw["r1_a"], osw["sum_c"])
    k = int(np.argmax(vals))
    upper = float(vals[k])
    if g.outer_refine:
        upper = max(upper, _polish_outer(ch, (osw["rho12"][k], osw["rho2s"][k]), 0.0))
    return lower, upper


def strong_interference_reference(ch: ChannelParams) -> RateConstraints:
    """High-SNR, strong-interference capacity corners without the o(1) terms."""
    return RateConstraints(
        float(_half_log2(1.0 + ch.p1 / ch.n0)), math.inf, float(_half_log2(1.0 + ch.p2 / ch.n0))
    )


def strong_interference_gaps(ch: ChannelParams, g: GridSpec = DEFAULT_GRID) -> tuple[float, float]:
    """Relative distance of the inner corner points from the reference corners.

    The corners compared are the R1 intercept, against 1/2 log(1 + P1/N), and
    the largest common rate at R1 = 0, against 1/2 log(1 + P2/N). A reference
    of 0 bits yields an absolute gap.
    """
    ref = strong_interference_reference(ch)
    r1_corner, _ = helper_rate_bounds(ch, g)
    rc_corner, _ = common_message_capacity(ch, g)

    def rel(x, r):
        return abs(x - r) / r if r > 0 else abs(x - r)

    return rel(r1_corner, ref.r1_a), rel(rc_corner, ref.sum_c)
