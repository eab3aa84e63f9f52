"""Log-determinant evaluation of the Gaussian bounds.

This is the second, independent route to the closed forms in
:mod:`statemac.gaussian`: the joint covariance of the coding construction is
assembled from independent components, and every information quantity is a
ratio of Gaussian entropies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gaussian import ChannelParams, InnerParams, OuterParams
from .geometry import RateConstraints

INNER_LABELS = ("S", "U1", "X1", "X2", "U2", "Y")
OUTER_LABELS = ("S", "X1", "X2", "Y")
PSD_TOL = 1e-10
EIG_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class CovMatrix:
    labels: tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.shape != (len(self.labels),) * 2:
            raise ValueError("covariance shape does not match labels")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels")
        if not np.allclose(e, e.T, rtol=0, atol=1e-12 * max(1.0, np.abs(e).max())):
            raise ValueError("covariance must be symmetric")
        e = 0.5 * (e + e.T)
        e.flags.writeable = False
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "entries", e)

    def index(self, names: Iterable[str]) -> list[int]:
        out = []
        for n in names:
            try:
                out.append(self.labels.index(n))
            except ValueError:
                raise KeyError(f"unknown label {n!r}; have {self.labels}") from None
        return out

    def var(self, name: str) -> float:
        i = self.labels.index(name)
        return float(self.entries[i, i])

    def cov(self, a: str, b: str) -> float:
        i, j = self.index((a, b))
        return float(self.entries[i, j])

    def sub(self, names: Sequence[str]) -> np.ndarray:
        idx = self.index(names)
        return self.entries[np.ix_(idx, idx)]

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])

    def is_psd(self, tol: float = PSD_TOL) -> bool:
        return self.min_eigenvalue() >= -tol


def _from_components(labels, mixing, variances) -> CovMatrix:
    """Covariance of ``mixing @ g`` for independent components ``g``."""
    A = np.asarray(mixing, dtype=float)
    return CovMatrix(tuple(labels), A @ np.diag(variances) @ A.T)


def assemble_inner_covariance(ch: ChannelParams, p: InnerParams) -> CovMatrix:
    """Joint covariance of (S, U1, X1, X2, U2, Y) under the DPC construction.

    Independent components are S, U1, the fresh part of X1, the binning part
    V2 of X2, and the noise Z. Ratio terms whose denominator is a zero
    variance (U1 when theta = 1, S when Q = 0) are taken as 0.
    """
    p1, p2, q, n0 = ch.p1, ch.p2, ch.q, ch.n0
    tb = p.theta_bar
    u1_var = tb * p1
    sigma12 = p.rho12_prime * math.sqrt(u1_var * p2)
    sigma2s = p.rho * math.sqrt(p2 * q)
    c_u1 = sigma12 / u1_var if u1_var > 0 else 0.0
    c_s = sigma2s / q if q > 0 else 0.0
    k_state = p.alpha * (1.0 + c_s)

    # components:  S    U1    X1~   V2   Z
    rows = {
        "S":  [1.0, 0.0, 0.0, 0.0, 0.0],
        "U1": [0.0, 1.0, 0.0, 0.0, 0.0],
        "X1": [0.0, 1.0, 1.0, 0.0, 0.0],
        "X2": [c_s, c_u1, 0.0, 1.0, 0.0],
        "U2": [k_state, 0.0, 0.0, 1.0, 0.0],
    }
    rows["Y"] = list(np.add(np.add(rows["X1"], rows["X2"]), [1.0, 0, 0, 0, 1.0]))
    variances = [q, u1_var, p.theta * p1, p2 * p.xi, n0]
    return _from_components(INNER_LABELS, [rows[k] for k in INNER_LABELS], variances)


def assemble_outer_covariance(ch: ChannelParams, p: OuterParams) -> CovMatrix:
    """Joint covariance of (S, X1, X2, Y) with X1 independent of S."""
    p1, p2, q, n0 = ch.p1, ch.p2, ch.q, ch.n0
    c_x1 = p.rho12 * math.sqrt(p1 * p2) / p1 if p1 > 0 else 0.0
    c_s = p.rho2s * math.sqrt(p2 * q) / q if q > 0 else 0.0
    resid = max(1.0 - p.rho12**2 - p.rho2s**2, 0.0) * p2

    # components: S   X1   V   Z
    rows = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [c_s, c_x1, 1.0, 0.0],
        [1.0 + c_s, 1.0 + c_x1, 1.0, 1.0],
    ]
    return _from_components(OUTER_LABELS, rows, [q, p1, resid, n0])


def _logdet2(m: np.ndarray, floor: float) -> float:
    if m.size == 0:
        return 0.0
    w = np.linalg.eigvalsh(m)
    return float(np.sum(np.log2(np.maximum(w, floor))))


def _labels(x) -> tuple[str, ...]:
    return (x,) if isinstance(x, str) else tuple(x)


def gaussian_cmi(cov: CovMatrix, a, b, c=()) -> float:
    """I(A; B | C) in bits for jointly Gaussian labels.

    Near-singular blocks are handled by flooring eigenvalues at 1e-12 times
    the largest variance in ``cov``.
    """
    A, B, C = _labels(a), _labels(b), _labels(c)
    if not A or not B:
        raise ValueError("A and B must be non-empty")
    sa, sb, sc = set(A), set(B), set(C)
    if len(sa) != len(A) or len(sb) != len(B) or len(sc) != len(C):
        raise ValueError("repeated label inside a set")
    if sa & sb or sa & sc or sb & sc:
        raise ValueError("label sets must be disjoint")
    cov.index(A + B + C)
    floor = EIG_FLOOR * max(float(np.max(np.diag(cov.entries))), 1e-300)
    val = 0.5 * (
        _logdet2(cov.sub(A + C), floor)
        + _logdet2(cov.sub(B + C), floor)
        - _logdet2(cov.sub(C), floor)
        - _logdet2(cov.sub(A + B + C), floor)
    )
    return max(val, 0.0)


def gaussian_entropy_gap(cov: CovMatrix, a, given=()) -> float:
    """h(A | given) minus the constant (|A|/2) log2(2 pi e), in bits."""
    A, G = _labels(a), _labels(given)
    floor = EIG_FLOOR * max(float(np.max(np.diag(cov.entries))), 1e-300)
    return 0.5 * (_logdet2(cov.sub(A + G), floor) - _logdet2(cov.sub(G), floor))


def oracle_inner(ch: ChannelParams, p: InnerParams) -> tuple[RateConstraints, float]:
    """The three inner rates and the binning admissibility term, via log-dets.

    Rate entries are clamped at 0; a negative admissibility term is returned as is.
    """
    cov = assemble_inner_covariance(ch, p)
    penalty = gaussian_cmi(cov, "U2", "S", "U1")
    r1_a = gaussian_cmi(cov, "X1", "Y", ("U1", "U2"))
    r1_b = gaussian_cmi(cov, ("X1", "U2"), "Y", "U1") - penalty
    sum_c = gaussian_cmi(cov, ("X1", "U1", "U2"), "Y") - penalty
    feas = gaussian_cmi(cov, "U2", "Y", ("U1", "X1")) - penalty
    return RateConstraints(r1_a, max(r1_b, 0.0), max(sum_c, 0.0)), feas


def oracle_inner_raw(ch: ChannelParams, p: InnerParams) -> tuple[float, float, float, float]:
    """Unclamped (r1_a, r1_b, sum_c, admissibility) for diagnostics."""
    cov = assemble_inner_covariance(ch, p)
    penalty = gaussian_cmi(cov, "U2", "S", "U1")
    return (
        gaussian_cmi(cov, "X1", "Y", ("U1", "U2")),
        gaussian_cmi(cov, ("X1", "U2"), "Y", "U1") - penalty,
        gaussian_cmi(cov, ("X1", "U1", "U2"), "Y") - penalty,
        gaussian_cmi(cov, "U2", "Y", ("U1", "X1")) - penalty,
    )


def oracle_outer(ch: ChannelParams, p: OuterParams) -> RateConstraints:
    cov = assemble_outer_covariance(ch, p)
    r1_a = gaussian_cmi(cov, "X1", "Y", ("S", "X2"))
    sum_c = gaussian_cmi(cov, ("X1", "X2"), "Y", "S") - gaussian_cmi(cov, "X1", "S", "Y")
    return RateConstraints(r1_a, math.inf, max(sum_c, 0.0))


def draw_inner_case(rng: np.random.Generator, power_range=(0.1, 10.0)):
    """One random (channel, inner parameters) pair; the caller filters feasibility.

    Powers are log-uniform; Q is drawn strictly positive because the closed
    forms keep a rho^2 P2 term at Q = 0 that the construction does not.
    """
    lo, hi = np.log(power_range[0]), np.log(power_range[1])
    p1, p2, q, n0 = np.exp(rng.uniform(lo, hi, size=4))
    ch = ChannelParams(float(p1), float(p2), float(q), float(n0))
    theta = float(rng.uniform(0.0, 1.0))
    xi = float(rng.uniform(0.0, 1.0))
    rho = -float(rng.uniform(0.0, 1.0)) * math.sqrt(1.0 - xi)
    alpha = float(rng.uniform(-2.0, 3.0))
    return ch, InnerParams(theta, xi, rho, alpha)


def draw_outer_case(rng: np.random.Generator, power_range=(0.1, 10.0)):
    lo, hi = np.log(power_range[0]), np.log(power_range[1])
    p1, p2, q, n0 = np.exp(rng.uniform(lo, hi, size=4))
    ch = ChannelParams(float(p1), float(p2), float(q), float(n0))
    # uniform on the quarter disk
    r = math.sqrt(float(rng.uniform()))
    phi = float(rng.uniform(0.0, math.pi / 2))
    return ch, OuterParams(min(r * math.cos(phi), 1.0), max(-r * math.sin(phi), -1.0))
