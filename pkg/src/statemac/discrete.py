"""Discrete memoryless bounds evaluated exactly on dense joint pmfs.

Axis letters used throughout: S state, U1 and U2 auxiliaries, X1 and X2
channel inputs, Y output. Channel kernels are stored as W[x1, x2, s, y].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import RateConstraints

INNER_AXES = ("S", "U1", "U2", "X1", "X2", "Y")
OUTER_AXES = ("S", "X1", "X2", "Y")
SUM_TOL = 1e-12
ADMISSIBLE_TOL = 1e-12


def _check_slices(arr: np.ndarray, name: str, tol: float = SUM_TOL) -> np.ndarray:
    arr = np.asarray(arr, dtype=float)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name}: probabilities must be finite and non-negative")
    if not np.allclose(arr.sum(axis=-1), 1.0, rtol=0, atol=tol):
        raise ValueError(f"{name}: every conditional slice must sum to 1")
    return arr


@dataclass(frozen=True, eq=False)
class FiniteDist:
    probabilities: np.ndarray

    def __post_init__(self):
        p = _check_slices(np.atleast_1d(self.probabilities), "FiniteDist")
        if p.ndim != 1:
            raise ValueError("FiniteDist must be one-dimensional")
        object.__setattr__(self, "probabilities", p)

    def __len__(self):
        return self.probabilities.size


@dataclass(frozen=True, eq=False)
class DmChannel:
    state_dist: np.ndarray
    kernel: np.ndarray  # W[x1, x2, s, y]

    def __post_init__(self):
        ps = self.state_dist.probabilities if isinstance(self.state_dist, FiniteDist) else self.state_dist
        ps = FiniteDist(np.asarray(ps, dtype=float)).probabilities
        w = _check_slices(self.kernel, "kernel")
        if w.ndim != 4 or w.shape[2] != ps.size:
            raise ValueError(f"kernel must have shape (X1, X2, S, Y) with |S|={ps.size}, got {w.shape}")
        object.__setattr__(self, "state_dist", ps)
        object.__setattr__(self, "kernel", w)

    @property
    def sizes(self) -> dict[str, int]:
        nx1, nx2, ns, ny = self.kernel.shape
        return {"S": ns, "X1": nx1, "X2": nx2, "Y": ny}

    @classmethod
    def deterministic(cls, state_dist, fn, sizes: Sequence[int]) -> "DmChannel":
        """Channel with y = fn(x1, x2, s); ``sizes`` is (|S|, |X1|, |X2|, |Y|)."""
        ns, nx1, nx2, ny = sizes
        w = np.zeros((nx1, nx2, ns, ny))
        for x1 in range(nx1):
            for x2 in range(nx2):
                for s in range(ns):
                    w[x1, x2, s, fn(x1, x2, s)] = 1.0
        return cls(np.asarray(state_dist, dtype=float), w)


def xor_channel() -> DmChannel:
    """Binary adder Y = X1 xor X2 with a trivial state."""
    return DmChannel.deterministic([1.0], lambda x1, x2, s: x1 ^ x2, (1, 2, 2, 2))


def random_channel(rng: np.random.Generator, sizes=(2, 2, 2, 2)) -> DmChannel:
    ns, nx1, nx2, ny = sizes
    return DmChannel(rng.dirichlet(np.ones(ns)), rng.dirichlet(np.ones(ny), size=(nx1, nx2, ns)))


@dataclass(frozen=True, eq=False)
class InnerFactorization:
    """P_U1, P_X1|U1, P_U2|U1,S and P_X2|U1,U2,S, conditioning axes first."""

    p_u1: np.ndarray                 # [u1]
    p_x1_given_u1: np.ndarray        # [u1, x1]
    p_u2_given_u1_s: np.ndarray      # [u1, s, u2]
    p_x2_given_u1_u2_s: np.ndarray   # [u1, u2, s, x2]

    def __post_init__(self):
        for name in ("p_u1", "p_x1_given_u1", "p_u2_given_u1_s", "p_x2_given_u1_u2_s"):
            object.__setattr__(self, name, _check_slices(getattr(self, name), name))
        nu1 = self.p_u1.shape[0]
        nu2 = self.p_u2_given_u1_s.shape[-1]
        if self.p_x1_given_u1.shape[0] != nu1 or self.p_u2_given_u1_s.shape[0] != nu1:
            raise ValueError("U1 alphabet sizes disagree")
        if self.p_x2_given_u1_u2_s.shape[:2] != (nu1, nu2):
            raise ValueError("U2 alphabet sizes disagree")
        if self.p_x2_given_u1_u2_s.shape[2] != self.p_u2_given_u1_s.shape[1]:
            raise ValueError("S alphabet sizes disagree")

    @classmethod
    def random(cls, rng, ch: DmChannel, u1_size: int, u2_size: int) -> "InnerFactorization":
        sz = ch.sizes
        return cls(
            rng.dirichlet(np.ones(u1_size)),
            rng.dirichlet(np.ones(sz["X1"]), size=u1_size),
            rng.dirichlet(np.ones(u2_size), size=(u1_size, sz["S"])),
            rng.dirichlet(np.ones(sz["X2"]), size=(u1_size, u2_size, sz["S"])),
        )


@dataclass(frozen=True, eq=False)
class OuterFactorization:
    p_x1: np.ndarray               # [x1]
    p_x2_given_x1_s: np.ndarray    # [x1, s, x2]

    def __post_init__(self):
        object.__setattr__(self, "p_x1", _check_slices(self.p_x1, "p_x1"))
        object.__setattr__(self, "p_x2_given_x1_s", _check_slices(self.p_x2_given_x1_s, "p_x2_given_x1_s"))
        if self.p_x2_given_x1_s.shape[0] != self.p_x1.shape[0]:
            raise ValueError("X1 alphabet sizes disagree")

    @classmethod
    def random(cls, rng, ch: DmChannel) -> "OuterFactorization":
        sz = ch.sizes
        return cls(rng.dirichlet(np.ones(sz["X1"])), rng.dirichlet(np.ones(sz["X2"]), size=(sz["X1"], sz["S"])))


@dataclass(frozen=True, eq=False)
class JointPmf:
    """Dense joint pmf; an optional leading batch axis is not labelled."""

    array: np.ndarray
    axes: tuple[str, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        arr = np.asarray(self.array, dtype=float)
        axes = tuple(self.axes)
        if len(set(axes)) != len(axes):
            raise ValueError("duplicate axis labels")
        if arr.ndim not in (len(axes), len(axes) + 1):
            raise ValueError(f"array rank {arr.ndim} does not match axes {axes}")
        if np.any(arr < -1e-15):
            raise ValueError("pmf entries must be non-negative")
        total = arr.sum(axis=tuple(range(arr.ndim - len(axes), arr.ndim)))
        if not np.allclose(total, 1.0, rtol=0, atol=1e-10):
            raise ValueError("pmf must have total mass 1")
        object.__setattr__(self, "array", arr)
        object.__setattr__(self, "axes", axes)

    @property
    def batched(self) -> bool:
        return self.array.ndim == len(self.axes) + 1

    def _pos(self, names: Iterable[str]) -> list[int]:
        off = 1 if self.batched else 0
        pos = []
        for n in names:
            if n not in self.axes:
                raise KeyError(f"unknown axis {n!r}; have {self.axes}")
            pos.append(self.axes.index(n) + off)
        return pos

    def marginal(self, names: Sequence[str]) -> np.ndarray:
        keep = set(self._pos(names))
        off = 1 if self.batched else 0
        drop = tuple(i for i in range(off, self.array.ndim) if i not in keep)
        return self.array.sum(axis=drop)

    def entropy(self, names: Iterable[str]) -> np.ndarray | float:
        """H(names) in bits. Cached per axis subset."""
        key = frozenset(names)
        if key not in self._cache:
            self._pos(key)
            if not key:
                h = np.zeros(self.array.shape[0]) if self.batched else 0.0
            else:
                m = self.marginal(sorted(key, key=self.axes.index))
                flat = m.reshape(m.shape[0], -1) if self.batched else m.ravel()
                with np.errstate(divide="ignore", invalid="ignore"):
                    terms = np.where(flat > 0, -flat * np.log2(np.where(flat > 0, flat, 1.0)), 0.0)
                h = terms.sum(axis=-1)
            self._cache[key] = h
        return self._cache[key]


def _axes(x) -> tuple[str, ...]:
    return (x,) if isinstance(x, str) else tuple(x)


def mutual_info(j: JointPmf, a, b, c=()):
    """I(A; B | C) in bits, with 0 log 0 = 0. Vectorized over a batch axis."""
    A, B, C = _axes(a), _axes(b), _axes(c)
    if not A or not B:
        raise ValueError("A and B must be non-empty")
    if set(A) & set(B) or set(A) & set(C) or set(B) & set(C):
        raise ValueError("axis sets must be disjoint")
    val = j.entropy(A + C) + j.entropy(B + C) - j.entropy(C) - j.entropy(A + B + C)
    return np.maximum(val, 0.0) if j.batched else max(float(val), 0.0)


def inner_joint_array(state_dist, kernel, p_u1, p_x1_u1, p_u2_u1s, p_x2_u1u2s):
    """Joint over (S, U1, U2, X1, X2, Y); every factor may carry a leading batch axis."""
    batched = np.ndim(p_u1) == 2
    b = "n" if batched else ""
    spec = f"s,{b}u,{b}ux,{b}usv,{b}uvsw,xwsy->{b}suvxwy"
    return np.einsum(spec, state_dist, p_u1, p_x1_u1, p_u2_u1s, p_x2_u1u2s, kernel, optimize=True)


def outer_joint_array(state_dist, kernel, p_x1, p_x2_x1s):
    batched = np.ndim(p_x1) == 2
    b = "n" if batched else ""
    return np.einsum(f"s,{b}x,{b}xsw,xwsy->{b}sxwy", state_dist, p_x1, p_x2_x1s, kernel, optimize=True)


def inner_joint(ch: DmChannel, f: InnerFactorization) -> JointPmf:
    sz = ch.sizes
    if f.p_x1_given_u1.shape[1] != sz["X1"] or f.p_x2_given_u1_u2_s.shape[-1] != sz["X2"]:
        raise ValueError("factorization input alphabets do not match the channel")
    if f.p_u2_given_u1_s.shape[1] != sz["S"]:
        raise ValueError("factorization state alphabet does not match the channel")
    arr = inner_joint_array(ch.state_dist, ch.kernel, f.p_u1, f.p_x1_given_u1, f.p_u2_given_u1_s, f.p_x2_given_u1_u2_s)
    return JointPmf(arr, INNER_AXES)


def outer_joint(ch: DmChannel, f: OuterFactorization) -> JointPmf:
    sz = ch.sizes
    if f.p_x1.shape[0] != sz["X1"] or f.p_x2_given_x1_s.shape[1:] != (sz["S"], sz["X2"]):
        raise ValueError("factorization alphabets do not match the channel")
    return JointPmf(outer_joint_array(ch.state_dist, ch.kernel, f.p_x1, f.p_x2_given_x1_s), OUTER_AXES)


def dm_inner_terms(j: JointPmf):
    """Unclamped (r1_a, r1_b, sum_c, admissibility) of the inner bound."""
    penalty = mutual_info(j, "U2", "S", "U1")
    r1_a = mutual_info(j, "X1", "Y", ("U1", "U2"))
    r1_b = mutual_info(j, ("X1", "U2"), "Y", "U1") - penalty
    sum_c = mutual_info(j, ("X1", "U1", "U2"), "Y") - penalty
    feas = mutual_info(j, "U2", "Y", ("U1", "X1")) - penalty
    return r1_a, r1_b, sum_c, feas


def is_admissible(feasibility_value) -> np.ndarray | bool:
    """Strict positivity of I(U2;Y|U1,X1) - I(U2;S|U1), up to 1e-12."""
    if np.ndim(feasibility_value):
        return np.asarray(feasibility_value) > ADMISSIBLE_TOL
    return bool(feasibility_value > ADMISSIBLE_TOL)


def dm_inner_constraints(j: JointPmf) -> tuple[RateConstraints, float]:
    """Inner-bound slice of one joint pmf plus its admissibility value.

    The slice is clamped at zero; use :func:`dm_inner_terms` for raw values and
    :func:`is_admissible` to apply the strict constraint.
    """
    if j.batched:
        raise ValueError("dm_inner_constraints takes a single pmf; use dm_inner_terms for batches")
    r1_a, r1_b, sum_c, feas = dm_inner_terms(j)
    return RateConstraints(max(r1_a, 0.0), max(r1_b, 0.0), max(sum_c, 0.0)), float(feas)


def dm_outer_terms(j: JointPmf):
    r1_a = mutual_info(j, "X1", "Y", ("S", "X2"))
    sum_c = mutual_info(j, ("X1", "X2"), "Y", "S") - mutual_info(j, "X1", "S", "Y")
    return r1_a, sum_c


def dm_outer_constraints(j: JointPmf) -> RateConstraints:
    if j.batched:
        raise ValueError("dm_outer_constraints takes a single pmf; use dm_outer_terms for batches")
    r1_a, sum_c = dm_outer_terms(j)
    return RateConstraints(max(r1_a, 0.0), math.inf, max(sum_c, 0.0))


# --- text format -----------------------------------------------------------
#   line 1: |S| |X1| |X2| |Y|
#   line 2: state pmf (|S| numbers)
#   then one line per (x1, x2, s) in row-major order with |Y| probabilities.
# Blank lines and '#' comments are ignored.

def parse_dm_channel(text: str) -> DmChannel:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if len(rows) < 2:
        raise ValueError("channel file needs a size line and a state pmf line")
    try:
        sizes = [int(v) for v in rows[0]]
    except ValueError:
        raise ValueError(f"size line must hold four integers, got {rows[0]}") from None
    if len(sizes) != 4 or min(sizes) < 1:
        raise ValueError(f"size line must hold four positive integers, got {rows[0]}")
    ns, nx1, nx2, ny = sizes
    try:
        ps = np.array([float(v) for v in rows[1]])
        body = [[float(v) for v in r] for r in rows[2:]]
    except ValueError as e:
        raise ValueError(f"non-numeric probability: {e}") from None
    if ps.size != ns:
        raise ValueError(f"state pmf has {ps.size} entries, expected {ns}")
    if len(body) != nx1 * nx2 * ns:
        raise ValueError(f"expected {nx1 * nx2 * ns} kernel rows, got {len(body)}")
    if any(len(r) != ny for r in body):
        raise ValueError(f"every kernel row must hold {ny} probabilities")
    return DmChannel(ps, np.array(body).reshape(nx1, nx2, ns, ny))


def format_dm_channel(ch: DmChannel) -> str:
    nx1, nx2, ns, ny = ch.kernel.shape
    lines = [f"{ns} {nx1} {nx2} {ny}", " ".join(repr(float(v)) for v in ch.state_dist)]
    for row in ch.kernel.reshape(-1, ny):
        lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def load_dm_channel(path) -> DmChannel:
    with open(path, encoding="utf-8") as fh:
        return parse_dm_channel(fh.read())
