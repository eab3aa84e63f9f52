"""Projection of the rate-splitting system onto (Rc, R1).

The decoder's conditions are stated for the split Rc = Rc1 + Rc2:

    R1 <= a,   R1 <= b,   Rc + R1 <= c,   Rc2 + R1 <= b,   Rc2 <= d,
    Rc1 >= 0,  Rc2 >= 0,  R1 >= 0,

with a = I(X1;Y|U1,U2), b = I(X1,U2;Y|U1) - I(U2;S|U1),
c = I(X1,U1,U2;Y) - I(U2;S|U1) and d = I(U2;Y|U1,X1) - I(U2;S|U1).
Eliminating Rc2 leaves the three-inequality slice together with d >= 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

EPS = 1e-9


@dataclass(frozen=True)
class Inequality:
    """sum(coef[v] * v) <= rhs over named variables."""

    coef: tuple[tuple[str, Fraction], ...]
    rhs: Fraction

    @classmethod
    def make(cls, coef: dict, rhs) -> "Inequality":
        items = tuple(sorted((k, Fraction(v)) for k, v in coef.items() if Fraction(v) != 0))
        return cls(items, Fraction(rhs))

    def get(self, var: str) -> Fraction:
        return dict(self.coef).get(var, Fraction(0))

    def holds(self, point: dict, tol: float = EPS) -> bool:
        lhs = sum(float(c) * point[v] for v, c in self.coef)
        return lhs <= float(self.rhs) + tol


def eliminate(system: Sequence[Inequality], var: str) -> list[Inequality]:
    """One Fourier-Motzkin step removing ``var``; exact rational arithmetic.

    Rows that are duplicates or trivially true (no variables, rhs >= 0) are dropped.
    """
    pos, neg, rest = [], [], []
    for row in system:
        c = row.get(var)
        (pos if c > 0 else neg if c < 0 else rest).append(row)
    out = list(rest)
    for p in pos:
        cp = p.get(var)
        for n in neg:
            cn = -n.get(var)
            coef: dict[str, Fraction] = {}
            for v, c in p.coef:
                coef[v] = coef.get(v, 0) + c * cn
            for v, c in n.coef:
                coef[v] = coef.get(v, 0) + c * cp
            coef.pop(var, None)
            out.append(Inequality.make(coef, p.rhs * cn + n.rhs * cp))
    uniq: list[Inequality] = []
    for row in out:
        if not row.coef and row.rhs >= 0:
            continue
        # scale so the rows compare canonically
        lead = abs(row.coef[0][1]) if row.coef else 1
        canon = Inequality(tuple((v, c / lead) for v, c in row.coef), row.rhs / lead)
        if canon not in uniq:
            uniq.append(canon)
    return uniq


def split_system(a, b, c, d) -> list[Inequality]:
    """The five decoding conditions in (Rc, R1, Rc2), Rc1 = Rc - Rc2 substituted."""
    return [
        Inequality.make({"R1": 1}, a),
        Inequality.make({"R1": 1}, b),
        Inequality.make({"Rc": 1, "R1": 1}, c),
        Inequality.make({"Rc2": 1, "R1": 1}, b),
        Inequality.make({"Rc2": 1}, d),
        Inequality.make({"Rc2": 1, "Rc": -1}, 0),   # Rc1 >= 0
        Inequality.make({"Rc2": -1}, 0),
        Inequality.make({"R1": -1}, 0),
        Inequality.make({"Rc": -1}, 0),
    ]


def projected_system(a, b, c, d) -> list[Inequality]:
    return eliminate(split_system(a, b, c, d), "Rc2")


def fm_equivalence_check(a: float, b: float, c: float, d: float, grid_step: float = 0.05) -> bool:
    """Compare the split system, with Rc2 enumerated on the grid, to the three-inequality slice.

    Every (Rc, R1) on the grid with step ``grid_step`` is classified twice: by
    searching Rc2 in {0, step, ..., Rc} against all five conditions, and by
    R1 <= min(a, b), Rc + R1 <= c directly. Returns True when the two sets
    coincide. A non-positive d puts the distribution outside the admissible
    set, so there is nothing to project and the check returns True vacuously.
    """
    for name, v in (("a", a), ("b", b), ("c", c), ("d", d)):
        if not np.isfinite(v) or v < 0:
            raise ValueError(f"{name} must be finite and non-negative, got {v}")
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    if d <= 0:
        return True
    n = int(np.floor(c / grid_step + EPS)) + 2
    ticks = np.arange(n + 1) * grid_step
    RC, R1 = np.meshgrid(ticks, ticks, indexing="ij")
    direct = (R1 <= a + EPS) & (R1 <= b + EPS) & (RC + R1 <= c + EPS)

    split = np.zeros_like(direct)
    for rc2 in ticks:
        split |= (
            (R1 <= a + EPS) & (R1 <= b + EPS) & (RC + R1 <= c + EPS)
            & (rc2 + R1 <= b + EPS) & (rc2 <= d + EPS)
            & (rc2 <= RC + EPS)
        )
    return bool(np.array_equal(split, direct))


def fm_grid_sweep(values=None, grid_step: float = 0.05):
    """Run the check over values^4 with d > 0; returns (checked, failures)."""
    if values is None:
        values = np.round(np.arange(0, 2.0001, 0.25), 10)
    failures = []
    checked = 0
    for a in values:
        for b in values:
            for c in values:
                for d in values:
                    if d <= 0:
                        continue
                    checked += 1
                    if not fm_equivalence_check(a, b, c, d, grid_step):
                        failures.append((a, b, c, d))
    return checked, failures
