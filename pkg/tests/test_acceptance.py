"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` or ``python3 tests/test_acceptance.py``.
"""
import contextlib
import io
import sys
import tempfile
import time
from pathlib import Path

import pytest

from statemac import verify
from statemac.cli import main as cli_main
from statemac.gaussian import ChannelParams, InnerParams, common_message_capacity, inner_constraints

CRITERIA = {}


def criterion(num, title):
    def wrap(fn):
        CRITERIA[num] = (title, fn)
        return fn
    return wrap


def report(num, title, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} criterion {num:>2} {title}: {detail}", flush=True)


def summarize(checks):
    ok = all(c.passed for c in checks)
    return ok, "; ".join(f"{c.name} err={c.max_error:.3g}" + (f" [{c.detail}]" if c.detail else "") for c in checks)


@criterion(1, "inner closed form equals log-det oracle (1000 draws, 1e-9 bits, <10 s)")
def c1():
    t0 = time.perf_counter()
    chk = verify.inner_oracle_agreement(trials=1000, seed=42, tol=1e-9)
    dt = time.perf_counter() - t0
    return chk.passed and dt < 10, f"max err {chk.max_error:.2e} bits, {chk.detail}, total {dt:.2f}s"


@criterion(2, "outer closed form equals log-det oracle (1000 draws, 1e-9 bits, <10 s)")
def c2():
    t0 = time.perf_counter()
    chk = verify.outer_oracle_agreement(trials=1000, seed=42, tol=1e-9)
    dt = time.perf_counter() - t0
    return chk.passed and dt < 10, f"max err {chk.max_error:.2e} bits, total {dt:.2f}s"


@criterion(3, "inner <= outer + 1e-6 at the three figure presets")
def c3():
    return summarize([verify.containment(k, ch, tol=1e-6) for k, ch in verify.FIGURE_PRESETS.items()])


@criterion(4, "Q=0 inner and outer boundaries agree within 0.02 bits")
def c4():
    return summarize([verify.zero_state_match(ChannelParams(p1, p2, 0.0, n0), tol=0.02)
                      for p1, p2, n0 in ((1, 1, 1), (2.5, 2, 2))])


@criterion(5, "common-message bounds match; Q=0 value 1.16096 +- 0.02")
def c5():
    ok, detail = summarize(verify.common_message())
    lo, hi = common_message_capacity(ChannelParams(1, 1, 0, 1))
    ok = ok and abs(lo - 1.16096) <= 0.02 and abs(hi - 1.16096) <= 0.02
    return ok, detail


@criterion(6, "helper rate 0.5 +- 0.01 at Q in {10,100,1000}, attained exactly by the inner bound")
def c6():
    ok, detail = summarize(verify.helper())
    c = inner_constraints(ChannelParams(1, 3, 10, 1), InnerParams(1, 1, 0, 1))
    exact = c is not None and c.r1_a == 0.5 and c.r1_cap >= 0.5 and c.sum_c >= 0.5
    return ok and exact, detail + f"; closed form at theta=xi=alpha=1, rho=0 gives r1_a={c.r1_a!r}"


@criterion(7, "strong-interference corner gaps shrink in P and are < 5% at P=1e4")
def c7():
    return summarize([verify.strong_interference_trend()])


@criterion(8, "Fourier-Motzkin equivalence on {0,0.25,...,2}^4 with d>0 (<60 s)")
def c8():
    t0 = time.perf_counter()
    ok, detail = summarize(verify.fm_suite())
    dt = time.perf_counter() - t0
    return ok and dt < 60, detail


@criterion(9, "DM search: XOR corners within 0.02, outer dominates; 20 random channels within 0.02")
def c9():
    return summarize(verify.xor_corners(budget=2000, seed=7, tol=0.02)
                     + [verify.random_channel_containment(channels=20, seed=7, tol=0.02)])


@criterion(10, "repeated figure/sweep invocations give byte-identical CSVs")
def c10():
    runs = [["figure", "fig2"], ["figure", "fig4", "--envelope"],
            ["sweep", "--p1", "1", "--p2", "1", "--q", "0.5", "--n0", "1", "--alpha-range", "-1:2"]]
    bad = []
    with tempfile.TemporaryDirectory() as tmp:
        for k, argv in enumerate(runs):
            outs = []
            for rep in range(2):
                d = Path(tmp) / f"{k}_{rep}"
                with contextlib.redirect_stdout(io.StringIO()):
                    code = cli_main(argv + ["--out", str(d)])
                if code != 0:
                    bad.append(" ".join(argv) + " (exit code)")
                outs.append([(d / n).read_bytes() for n in ("inner.csv", "outer.csv")])
            if outs[0] != outs[1]:
                bad.append(" ".join(argv))
    return not bad, f"{len(runs)} invocations repeated" + (f", differing: {bad}" if bad else "")


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, capsys):
    title, fn = CRITERIA[num]
    ok, detail = fn()
    with capsys.disabled():
        print()
        report(num, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num in sorted(CRITERIA):
        title, fn = CRITERIA[num]
        ok, detail = fn()
        report(num, title, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
