"""Command-line entry point: figure presets, sweeps, DM searches and verification."""
from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import verify
from .discrete import load_dm_channel
from .gaussian import DEFAULT_GRID, ChannelParams, GridSpec, region_pair
from .geometry import RegionBoundary, upper_concave_envelope
from .search import dm_inner_pool, dm_outer_pool, pool_boundary, shared_grid

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

PLOT_TEMPLATE = '''"""Plot the inner (dashed) and outer (solid) boundaries written next to this file."""
import csv
from pathlib import Path

import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent


def load(name):
    with open(here / name, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [float(r["rc"]) for r in rows], [float(r["r1"]) for r in rows]


fig, ax = plt.subplots(figsize=(5, 4))
rc, r1 = load("outer.csv")
ax.plot(rc, r1, "k-", label="outer")
rc, r1 = load("inner.csv")
ax.plot(rc, r1, "k--", label="inner")
ax.set_xlabel("Rc [bits]")
ax.set_ylabel("R1 [bits]")
ax.set_title({title!r})
ax.set_xlim(left=0)
ax.set_ylim(bottom=0)
ax.legend()
fig.tight_layout()
fig.savefig(here / "region.png", dpi=150)
'''


@dataclass
class RunConfig:
    out: Path
    channel: ChannelParams | None = None
    channel_file: Path | None = None
    grid: GridSpec = field(default_factory=lambda: DEFAULT_GRID)
    seed: int = 0
    envelope: bool = False
    title: str = ""


class UsageError(Exception):
    pass


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the file the usual umask-derived mode
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def boundary_csv(b: RegionBoundary) -> str:
    # explicit formatting keeps the output independent of the locale
    lines = ["rc,r1"]
    lines += ["%.6f,%.6f" % (0.0 if abs(rc) < 5e-7 else rc, 0.0 if abs(r1) < 5e-7 else r1)
              for rc, r1 in b.points()]
    return "\n".join(lines) + "\n"


def write_run(cfg: RunConfig, inner: RegionBoundary, outer: RegionBoundary) -> list[Path]:
    if cfg.envelope:
        inner, outer = upper_concave_envelope(inner), upper_concave_envelope(outer)
    out = Path(cfg.out)
    paths = [out / "inner.csv", out / "outer.csv", out / "plot.py"]
    _atomic_write(paths[0], boundary_csv(inner))
    _atomic_write(paths[1], boundary_csv(outer))
    _atomic_write(paths[2], PLOT_TEMPLATE.format(title=cfg.title))
    return paths


def _alpha_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
        raise argparse.ArgumentTypeError(f"alpha range must satisfy LO <= HI, got {text!r}")
    return lo, hi


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _grid_from_args(args) -> GridSpec:
    kw = {}
    if args.alpha_range is not None:
        kw["alpha_range"] = args.alpha_range
    if args.rc_points is not None:
        kw["rc_points"] = args.rc_points
    try:
        if args.grid is not None:
            return GridSpec.with_resolution(args.grid, **kw)
        return replace(DEFAULT_GRID, **kw)
    except ValueError as e:
        raise UsageError(str(e))


def _add_grid_flags(p):
    p.add_argument("--grid", type=_positive_int, default=None,
                   help="points per inner parameter axis (outer axes get 2N-1); default 21")
    p.add_argument("--alpha-range", type=_alpha_range, default=None, metavar="LO:HI",
                   help="binning scale range, default -2:3")
    p.add_argument("--rc-points", type=_positive_int, default=None, help="rc grid size, default 201")
    p.add_argument("--envelope", action="store_true", help="write the time-sharing envelope instead of the raw union")
    p.add_argument("--out", type=Path, required=True, help="output directory")


def cmd_figure(args) -> int:
    ch = verify.FIGURE_PRESETS[args.preset]
    cfg = RunConfig(out=args.out, channel=ch, grid=_grid_from_args(args), envelope=args.envelope,
                    title=f"{args.preset}: P1={ch.p1:g}, P2={ch.p2:g}, Q={ch.q:g}, N={ch.n0:g}")
    return _run_gaussian(cfg)


def cmd_sweep(args) -> int:
    try:
        ch = ChannelParams(args.p1, args.p2, args.q, args.n0)
    except ValueError as e:
        raise UsageError(str(e))
    cfg = RunConfig(out=args.out, channel=ch, grid=_grid_from_args(args), envelope=args.envelope,
                    title=f"P1={ch.p1:g}, P2={ch.p2:g}, Q={ch.q:g}, N={ch.n0:g}")
    return _run_gaussian(cfg)


def _run_gaussian(cfg: RunConfig) -> int:
    inner, outer = region_pair(cfg.channel, cfg.grid)
    for p in write_run(cfg, inner, outer):
        print(p)
    return EXIT_OK


def cmd_dm(args) -> int:
    try:
        ch = load_dm_channel(args.channel)
    except OSError as e:
        raise UsageError(f"cannot read {args.channel}: {e}")
    except ValueError as e:
        raise UsageError(f"{args.channel}: {e}")
    rc_points = args.rc_points or DEFAULT_GRID.rc_points
    cfg = RunConfig(out=args.out, channel_file=args.channel, seed=args.seed, envelope=args.envelope,
                    title=f"{Path(args.channel).name}: |U1|={args.u1}, |U2|={args.u2}, seed {args.seed}")
    try:
        ip = dm_inner_pool(ch, args.u1, args.u2, args.budget, args.seed, rc_points)
        op = dm_outer_pool(ch, args.budget, args.seed, rc_points)
    except ValueError as e:
        raise UsageError(str(e))
    grid = shared_grid(ip, op, rc_points=rc_points)
    for p in write_run(cfg, pool_boundary(ip, grid), pool_boundary(op, grid)):
        print(p)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite == "oracle":
        checks = verify.oracle_suite(args.trials or 1000, 42 if args.seed is None else args.seed,
                                     1e-9 if args.tol is None else args.tol)
    elif args.suite == "special-cases":
        checks = verify.special_cases_suite()
    elif args.suite == "dm":
        checks = verify.dm_suite(args.trials or 20, 7 if args.seed is None else args.seed)
    else:
        checks = verify.fm_suite()
    for c in checks:
        print(c.line())
    ok = all(c.passed for c in checks)
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="statemac",
                                 description="Rate-region bounds for a MAC with degraded message sets and state known at one encoder.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("figure", help="Gaussian inner/outer boundaries for a preset")
    p.add_argument("preset", choices=sorted(verify.FIGURE_PRESETS))
    _add_grid_flags(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("sweep", help="Gaussian inner/outer boundaries for given powers")
    for name in ("p1", "p2", "q", "n0"):
        p.add_argument(f"--{name}", type=float, required=True)
    _add_grid_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("dm", help="seeded search of the discrete bounds for a channel file")
    p.add_argument("--channel", type=Path, required=True, help="channel file (S X1 X2 Y sizes, state pmf, kernel rows)")
    p.add_argument("--u1", type=_positive_int, default=2)
    p.add_argument("--u2", type=_positive_int, default=2)
    p.add_argument("--budget", type=_nonneg_int, default=2000)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--rc-points", type=_positive_int, default=None)
    p.add_argument("--envelope", action="store_true")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_dm)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=["oracle", "special-cases", "dm", "fm"])
    p.add_argument("--trials", type=_positive_int, default=None,
                   help="oracle draws (default 1000) or random DM channels (default 20)")
    p.add_argument("--seed", type=_nonneg_int, default=None)
    p.add_argument("--tol", type=float, default=None, help="oracle agreement tolerance in bits, default 1e-9")
    p.set_defaults(func=cmd_verify)
    return ap


def _join_alpha_range(argv):
    # a negative LO (e.g. -2:3) would otherwise be read as an option
    out, it = [], iter(argv)
    for a in it:
        if a == "--alpha-range":
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    ap = build_parser()
    argv = _join_alpha_range(sys.argv[1:] if argv is None else list(argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as e:
        print(f"statemac: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"statemac: I/O error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
