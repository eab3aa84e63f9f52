"""Write inner/outer CSVs and plot scripts for the three Gaussian presets.

    python3 scripts/reproduce_figures.py --out runs/figures [--envelope] [--grid 31]
"""
import argparse
import sys
from pathlib import Path

from statemac.cli import main as cli
from statemac.verify import FIGURE_PRESETS


def run(out: Path, extra):
    for name in sorted(FIGURE_PRESETS):
        code = cli(["figure", name, "--out", str(out / name), *extra])
        if code:
            return code
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("runs/figures"))
    args, extra = ap.parse_known_args()
    sys.exit(run(args.out, extra))
