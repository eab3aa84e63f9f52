"""Seeded DM searches on random binary channels: how far the inner search
ends up from the outer search, channel by channel.

    python3 scripts/dm_random_channels.py [--channels 20] [--budget 2000] [--seed 7]
"""
import argparse

import numpy as np

from statemac.discrete import random_channel
from statemac.geometry import max_shortfall
from statemac.search import dm_inner_pool, dm_outer_pool, pool_boundary, shared_grid

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--channels", type=int, default=20)
    ap.add_argument("--budget", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--u", type=int, default=2, help="|U1| = |U2|")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'#':>3} {'inner R1(0)':>11} {'outer R1(0)':>11} {'inner Rc max':>12} {'outer Rc max':>12} {'inner-outer':>11}")
    for k in range(args.channels):
        ch = random_channel(rng)
        ip = dm_inner_pool(ch, args.u, args.u, args.budget, args.seed + k)
        op = dm_outer_pool(ch, 2 * args.budget, args.seed + k)
        grid = shared_grid(ip, op)
        inner, outer = pool_boundary(ip, grid), pool_boundary(op, grid)
        print(f"{k:3d} {inner.r1_max[0]:11.4f} {outer.r1_max[0]:11.4f} {ip[1].max():12.4f} {op[1].max():12.4f}"
              f" {max_shortfall(outer, inner):11.4f}")
