"""Gap between the computed inner corners and the strong-interference reference
as P grows, with P1 = P2 = P, N = 1 and Q = 10 P.

    python3 scripts/strong_interference_trend.py [--powers 1e2 1e3 1e4 1e5]
"""
import argparse

from statemac.gaussian import (
    DEFAULT_GRID,
    ChannelParams,
    GridSpec,
    strong_interference_gaps,
    strong_interference_reference,
)

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--powers", type=float, nargs="+", default=[1e2, 1e3, 1e4])
    ap.add_argument("--grid", type=int, default=None, help="points per inner parameter axis")
    args = ap.parse_args()
    g = DEFAULT_GRID if args.grid is None else GridSpec.with_resolution(args.grid)

    print(f"{'P':>10} {'ref R1':>9} {'ref Rc':>9} {'gap R1':>8} {'gap Rc':>8}")
    for P in args.powers:
        ch = ChannelParams(P, P, 10 * P, 1.0)
        ref = strong_interference_reference(ch)
        g1, g2 = strong_interference_gaps(ch, g)
        print(f"{P:10.0f} {ref.r1_a:9.4f} {ref.sum_c:9.4f} {g1:8.2%} {g2:8.2%}")
