"""Ratio lhs / (C_j Q Phi-hat(1)) against alpha at fixed Q.

The secondary pole sits at relative size Q^{-(1/2 - 1/j + alpha)}, so the
ratio should approach 1 faster as alpha grows.

    python scripts/alpha_diagnostics.py --j 3 --Q 4000 --alpha 0 0.1 0.25 0.4 0.49
"""

from __future__ import annotations

import argparse

from fixedorder.moment_harness import LValueCache, first_moment, secondary_pole
from fixedorder.parallel import make_mapper


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--j", type=int, default=3)
    p.add_argument("--Q", type=float, default=4000)
    p.add_argument("--alpha", type=float, nargs="+", default=[0.0, 0.1, 0.25, 0.4, 0.49])
    p.add_argument("--phi", default="default")
    p.add_argument("--threads", type=int)
    args = p.parse_args()
    mapper = make_mapper(args.threads)
    print("j,Q,alpha,ratio,ratio_at_zero,secondary_relative_size")
    for a in args.alpha:
        row = first_moment(args.j, args.Q, a, args.phi, mapper, LValueCache())
        rel = args.Q ** (secondary_pole(args.j, a) - 1)
        print(f"{args.j},{args.Q:g},{a:g},{row.ratio:.10f},{row.ratio_at_zero:.10f},{rel:.4g}")


if __name__ == "__main__":
    main()
