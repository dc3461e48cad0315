"""Exhaustive check of g_K(1, dn) = conj((d/n)_j)^{j-2} g_K(1, d) g_K(1, n).

Runs over every square-free rational primary d <= --max-d and every primary
n with N(n) <= --max-norm, coprime to d.  The acceptance suite samples
this grid; the sweep covers all of it (about ten minutes single-core).

    python scripts/grel_sweep.py --j 3 4 6 --max-d 50 --max-norm 500 --threads 4
"""

from __future__ import annotations

import argparse
import time

from fixedorder.gauss_sums import DEFAULT_TOLERANCE, primary_elements, rational_primary_moduli, verify_identity
from fixedorder.parallel import make_mapper
from fixedorder.power_residue import residue_symbol


def residual(job: tuple) -> float:
    j, d, n = job
    return verify_identity("grel", j, d=d, n=n)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--j", type=int, nargs="+", default=[3, 4, 6])
    p.add_argument("--max-d", type=int, default=50)
    p.add_argument("--max-norm", type=int, default=500)
    p.add_argument("--threads", type=int)
    args = p.parse_args()
    mapper = make_mapper(args.threads)
    failed = False
    for j in args.j:
        start = time.perf_counter()
        ns = primary_elements(j, args.max_norm)
        jobs = [(j, d, n) for d in rational_primary_moduli(j, args.max_d) for n in ns
                if not residue_symbol(d, n, j).is_zero]
        worst = max(mapper(residual, jobs))
        ok = worst <= DEFAULT_TOLERANCE
        failed |= not ok
        print(f"j={j}  pairs {len(jobs)}  max residual {worst:.3e}  "
              f"{'PASS' if ok else 'FAIL'}  {time.perf_counter() - start:.0f}s", flush=True)
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
