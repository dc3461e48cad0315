"""Count of family characters with conductor <= X against r_K / zeta_K(2) * P * c_j * X.

Every admissible conductor q = p_1 ... p_k carries 2^k characters (one
primary generator per choice of prime above each p_i), so the count is a
multiplicative sieve.  This checks the constant in front of Z_j without
touching any L-value.

    python scripts/family_count.py --X 1e5 1e6 1e7
"""

from __future__ import annotations

import argparse

import numpy as np

from fixedorder.characters import characters_of_conductor
from fixedorder.constants import euler_P, j_factor, residue_zeta_K, zeta_K_at_2
from fixedorder.quadratic_ring import ring_for_order
from fixedorder.sieves import primes_up_to, split_mask


def family_counts(j: int, limit: int) -> np.ndarray:
    """Cumulative count of family characters with conductor <= x, for x = 0..limit."""
    ring = ring_for_order(j)
    per_q = np.ones(limit + 1, dtype=np.int64)
    per_q[:2] = 0
    primes = primes_up_to(limit)
    for p, split in zip(primes.tolist(), split_mask(primes, ring.discriminant).tolist()):
        if split and j % p:
            per_q[p::p] *= 2
            per_q[p * p :: p * p] = 0
        else:
            per_q[p::p] = 0
    return np.cumsum(per_q)


def density(j: int) -> float:
    ring = ring_for_order(j)
    return residue_zeta_K(ring).value / zeta_K_at_2(ring).value * euler_P(j).value * j_factor(j)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--j", type=int, nargs="+", default=[3, 4, 6])
    p.add_argument("--X", type=float, nargs="+", default=[1e5, 1e6, 1e7])
    args = p.parse_args()
    Xs = [int(x) for x in args.X]
    for j in args.j:
        counts = family_counts(j, max(Xs))
        brute = sum(len(characters_of_conductor(j, q)) for q in range(2, 2001))
        assert brute == counts[2000], (brute, counts[2000])
        c = density(j)
        print(f"j={j}  density {c:.10f}")
        for X in Xs:
            print(f"  X={X:>10d}  count {counts[X]:>10d}  count/(cX) {counts[X] / (c * X):.8f}")


if __name__ == "__main__":
    main()
