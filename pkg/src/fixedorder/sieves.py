"""Small numpy sieves shared by the enumeration and the Euler products."""

from __future__ import annotations

import math

import numpy as np


def smallest_prime_factors(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.arange(limit + 1)
    spf[spf == 0] = idx[spf == 0]
    return spf


def primes_up_to(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.flatnonzero(is_p)


def split_mask(primes: np.ndarray, discriminant: int) -> np.ndarray:
    """True where p splits in Q(sqrt(D)) for D = -4 or -3."""
    return primes % abs(discriminant) == 1


def ramified_mask(primes: np.ndarray, discriminant: int) -> np.ndarray:
    return primes == (2 if discriminant == -4 else 3)
