"""Primitive Dirichlet characters of order 3, 4 and 6 as residue symbols.

A character of the family is stored as the pair (j, n) with n primary
(E-primary for j = 6), square-free and free of rational prime divisors; it
acts on rational integers by m -> (m/n)_j and has conductor q = N(n).

The rational-side oracle (:func:`rational_family`) knows nothing about
O_K: it builds every character of (Z/q)^x from generators and tests the
primitivity conditions by brute force.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .power_residue import RootOfUnity, symbol_exponents
from .sieves import smallest_prime_factors
from .quadratic_ring import (
    EISENSTEIN,
    QInt,
    factor_integer,
    format_qint,
    normalize_primary,
    primes_above,
    ring_for_order,
)

FAMILY_ORDERS = (3, 4, 6)
ORACLE_LIMIT = 10_000


def primary_mode(j: int) -> str:
    return "e_primary" if j == 6 else "primary"


@dataclass(frozen=True)
class PrimitiveCharacter:
    j: int
    n: QInt
    q: int

    @property
    def ring(self):
        return self.n.ring

    def table(self) -> np.ndarray:
        """Exponents k of chi(a) = exp(2 pi i k/j) for a = 0..q-1 (-1 for zero)."""
        return character_table(self)

    def values(self) -> np.ndarray:
        return exponents_to_complex(self.table(), self.j)

    @property
    def parity(self) -> int:
        """a in {0, 1} with chi(-1) = (-1)^a."""
        k = int(self.table()[self.q - 1])
        return 0 if k == 0 else 1

    def conjugate(self) -> "PrimitiveCharacter":
        nbar = normalize_primary(self.n.conjugate(), primary_mode(self.j))[1]
        return PrimitiveCharacter(self.j, nbar, self.q)

    def label(self) -> str:
        return f"chi_{self.j},{format_qint(self.n)}"


@lru_cache(maxsize=4096)
def character_table(chi: PrimitiveCharacter) -> np.ndarray:
    table = symbol_exponents(chi.n, chi.j, np.arange(chi.q))
    table.setflags(write=False)
    return table


def exponents_to_complex(table: np.ndarray, j: int) -> np.ndarray:
    roots = np.exp(2j * np.pi * np.arange(j) / j)
    out = roots[np.where(table < 0, 0, table)]
    out[table < 0] = 0
    return out


def evaluate(chi: PrimitiveCharacter, m: int) -> RootOfUnity:
    k = int(chi.table()[m % chi.q])
    return RootOfUnity(chi.j, None if k < 0 else k)


def _split_ok(p: int, j: int) -> bool:
    return p % 4 == 1 if j == 4 else p % 3 == 1


def _factor_with(spf: np.ndarray, q: int) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    while q > 1:
        p = int(spf[q])
        e = 0
        while q % p == 0:
            q //= p
            e += 1
        out.append((p, e))
    return out


def admissible_conductors(j: int, limit: int) -> list[int]:
    """q in (1, limit] that are square-free products of primes split in K."""
    spf = smallest_prime_factors(max(limit, 2))
    out = []
    for q in range(2, limit + 1):
        fac = _factor_with(spf, q)
        if all(e == 1 and _split_ok(p, j) for p, e in fac):
            out.append(q)
    return out


def characters_of_conductor(j: int, q: int) -> list[PrimitiveCharacter]:
    if j not in FAMILY_ORDERS:
        raise ValueError(f"order {j} not in the family")
    ring = ring_for_order(j)
    fac = factor_integer(q) if q > 1 else {}
    if q < 2 or any(e != 1 or not _split_ok(p, j) for p, e in fac.items()):
        return []
    mode = primary_mode(j)
    choices = [primes_above(p, ring) for p in sorted(fac)]
    out = []
    for combo in itertools.product(*choices):
        n = QInt(1, 0, ring)
        for pi in combo:
            n = n * pi
        out.append(PrimitiveCharacter(j, normalize_primary(n, mode)[1], q))
    out.sort(key=lambda c: (c.n.a, c.n.b))
    return out


def enumerate_characters(j: int, max_conductor: int) -> list[PrimitiveCharacter]:
    """Every family member with 1 < conductor <= max_conductor, sorted."""
    if max_conductor < 2:
        raise ValueError("max_conductor must be >= 2")
    out: list[PrimitiveCharacter] = []
    for q in admissible_conductors(j, max_conductor):
        out.extend(characters_of_conductor(j, q))
    return out


def group_by_conductor(chars) -> dict[int, list[PrimitiveCharacter]]:
    groups: dict[int, list[PrimitiveCharacter]] = {}
    for chi in chars:
        groups.setdefault(chi.q, []).append(chi)
    return groups


# -- rational-side oracle -------------------------------------------------------

@dataclass(frozen=True)
class RationalCharacter:
    q: int
    j: int
    table: np.ndarray = field(compare=False, repr=False)

    def values(self) -> np.ndarray:
        return exponents_to_complex(self.table, self.j)

    @property
    def parity(self) -> int:
        return 0 if int(self.table[self.q - 1]) == 0 else 1


def character_data(chi) -> tuple[np.ndarray, int, int]:
    """(exponent table, modulus, order) for either character type."""
    if isinstance(chi, PrimitiveCharacter):
        return chi.table(), chi.q, chi.j
    if isinstance(chi, RationalCharacter):
        return chi.table, chi.q, chi.j
    raise TypeError(f"not a character: {type(chi).__name__}")


def kronecker_character(d: int) -> RationalCharacter:
    """The real character (d/.) of a fundamental discriminant d, as order-2 exponents."""
    q = abs(d)
    table = np.full(q, -1, dtype=np.int64)
    for a in range(q):
        if math.gcd(a, q) != 1:
            continue
        table[a] = 0 if _kronecker(d, a) == 1 else 1
    return RationalCharacter(q, 2, table)


def _kronecker(d: int, a: int) -> int:
    # (d/a) for a > 0 by factoring a; enough for the two discriminants -3 and -4
    out = 1
    for p, e in factor_integer(a).items() if a > 1 else []:
        if p == 2:
            r = 0 if d % 2 == 0 else (1 if d % 8 in (1, 7) else -1)
        else:
            r = pow(d % p, (p - 1) // 2, p)
            r = -1 if r == p - 1 else r
        out *= r ** e
    return out


TRIVIAL_CHARACTER = RationalCharacter(1, 1, np.zeros(1, dtype=np.int64))


def _cyclic_generator(p: int, e: int) -> int:
    pe = p ** e
    phi = pe - pe // p
    qs = list(factor_integer(phi)) if phi > 1 else []
    for g in range(2, pe + 1):
        if math.gcd(g, p) == 1 and all(pow(g, phi // r, pe) != 1 for r in qs):
            return g
    return 1


def unit_group_generators(q: int) -> list[tuple[int, int]]:
    """Generators (as residues mod q) and their orders for (Z/q)^x."""
    gens = []
    for p, e in sorted(factor_integer(q).items()) if q > 1 else []:
        pe = p ** e
        other = q // pe
        if p == 2:
            local = [] if e == 1 else ([(pe - 1, 2)] if e == 2 else [(pe - 1, 2), (5, 2 ** (e - 2))])
        else:
            local = [(_cyclic_generator(p, e), pe - pe // p)]
        for g, order in local:
            # CRT lift: g mod p^e, 1 mod the rest
            x = g if other == 1 else (g * other * pow(other, -1, pe) + pe * pow(pe, -1, other)) % q
            gens.append((x, order))
    return gens


@lru_cache(maxsize=512)
def _discrete_logs(q: int) -> tuple[tuple[tuple[int, int], ...], np.ndarray]:
    gens = tuple(unit_group_generators(q))
    logs = np.full((q, len(gens)), -1, dtype=np.int64)
    for exps in itertools.product(*(range(o) for _, o in gens)):
        a = 1
        for (g, _), t in zip(gens, exps):
            a = a * pow(g, t, q) % q
        logs[a % q] = exps
    return gens, logs


def rational_family(j: int, q: int) -> list[RationalCharacter]:
    """All chi mod q with chi^j = 1, order exactly j, and chi^i primitive for 0 < i < j."""
    if math.gcd(q, j) != 1:
        raise ValueError("q must be coprime to j")
    if q > ORACLE_LIMIT:
        raise ValueError(f"brute-force oracle limited to q <= {ORACLE_LIMIT}")
    if q == 1:
        return []
    gens, logs = _discrete_logs(q)
    units = np.flatnonzero(logs[:, 0] >= 0) if gens else np.array([1])
    primes = sorted(factor_integer(q))
    kernels = []
    for p in primes:
        step = q // p
        ker = [a for a in range(1, q + 1, step) if math.gcd(a, q) == 1]
        kernels.append(np.array([a % q for a in ker]))
    options = [[c for c in range(j) if (order * c) % j == 0] for _, order in gens]
    out = []
    for cs in itertools.product(*options):
        cvec = np.array(cs, dtype=np.int64)
        ok = True
        for i in range(1, j):
            for ker in kernels:
                if not np.any((logs[ker] @ (i * cvec)) % j):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        table = np.full(q, -1, dtype=np.int64)
        table[units] = (logs[units] @ cvec) % j
        if character_order(table, j) != j:
            continue
        out.append(RationalCharacter(q, j, table))
    return out


def oracle_count(j: int, q: int) -> int:
    return len(rational_family(j, q))


def character_order(table: np.ndarray, j: int) -> int:
    ks = table[table >= 0]
    g = j
    for k in np.unique(ks):
        g = math.gcd(g, int(k))
    return j // g


def is_multiplicative(table: np.ndarray, j: int) -> bool:
    q = len(table)
    a = np.arange(q)
    prod = (a[:, None] * a[None, :]) % q
    ta, tb, tp = table[:, None], table[None, :], table[prod]
    zero = (ta < 0) | (tb < 0)
    return bool(np.all((tp < 0) == zero) and np.all(((ta + tb - tp) % j == 0) | zero))
