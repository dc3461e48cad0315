"""Power residue symbols (m/n)_j for j in {2, 3, 4, 6}.

Three independent routes to the same values:

* :func:`residue_symbol` -- factor n and evaluate m^((N(pi)-1)/j) mod pi;
* :func:`residue_symbol_fast` -- Euclid-style flip-and-reduce using the
  quartic, cubic and sextic reciprocity laws;
* :class:`PrimeSymbolTable` -- discrete-log tables over the residue field,
  used for vectorised bulk evaluation by the character and Gauss-sum code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quadratic_ring import (
    EISENSTEIN,
    GAUSSIAN,
    QInt,
    Ring,
    divrem,
    factor,
    factor_integer,
    gcd,
    is_e_primary,
    is_primary,
    normalize_primary,
    ramified_prime_element,
    rational_prime_below,
    ring_for_order,
)

ORDERS = (2, 3, 4, 6)


@dataclass(frozen=True, slots=True)
class RootOfUnity:
    """exp(2*pi*i*k/order), or zero when ``k is None``."""

    order: int
    k: int | None

    def __post_init__(self):
        if self.k is not None and not 0 <= self.k < self.order:
            object.__setattr__(self, "k", self.k % self.order)

    @classmethod
    def zero(cls, order: int) -> "RootOfUnity":
        return cls(order, None)

    @classmethod
    def one(cls, order: int) -> "RootOfUnity":
        return cls(order, 0)

    @property
    def is_zero(self) -> bool:
        return self.k is None

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if self.order != other.order:
            raise ValueError("orders differ")
        if self.k is None or other.k is None:
            return RootOfUnity.zero(self.order)
        return RootOfUnity(self.order, self.k + other.k)

    def __pow__(self, e: int) -> "RootOfUnity":
        if self.k is None:
            if e == 0:
                raise ValueError("0**0")
            return self
        return RootOfUnity(self.order, self.k * e)

    def conjugate(self) -> "RootOfUnity":
        return self if self.k is None else RootOfUnity(self.order, -self.k)

    def __complex__(self) -> complex:
        if self.k is None:
            return 0j
        return complex(np.exp(2j * np.pi * self.k / self.order))

    def __str__(self) -> str:
        return "0" if self.k is None else str(self.k)


def root_element(ring: Ring, j: int) -> QInt:
    """exp(2*pi*i/j) as an element of O_K."""
    if j == 2:
        return QInt(-1, 0, ring)
    if j == 4:
        return QInt(0, 1, ring)
    if j == 3:
        return QInt(0, 1, ring)
    if j == 6:
        return QInt(1, 1, ring)
    raise ValueError(j)


def _as_qint(x, ring: Ring) -> QInt:
    if isinstance(x, QInt):
        if x.ring is not ring:
            raise ValueError(f"{x} is not in {ring.label}")
        return x
    return QInt(int(x), 0, ring)


def _check_modulus(n: QInt, j: int) -> None:
    if not n:
        raise ValueError("modulus must be nonzero")
    if math.gcd(n.norm(), j) != 1:
        raise ValueError(f"norm of {n} is not coprime to {j}")


def _powmod(x: QInt, e: int, pi: QInt) -> QInt:
    result = QInt(1, 0, x.ring)
    base = divrem(x, pi)[1]
    while e:
        if e & 1:
            result = divrem(result * base, pi)[1]
        base = divrem(base * base, pi)[1]
        e >>= 1
    return result


@lru_cache(maxsize=100_000)
def symbol_at_prime(m: QInt, pi: QInt, j: int) -> RootOfUnity:
    """(m/pi)_j from the congruence m^((N(pi)-1)/j) = zeta^k mod pi."""
    if not divrem(m, pi)[1]:
        return RootOfUnity.zero(j)
    t = _powmod(m, (pi.norm() - 1) // j, pi)
    zeta = root_element(m.ring, j)
    z = QInt(1, 0, m.ring)
    for k in range(j):
        if not divrem(t - z, pi)[1]:
            return RootOfUnity(j, k)
        z = z * zeta
    raise ArithmeticError(f"({m}/{pi})_{j}: power is not a root of unity")


def residue_symbol(m, n, j: int) -> RootOfUnity:
    """(m/n)_j by factorisation of n and modular exponentiation."""
    if j not in ORDERS:
        raise ValueError(f"unsupported order {j}")
    ring = ring_for_order(j)
    m = _as_qint(m, ring)
    n = _as_qint(n, ring)
    _check_modulus(n, j)
    acc = RootOfUnity.one(j)
    for pi, e in factor(n).factors:
        acc = acc * symbol_at_prime(m, pi, j) ** e
        if acc.is_zero:
            break
    return acc


# -- reciprocity route -----------------------------------------------------------

def _mode(j: int) -> str:
    return "e_primary" if j in (2, 6) else "primary"


def _law_exponent(j: int, nm: int, mm: int) -> int:
    """k such that (m/n)_j = (n/m)_j * exp(2*pi*i*k/j) for primary m, n."""
    if j == 3:
        return 0
    if j == 4:
        return 2 * (((nm - 1) // 4) * ((mm - 1) // 4) % 2)
    if j == 6:
        return 3 * (((nm - 1) // 2) * ((mm - 1) // 2) % 2)
    return ((nm - 1) // 2) * ((mm - 1) // 2) % 2


def _strip(m: QInt, p: QInt) -> tuple[QInt, int]:
    e = 0
    while True:
        q, r = divrem(m, p)
        if r:
            return m, e
        m, e = q, e + 1


def residue_symbol_fast(m, n, j: int) -> RootOfUnity:
    """(m/n)_j by repeated reduction and reciprocity.

    Units, the ramified prime (and 2, for the sextic and quadratic symbols)
    are split off the numerator and their symbols taken from the definition.
    """
    if j not in ORDERS:
        raise ValueError(f"unsupported order {j}")
    ring = ring_for_order(j)
    m = _as_qint(m, ring)
    n = _as_qint(n, ring)
    _check_modulus(n, j)
    acc = 0
    lam = ramified_prime_element(ring)
    extra = [lam]
    if j in (2, 6):
        extra.append(QInt(2, 0, ring))
    if j == 2:
        # the quadratic modulus may still contain the ramified prime
        n, e = _strip(n, lam)
        if e:
            s = symbol_at_prime(m, lam, j)
            if s.is_zero:
                return s
            acc += e * s.k
    n = normalize_primary(n, _mode(j))[1] if not n.is_unit() else n
    while not n.is_unit():
        m = divrem(m, n)[1]
        if not m:
            return RootOfUnity.zero(j)
        for p in extra:
            m, e = _strip(m, p)
            if e:
                acc += e * residue_symbol(p, n, j).k
        u, m = normalize_primary(m, _mode(j))
        # m_old = u^-1 * m_new
        acc -= residue_symbol(u, n, j).k
        if m.is_unit():
            break
        acc += _law_exponent(j, n.norm(), m.norm())
        m, n = n, m
    return RootOfUnity(j, acc)


def verify_reciprocity(m: QInt, n: QInt, j: int) -> bool:
    """Check the reciprocity law of order j on one coprime primary pair."""
    if j not in (3, 4, 6):
        raise ValueError(f"no reciprocity law stored for order {j}")
    ring = ring_for_order(j)
    m, n = _as_qint(m, ring), _as_qint(n, ring)
    test = is_e_primary if j == 6 else is_primary
    if not (test(m) and test(n)):
        raise ValueError("both arguments must be primary (E-primary for j=6)")
    if not gcd(m, n).is_unit():
        raise ValueError("arguments are not coprime")
    mn = residue_symbol(m, n, j)
    nm = residue_symbol(n, m, j)
    return mn == nm * RootOfUnity(j, _law_exponent(j, n.norm(), m.norm()))


def rational_symbol_is_one(m: int, d: int, j: int) -> bool:
    """Check that (m/d)_j = 1 for coprime rational m, d with (md, j) = 1."""
    if j not in (3, 4, 6):
        raise ValueError(f"order {j} not covered")
    if math.gcd(m * d, j) != 1 or math.gcd(m, d) != 1 or d == 0:
        raise ValueError("need (md, j) = 1 and (m, d) = 1")
    return residue_symbol(m, d, j) == RootOfUnity.one(j)


# -- table route -------------------------------------------------------------------

def _fq_mul(x, y, ring: Ring, p: int):
    a, b = x
    c, d = y
    if ring is GAUSSIAN:
        return ((a * c - b * d) % p, (a * d + b * c) % p)
    return ((a * c - b * d) % p, (a * d + b * c - b * d) % p)


class PrimeSymbolTable:
    """Discrete-log table of (x/pi)_j over the residue field O_K/pi.

    Split and ramified primes reduce x = u + v*theta to u + v*r mod p; inert
    primes index the table by (u mod p, v mod p).  Entries are k in [0, j)
    or -1 where pi divides x.
    """

    def __init__(self, pi: QInt, j: int):
        self.pi, self.j, self.ring = pi, j, pi.ring
        self.norm = pi.norm()
        self.p = rational_prime_below(pi)
        if (self.norm - 1) % j:
            raise ValueError(f"({j}) does not divide N({pi}) - 1")
        self.inert = self.norm != self.p
        zeta = root_element(self.ring, j)
        if self.inert:
            self._build_inert(zeta)
        else:
            self.r = (-pi.a * pow(pi.b, -1, self.p)) % self.p
            self._build_prime_field(zeta)

    def _build_prime_field(self, zeta: QInt) -> None:
        p, j = self.p, self.j
        g = _primitive_root(p)
        h = pow(g, (p - 1) // j, p)
        z = (zeta.a + zeta.b * self.r) % p
        k0 = next(k for k in range(j) if pow(z, k, p) == h)
        table = np.full(p, -1, dtype=np.int64)
        elems = _power_sequence(g, p - 1, p)
        table[elems] = (np.arange(p - 1, dtype=np.int64) * k0) % j
        self.table = table

    def _build_inert(self, zeta: QInt) -> None:
        p, j, ring = self.p, self.j, self.ring
        order = p * p - 1
        g = None
        for c in range(p):
            for d in range(1, p):
                cand = (c, d)
                if _fq_order_is(cand, order, ring, p):
                    g = cand
                    break
            if g:
                break
        h = _fq_pow(g, order // j, ring, p)
        z = (zeta.a % p, zeta.b % p)
        k0 = next(k for k in range(j) if _fq_pow(z, k, ring, p) == h)
        table = np.full(p * p, -1, dtype=np.int64)
        x = (1, 0)
        for t in range(order):
            table[x[0] * p + x[1]] = (t * k0) % j
            x = _fq_mul(x, g, ring, p)
        self.table = table

    def values(self, u, v=0):
        """Symbol exponents for x = u + v*theta (numpy broadcasting)."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        p = self.p
        if self.inert:
            return self.table[(u % p) * p + (v % p)]
        return self.table[(u + (v % p) * self.r) % p]


def _power_sequence(g: int, count: int, p: int) -> np.ndarray:
    """g^t mod p for t = 0..count-1, as baby steps times giant steps."""
    step = max(1, math.isqrt(count))
    baby = np.empty(step, dtype=np.int64)
    x = 1
    for t in range(step):
        baby[t] = x
        x = x * g % p
    rows = -(-count // step)
    giant = np.empty(rows, dtype=np.int64)
    y = 1
    for t in range(rows):
        giant[t] = y
        y = y * x % p
    return ((giant[:, None] * baby[None, :]) % p).ravel()[:count]


def _fq_pow(x, e: int, ring: Ring, p: int):
    result = (1, 0)
    while e:
        if e & 1:
            result = _fq_mul(result, x, ring, p)
        x = _fq_mul(x, x, ring, p)
        e >>= 1
    return result


def _fq_order_is(x, order: int, ring: Ring, p: int) -> bool:
    if _fq_pow(x, order, ring, p) != (1, 0):
        return False
    for q in _prime_divisors(order):
        if _fq_pow(x, order // q, ring, p) == (1, 0):
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    return sorted(factor_integer(n))


@lru_cache(maxsize=None)
def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    qs = _prime_divisors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError


@lru_cache(maxsize=4096)
def prime_symbol_table(pi: QInt, j: int) -> PrimeSymbolTable:
    return PrimeSymbolTable(pi, j)


def symbol_exponents(n: QInt, j: int, u, v=0) -> np.ndarray:
    """Vectorised (x/n)_j for x = u + v*theta; -1 marks zero."""
    _check_modulus(n, j)
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    shape = np.broadcast(u, v).shape
    acc = np.zeros(shape, dtype=np.int64)
    zero = np.zeros(shape, dtype=bool)
    for pi, e in factor(n).factors:
        k = prime_symbol_table(pi, j).values(u, v)
        zero |= k < 0
        acc += e * k
    acc %= j
    acc[zero] = -1
    return acc
