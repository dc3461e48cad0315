"""Exact arithmetic in the Gaussian integers Z[i] and the Eisenstein integers Z[w].

Elements are stored as integer coordinates in the basis (1, theta) with
theta = i or theta = w = (-1 + sqrt(-3))/2.  Everything here is exact.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from functools import lru_cache


class Ring(enum.Enum):
    GAUSSIAN = ("Gaussian", -4, 4)
    EISENSTEIN = ("Eisenstein", -3, 6)

    def __init__(self, label: str, discriminant: int, unit_count: int):
        self.label = label
        self.discriminant = discriminant
        self.unit_count = unit_count

    @property
    def letter(self) -> str:
        return "i" if self is Ring.GAUSSIAN else "w"

    @property
    def ramified_prime(self) -> int:
        return 2 if self is Ring.GAUSSIAN else 3

    def split_type(self, p: int) -> str:
        """'split', 'inert' or 'ramified' for a rational prime p."""
        if p == self.ramified_prime:
            return "ramified"
        if self is Ring.GAUSSIAN:
            return "split" if p % 4 == 1 else "inert"
        return "split" if p % 3 == 1 else "inert"


GAUSSIAN = Ring.GAUSSIAN
EISENSTEIN = Ring.EISENSTEIN


def ring_for_order(j: int) -> Ring:
    if j == 4:
        return GAUSSIAN
    if j in (2, 3, 6):
        return EISENSTEIN
    raise ValueError(f"no residue symbol of order {j} in Z[i] or Z[w]")


@dataclass(frozen=True, slots=True)
class QInt:
    """The element a + b*theta of Z[i] or Z[w]."""

    a: int
    b: int
    ring: Ring

    # -- construction helpers -------------------------------------------
    def _coerce(self, other) -> "QInt":
        if isinstance(other, QInt):
            if other.ring is not self.ring:
                raise ValueError("ring mismatch")
            return other
        if isinstance(other, int):
            return QInt(other, 0, self.ring)
        return NotImplemented

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QInt(self.a + other.a, self.b + other.b, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return QInt(-self.a, -self.b, self.ring)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QInt(self.a - other.a, self.b - other.b, self.ring)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.a, self.b, other.a, other.b
        if self.ring is GAUSSIAN:
            return QInt(a * c - b * d, a * d + b * c, self.ring)
        # w^2 = -1 - w
        return QInt(a * c - b * d, a * d + b * c - b * d, self.ring)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = QInt(1, 0, self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        return divrem(self, self._coerce(other))

    def __floordiv__(self, other):
        return divrem(self, self._coerce(other))[0]

    def __mod__(self, other):
        return divrem(self, self._coerce(other))[1]

    def __bool__(self):
        return bool(self.a or self.b)

    # -- structure ---------------------------------------------------------
    def conjugate(self) -> "QInt":
        if self.ring is GAUSSIAN:
            return QInt(self.a, -self.b, self.ring)
        return QInt(self.a - self.b, -self.b, self.ring)

    def norm(self) -> int:
        a, b = self.a, self.b
        if self.ring is GAUSSIAN:
            return a * a + b * b
        return a * a - a * b + b * b

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_rational(self) -> bool:
        return self.b == 0

    def divides(self, other: "QInt") -> bool:
        if not self:
            return not other
        return not divrem(other, self)[1]

    def __complex__(self) -> complex:
        if self.ring is GAUSSIAN:
            return complex(self.a, self.b)
        return complex(self.a - 0.5 * self.b, self.b * math.sqrt(3.0) / 2.0)

    def __str__(self) -> str:
        return format_qint(self)

    def __repr__(self) -> str:
        return f"QInt({format_qint(self)})"


def qint(a: int, b: int = 0, ring: Ring = GAUSSIAN) -> QInt:
    return QInt(int(a), int(b), ring)


def theta(ring: Ring) -> QInt:
    return QInt(0, 1, ring)


def units(ring: Ring) -> list[QInt]:
    """Units as successive powers of a generator: i^k, resp. (1+w)^k."""
    if ring is GAUSSIAN:
        return [QInt(1, 0, ring), QInt(0, 1, ring), QInt(-1, 0, ring), QInt(0, -1, ring)]
    return [QInt(1, 0, ring), QInt(1, 1, ring), QInt(0, 1, ring),
            QInt(-1, 0, ring), QInt(-1, -1, ring), QInt(0, -1, ring)]


def ramified_prime_element(ring: Ring) -> QInt:
    """The prime above 2 (Gaussian) or 3 (Eisenstein), in canonical form."""
    return canonical_associate(QInt(1, 1, ring) if ring is GAUSSIAN else QInt(1, -1, ring))


def _round_div(n: int, d: int) -> int:
    # nearest integer to n/d for d > 0
    return (2 * n + d) // (2 * d)


def divrem(x: QInt, y: QInt) -> tuple[QInt, QInt]:
    """Euclidean division: x = q*y + r with norm(r) < norm(y)."""
    if x.ring is not y.ring:
        raise ValueError("ring mismatch")
    n = y.norm()
    if n == 0:
        raise ZeroDivisionError("division by zero in O_K")
    num = x * y.conjugate()
    q = QInt(_round_div(num.a, n), _round_div(num.b, n), x.ring)
    return q, x - q * y


def exact_div(x: QInt, y: QInt) -> QInt:
    q, r = divrem(x, y)
    if r:
        raise ValueError(f"{y} does not divide {x}")
    return q


def canonical_associate(n: QInt) -> QInt:
    """Associate whose argument lies in [0, 2*pi/w_K)."""
    if not n:
        return n
    for u in units(n.ring):
        m = u * n
        if n.ring is GAUSSIAN:
            if m.a > 0 and m.b >= 0:
                return m
        elif m.b >= 0 and m.a > m.b:
            return m
    raise AssertionError("no canonical associate found")  # unreachable


# -- primary normalisations ----------------------------------------------------

def is_primary(n: QInt) -> bool:
    """n = 1 mod (1+i)^3 in Z[i]; n = 1 mod 3 in Z[w]."""
    a, b = n.a, n.b
    if n.ring is GAUSSIAN:
        return a % 2 == 1 and b % 2 == 0 and (a - 1 + b) % 4 == 0
    return a % 3 == 1 and b % 3 == 0


def is_e_primary(n: QInt) -> bool:
    """E-primary test in Z[w] (coprime to 6, +-1 mod 3, parity conditions)."""
    if n.ring is not EISENSTEIN:
        raise ValueError("E-primary is defined only in Z[w]")
    a, b = n.a, n.b
    if math.gcd(n.norm(), 6) != 1:
        return False
    if b % 3 != 0 or a % 3 == 0:
        return False
    if b % 2 == 0:
        return (a + b) % 4 == 1
    if a % 2 == 0:
        return b % 4 == 1
    return a % 4 == 3


def is_e_primary_by_cube(n: QInt) -> bool:
    """Equivalent test: n = +-1 mod 3 and n^3 = c + d*w with 6 | d, c + d = 1 mod 4.

    The cube alone cannot separate n from w*n and w^2*n, so the congruence
    mod 3 is kept; without it three associates pass.
    """
    if math.gcd(n.norm(), 6) != 1 or n.b % 3 != 0:
        return False
    c = n ** 3
    return c.b % 6 == 0 and (c.a + c.b) % 4 == 1


def normalize_primary(n: QInt, mode: str = "primary") -> tuple[QInt, QInt]:
    """Return (u, p) with u a unit and p = u*n the primary (or E-primary) associate."""
    if mode not in ("primary", "e_primary"):
        raise ValueError(f"unknown mode {mode!r}")
    norm = n.norm()
    if mode == "e_primary":
        if n.ring is not EISENSTEIN:
            raise ValueError("E-primary is defined only in Z[w]")
        if math.gcd(norm, 6) != 1:
            raise ValueError(f"{n} is not coprime to 6")
        test = is_e_primary
    else:
        if norm == 0 or norm % n.ring.ramified_prime == 0:
            raise ValueError(f"{n} is not coprime to {n.ring.ramified_prime}")
        test = is_primary
    for u in units(n.ring):
        p = u * n
        if test(p):
            return u, p
    raise AssertionError("no primary associate")  # unreachable for valid input


def primary_form(n: QInt, mode: str = "primary") -> QInt:
    return normalize_primary(n, mode)[1]


def normal_form(n: QInt) -> QInt:
    """Primary associate when coprime to the ramified prime, else canonical."""
    if n and n.norm() % n.ring.ramified_prime:
        return primary_form(n)
    return canonical_associate(n)


def gcd(x: QInt, y: QInt) -> QInt:
    if x.ring is not y.ring:
        raise ValueError("ring mismatch")
    while y:
        x, y = y, divrem(x, y)[1]
    return normal_form(x)


# -- factorisation ---------------------------------------------------------------

def factor_integer(n: int) -> dict[int, int]:
    """Trial-division factorisation of a positive integer."""
    if n < 1:
        raise ValueError("factor_integer needs n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n:
        for q in (p, p + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        p += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=None)
def theta_root_mod(p: int, ring: Ring) -> int:
    """A root of theta's minimal polynomial (x^2+1 or x^2+x+1) modulo a split prime p."""
    if ring.split_type(p) != "split":
        raise ValueError(f"{p} does not split in {ring.label}")
    j = 4 if ring is GAUSSIAN else 3
    for c in range(2, p):
        r = pow(c, (p - 1) // j, p)
        if ring is GAUSSIAN and r * r % p == p - 1:
            return r
        if ring is EISENSTEIN and r != 1:
            return r
    raise AssertionError("no root found")


@lru_cache(maxsize=None)
def primes_above(p: int, ring: Ring) -> tuple[QInt, ...]:
    """Prime elements (in normal form) lying above the rational prime p."""
    kind = ring.split_type(p)
    if kind == "ramified":
        return (ramified_prime_element(ring),)
    if kind == "inert":
        return (normal_form(QInt(p, 0, ring)),)
    r = theta_root_mod(p, ring)
    pi = gcd(QInt(p, 0, ring), QInt(-r, 1, ring))
    assert pi.norm() == p
    return (pi, normal_form(pi.conjugate()))


@dataclass(frozen=True)
class Factorization:
    unit: QInt
    factors: tuple[tuple[QInt, int], ...]

    def expand(self) -> QInt:
        out = self.unit
        for pi, e in self.factors:
            out = out * pi ** e
        return out


@lru_cache(maxsize=200_000)
def factor(n: QInt) -> Factorization:
    """Factor n into a unit times powers of pairwise non-associate primes."""
    if not n:
        raise ValueError("cannot factor zero")
    rest = n
    factors = []
    for p, _ in sorted(factor_integer(n.norm()).items()) if n.norm() > 1 else []:
        for pi in primes_above(p, n.ring):
            e = 0
            while True:
                q, r = divrem(rest, pi)
                if r:
                    break
                rest, e = q, e + 1
            if e:
                factors.append((pi, e))
    if not rest.is_unit():
        raise AssertionError(f"incomplete factorisation of {n}")
    return Factorization(rest, tuple(factors))


def is_squarefree(n: QInt) -> bool:
    return all(e == 1 for _, e in factor(n).factors)


def has_rational_prime_divisor(n: QInt) -> bool:
    """True iff some rational prime p divides n in O_K."""
    seen: dict[int, int] = {}
    for pi, e in factor(n).factors:
        p = rational_prime_below(pi)
        kind = n.ring.split_type(p)
        if kind == "inert":
            return True
        if kind == "ramified" and e >= 2:
            return True
        seen[p] = seen.get(p, 0) + 1
        if seen[p] == 2:
            return True
    return False


def rational_prime_below(pi: QInt) -> int:
    nrm = pi.norm()
    r = math.isqrt(nrm)
    return r if r * r == nrm else nrm


# -- text format -------------------------------------------------------------

_QINT_RE = re.compile(
    r"^\s*(?:(?P<a>[+-]?\d+)(?=\s*(?:[+-]|$)))?\s*"
    r"(?:(?P<sign>[+-])?\s*(?:(?P<b>\d+)\s*\*?\s*)?(?P<letter>[iw]))?\s*$"
)


def parse_qint(text: str, ring: Ring | None = None) -> QInt:
    """Parse "a+b*i", "a+b*w", "a", "b*w", "-i" ... exactly."""
    m = _QINT_RE.match(text)
    if not m or (m.group("a") is None and m.group("letter") is None):
        raise ValueError(f"cannot parse {text!r} as an element of Z[i] or Z[w]")
    a = int(m.group("a")) if m.group("a") is not None else 0
    b = 0
    letter = m.group("letter")
    if letter is not None:
        b = int(m.group("b")) if m.group("b") is not None else 1
        if m.group("sign") == "-":
            b = -b
        elif m.group("sign") is None and m.group("a") is not None:
            raise ValueError(f"missing sign in {text!r}")
        parsed_ring = GAUSSIAN if letter == "i" else EISENSTEIN
        if ring is not None and ring is not parsed_ring:
            raise ValueError(f"{text!r} is not in {ring.label}")
        ring = parsed_ring
    if ring is None:
        raise ValueError(f"ring of {text!r} is ambiguous")
    return QInt(a, b, ring)


def format_qint(n: QInt) -> str:
    sign = "+" if n.b >= 0 else "-"
    return f"{n.a}{sign}{abs(n.b)}*{n.ring.letter}"
