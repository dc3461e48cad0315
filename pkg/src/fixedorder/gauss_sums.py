"""Gauss sums g_K(k, chi_{j,n}) over O_K and tau(h, chi) over Z.

All sums are direct: phases are reduced exactly in integer arithmetic
before the exponential is taken, so the only rounding is in exp and in
the final accumulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import PrimitiveCharacter, character_data
from .power_residue import RootOfUnity, residue_symbol, symbol_exponents
from .quadratic_ring import (
    EISENSTEIN,
    GAUSSIAN,
    QInt,
    Ring,
    is_squarefree,
    normalize_primary,
    ring_for_order,
)

COMPENSATED_THRESHOLD = 10_000


@dataclass(frozen=True)
class GaussSumValue:
    value: complex
    modulus_norm: int

    def __complex__(self) -> complex:
        return self.value

    def __abs__(self) -> float:
        return abs(self.value)


def _accumulate(z: np.ndarray) -> complex:
    if z.size > COMPENSATED_THRESHOLD:
        return complex(math.fsum(z.real), math.fsum(z.imag))
    return complex(z.sum())


def _theta_coeff(x: QInt) -> int:
    return x.b


def e_tilde(num: QInt, den: QInt | int = 1) -> complex:
    """exp(2 pi i (z/sqrt(D) - conj(z)/sqrt(D))) for z = num/den in K."""
    if isinstance(den, int):
        den = QInt(den, 0, num.ring)
    nd = den.norm()
    if nd == 0:
        raise ZeroDivisionError("zero denominator")
    # z = num * conj(den) / N(den); the exponent is (theta-coefficient)/N(den)
    t = Fraction(_theta_coeff(num * den.conjugate()), nd) % 1
    return complex(np.exp(2j * np.pi * float(t)))


def e_tilde_exponent(num: QInt, den: QInt | int = 1) -> Fraction:
    """The real number t (mod 1) with e_tilde(num/den) = exp(2 pi i t)."""
    if isinstance(den, int):
        den = QInt(den, 0, num.ring)
    return Fraction(_theta_coeff(num * den.conjugate()), den.norm()) % 1


def residue_system(n: QInt) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates (u, v) of a complete residue system u + v*theta modulo n."""
    nn = n.norm()
    if nn == 0:
        raise ValueError("modulus must be nonzero")
    c = math.gcd(n.a, n.b)
    rows = nn // c
    u = np.tile(np.arange(rows, dtype=np.int64), c)
    v = np.repeat(np.arange(c, dtype=np.int64), rows)
    return u, v


def _as_qint(x, ring: Ring) -> QInt:
    return x if isinstance(x, QInt) else QInt(int(x), 0, ring)


def gauss_gK(k, n, j: int) -> GaussSumValue:
    """g_K(k, chi_{j,n}; n) by direct summation over O_K / (n)."""
    ring = ring_for_order(j)
    k, n = _as_qint(k, ring), _as_qint(n, ring)
    u, v = residue_system(n)
    nn = n.norm()
    ks = symbol_exponents(n, j, u, v)
    alpha = k * n.conjugate()
    a0, a1 = alpha.a % nn, alpha.b % nn
    # theta-coefficient of (u + v theta)(a0 + a1 theta)
    if ring is GAUSSIAN:
        t = (u * a1 + v * a0) % nn
    else:
        t = (u * a1 + v * ((a0 - a1) % nn)) % nn
    live = ks >= 0
    # exact phase k/j + t/N reduced modulo 1 over the common denominator j*N
    num = (ks[live] * nn + t[live] * j) % (j * nn)
    terms = np.exp(2j * np.pi * num / (j * nn))
    return GaussSumValue(_accumulate(terms), nn)


def tau(h: int, chi) -> complex:
    """tau(h, chi) = sum_{1 <= x <= q} chi(x) e(hx/q)."""
    table, q, j = character_data(chi)
    x = np.arange(1, q + 1, dtype=np.int64)
    ks = table[x % q]
    live = ks >= 0
    num = (ks[live] * q + (h * x[live] % q) * j) % (j * q)
    return _accumulate(np.exp(2j * np.pi * num / (j * q)))


# -- identities ---------------------------------------------------------------------

def twist_constant(j: int, ring: Ring) -> QInt:
    """c_K of the tau/g_K relation: sqrt(D_K), (2i)^3 or -D_K^2."""
    if j == 3:
        return QInt(1, 2, ring)  # 1 + 2w = sqrt(-3)
    if j == 4:
        return QInt(0, 2, ring) ** 3
    if j == 6:
        return QInt(-9, 0, ring)
    raise ValueError(j)


def tau_from_gK(n: QInt, j: int, literal: bool = False) -> complex:
    """tau(chi-hat_{j,n}) predicted from g_K(chi_{j,n}).

    j = 3, 6: conj((c_K/n)_j) g_K.  j = 4: i^((1 - chi(-1))/2) g_K; the
    extra factor conj(((2i)^3/n)_4) is included only with ``literal=True``
    (it equals (2i/n)_4 = +-1 and breaks the relation when it is -1).
    """
    ring = ring_for_order(j)
    factor = 1 + 0j
    if j != 4 or literal:
        factor = complex(residue_symbol(twist_constant(j, ring), n, j).conjugate())
    if j == 4 and residue_symbol(-1, n, j).k == 2:
        factor *= 1j
    return factor * gauss_gK(1, n, j).value


def tau_from_conjugate(n: QInt, j: int) -> complex:
    """conj((sqrt(D_K)/n)_j) (conj(n)/n)_j g_K(chi_{j,n}), valid for every j."""
    ring = ring_for_order(j)
    sqrt_d = QInt(0, 2, ring) if ring is GAUSSIAN else QInt(1, 2, ring)
    factor = residue_symbol(sqrt_d, n, j).conjugate() * residue_symbol(n.conjugate(), n, j)
    return complex(factor) * gauss_gK(1, n, j).value


IDENTITIES = (
    "gmult", "prod_2_03", "prod_2_03_literal", "grel", "modulus_2_1",
    "tauprim", "tauprim1", "tauprim1_literal", "tau_conjugate",
)


def verify_identity(name: str, j: int, sign_flip: bool = False, **inst) -> float:
    """Residual |LHS - RHS| of one Gauss-sum identity on one instance.

    Instances (keyword arguments):
      gmult:        r, s, n           with (s, n) = 1
      prod_2_03:    r, n1, n2         with (n1, n2) = 1
      grel:         d, n              d rational, both primary, (n, d) = 1
      modulus_2_1:  n                 relative error of |g|^2 = N(n), or |g|/sqrt(N(n)) if not square-free
      tauprim:      h, chi
      tauprim1:     n                 n primary, chi-hat_{j,n} in the family
      tau_conjugate: n                tau via the (conj(n)/n)_j form

    ``sign_flip`` negates the right-hand side (a deliberate fault for testing gates).
    """
    flip = -1 if sign_flip else 1
    ring = ring_for_order(j)
    conj_sym = lambda m, n: complex(residue_symbol(m, n, j).conjugate())
    sym = lambda m, n: complex(residue_symbol(m, n, j))
    if name == "gmult":
        r, s, n = (_as_qint(inst[x], ring) for x in ("r", "s", "n"))
        if conj_sym(s, n) == 0:
            raise ValueError("need (s, n) = 1")
        lhs = gauss_gK(r * s, n, j).value
        rhs = flip * conj_sym(s, n) * gauss_gK(r, n, j).value
        return abs(lhs - rhs)
    if name in ("prod_2_03", "prod_2_03_literal"):
        r, n1, n2 = (_as_qint(inst[x], ring) for x in ("r", "n1", "n2"))
        if sym(n1, n2) == 0:
            raise ValueError("need (n1, n2) = 1")
        lhs = gauss_gK(r, n1 * n2, j).value
        second = n1 if name.endswith("literal") else n2
        rhs = flip * sym(n2, n1) * sym(n1, n2) * gauss_gK(r, n1, j).value * gauss_gK(r, second, j).value
        return abs(lhs - rhs)
    if name == "grel":
        d, n = _as_qint(inst["d"], ring), _as_qint(inst["n"], ring)
        if not d.is_rational():
            raise ValueError("d must be a rational integer")
        if sym(d, n) == 0:
            raise ValueError("need (n, d) = 1")
        twist = complex((residue_symbol(d, n, j) ** (j - 2)).conjugate())
        lhs = gauss_gK(1, d * n, j).value
        rhs = flip * twist * gauss_gK(1, d, j).value * gauss_gK(1, n, j).value
        return abs(lhs - rhs)
    if name == "modulus_2_1":
        n = _as_qint(inst["n"], ring)
        g = gauss_gK(1, n, j).value
        if is_squarefree(n):
            return abs(abs(g) ** 2 - flip * n.norm()) / n.norm()
        return abs(g) / math.sqrt(n.norm())
    if name == "tauprim":
        chi, h = inst["chi"], int(inst["h"])
        table, q, jj = character_data(chi)
        k = int(table[h % q])
        chibar = 0j if k < 0 else np.exp(-2j * np.pi * k / jj)
        return abs(tau(h, chi) - flip * chibar * tau(1, chi))
    if name in ("tauprim1", "tauprim1_literal", "tau_conjugate"):
        n = _as_qint(inst["n"], ring)
        chi = PrimitiveCharacter(j, n, n.norm())
        if name == "tau_conjugate":
            return abs(tau(1, chi) - flip * tau_from_conjugate(n, j))
        return abs(tau(1, chi) - flip * tau_from_gK(n, j, literal=name.endswith("literal")))
    raise ValueError(f"unknown identity {name!r}")


# -- batch verification -------------------------------------------------------------

GATING_IDENTITIES = ("gmult", "prod_2_03", "grel", "modulus_2_1", "tauprim", "tauprim1", "tau_conjugate")
TOLERANCE = {"modulus_2_1": 1e-6}
DEFAULT_TOLERANCE = 1e-8
GREL_NORM_CAP = 100_000


SMALLEST_PRIMARY_NORM = {3: 4, 4: 5, 6: 7}


def _mode(j: int) -> str:
    return "e_primary" if j == 6 else "primary"


def random_primary(j: int, max_norm: int, rng: np.random.Generator, squarefree: bool | None = None) -> QInt:
    """A random primary (E-primary for j = 6) element with 1 < N(n) <= max_norm."""
    if max_norm < SMALLEST_PRIMARY_NORM[j]:
        raise ValueError(f"no primary element with 1 < norm <= {max_norm}")
    ring = ring_for_order(j)
    bound = int(math.isqrt(max_norm)) + 1
    bad = 6 if j == 6 else (2 if ring is GAUSSIAN else 3)
    for _ in range(100_000):
        a, b = (int(x) for x in rng.integers(-bound, bound + 1, size=2))
        n = QInt(a, b, ring)
        nn = n.norm()
        if not 1 < nn <= max_norm or math.gcd(nn, bad) != 1:
            continue
        n = normalize_primary(n, _mode(j))[1]
        if squarefree is None or is_squarefree(n) == squarefree:
            return n
    raise ValueError(f"no suitable primary element found with norm <= {max_norm}")


def non_squarefree_moduli(j: int, count: int, max_norm: int, rng: np.random.Generator) -> list[QInt]:
    """Primary n = pi^2 * c with N(n) <= max_norm, distinct."""
    out: set[QInt] = set()
    attempts = 0
    while len(out) < count and attempts < 100 * count:
        attempts += 1
        pi = random_primary(j, int(math.isqrt(max_norm)), rng)
        rest = max_norm // pi.norm() ** 2
        c = random_primary(j, rest, rng) if rest >= SMALLEST_PRIMARY_NORM[j] else QInt(1, 0, pi.ring)
        n = normalize_primary(pi * pi * c, _mode(j))[1]
        if n.norm() <= max_norm:
            out.add(n)
    return sorted(out, key=lambda n: (n.norm(), n.a, n.b))


def rational_primary_moduli(j: int, limit: int) -> list[QInt]:
    """Square-free rational d with |d| <= limit, coprime to j and the ramified prime, in primary form."""
    ring = ring_for_order(j)
    bad = 6 if j == 6 else (2 if ring is GAUSSIAN else 3)
    out = []
    for d in range(3, limit + 1):
        if math.gcd(d, bad) == 1 and is_squarefree(QInt(d, 0, ring)):
            out.append(normalize_primary(QInt(d, 0, ring), _mode(j))[1])
    return out


def primary_elements(j: int, max_norm: int) -> list[QInt]:
    """Every primary (E-primary for j = 6) element with 1 < N(n) <= max_norm, sorted by norm."""
    ring = ring_for_order(j)
    bad = 6 if j == 6 else ring.ramified_prime
    r = math.isqrt(4 * max_norm) + 2
    seen = {}
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            x = QInt(a, b, ring)
            if 1 < x.norm() <= max_norm and math.gcd(x.norm(), bad) == 1:
                n = normalize_primary(x, _mode(j))[1]
                seen[(n.a, n.b)] = n
    return sorted(seen.values(), key=lambda n: (n.norm(), n.a, n.b))


def _random_element(ring: Ring, rng: np.random.Generator, size: int = 30) -> QInt:
    while True:
        a, b = (int(x) for x in rng.integers(-size, size + 1, size=2))
        if a or b:
            return QInt(a, b, ring)


def identity_instances(name: str, j: int, max_norm: int, rng: np.random.Generator,
                       samples: int = 100) -> list[dict]:
    """Instances for one identity: exhaustive over the family where cheap, seeded samples elsewhere."""
    from .characters import enumerate_characters

    ring = ring_for_order(j)
    family = [c.n for c in enumerate_characters(j, max_norm)] if max_norm >= 2 else []
    if name in ("modulus_2_1",):
        return [{"n": n} for n in family]
    if name in ("tauprim1", "tauprim1_literal", "tau_conjugate"):
        return [{"n": n} for n in family]
    if name == "modulus_2_1_zero":
        return [{"n": n} for n in non_squarefree_moduli(j, samples, max_norm, rng)]
    if name == "tauprim":
        out = []
        for _ in range(samples if family else 0):
            n = family[int(rng.integers(len(family)))]
            out.append({"chi": PrimitiveCharacter(j, n, n.norm()), "h": int(rng.integers(1, 10 * n.norm()))})
        return out
    if name == "gmult":
        out = []
        while len(out) < samples:
            n = random_primary(j, max_norm, rng)
            s = _random_element(ring, rng)
            if residue_symbol(s, n, j).is_zero:
                continue
            out.append({"r": _random_element(ring, rng), "s": s, "n": n})
        return out
    if name in ("prod_2_03", "prod_2_03_literal"):
        out = []
        while len(out) < samples:
            n1 = random_primary(j, max(3, int(math.isqrt(max_norm))), rng)
            n2 = random_primary(j, max(3, max_norm // n1.norm()), rng)
            if n1.norm() * n2.norm() > max_norm or residue_symbol(n1, n2, j).is_zero:
                continue
            out.append({"r": _random_element(ring, rng), "n1": n1, "n2": n2})
        return out
    if name == "grel":
        pairs = []
        ds = rational_primary_moduli(j, 50)
        ns = {random_primary(j, 500, rng) for _ in range(4 * samples)}
        for d in ds:
            for n in sorted(ns, key=lambda x: (x.norm(), x.a, x.b)):
                if d.norm() * n.norm() <= GREL_NORM_CAP and not residue_symbol(d, n, j).is_zero:
                    pairs.append({"d": d, "n": n})
        if len(pairs) > samples:
            pick = sorted(rng.choice(len(pairs), size=samples, replace=False).tolist())
            pairs = [pairs[i] for i in pick]
        return pairs
    raise ValueError(f"unknown identity {name!r}")


@dataclass(frozen=True)
class IdentityReport:
    name: str
    j: int
    instances: int
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def check_identity(name: str, j: int, instances: list[dict], sign_flip: bool = False) -> IdentityReport:
    base = "modulus_2_1" if name == "modulus_2_1_zero" else name
    worst = 0.0
    for inst in instances:
        worst = max(worst, verify_identity(base, j, sign_flip=sign_flip, **inst))
    tol = TOLERANCE.get(base, DEFAULT_TOLERANCE)
    return IdentityReport(name, j, len(instances), worst, tol)
