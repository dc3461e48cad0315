"""The main-term constant C_j = r_K / zeta_K(2) * P(1, psi_0) * Z_j(1/2 + alpha).

Every quantity is returned with a rigorous truncation bound.  Two
evaluation routes are kept for each infinite object: an accelerated one
used for the bundle and a plain one used as its oracle.

Local data at a rational prime p not dividing j:

    h_p = prod_{w | p} (1 + 1/N(w))^{-1}   = (1 + 1/p)^{-2}   (split)
                                            = (1 + 1/p^2)^{-1} (inert)
    g_p = h_p / (1 - h_p / p^2)            = 1 / (1 + 2/p)   (split)
                                            = 1                (inert)
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import special

from .characters import kronecker_character
from .lfun import dirichlet_L, hurwitz_zeta
from .quadratic_ring import Ring, factor_integer, primes_above, ring_for_order
from .sieves import primes_up_to, split_mask

DEFAULT_PRIME_LIMIT = 2_000_000
DEFAULT_TERM_LIMIT = 4_000_000


@dataclass(frozen=True)
class Estimate:
    value: float
    error_bound: float

    @property
    def lower(self) -> float:
        return self.value - self.error_bound

    @property
    def upper(self) -> float:
        return self.value + self.error_bound


# -- local factors ------------------------------------------------------------------

def local_h(p: int, ring: Ring) -> float:
    """prod over primes w above p of (1 + 1/N(w))^{-1}, from the factorization of p."""
    out = 1.0
    for w in primes_above(p, ring):
        out /= 1 + 1 / w.norm()
    return out


def local_h_closed_form(p: int, ring: Ring) -> float:
    kind = ring.split_type(p)
    if kind == "split":
        return (1 + 1 / p) ** -2
    if kind == "inert":
        return 1 / (1 + 1 / p**2)
    return 1 / (1 + 1 / p)


def _h_vector(primes: np.ndarray, ring: Ring) -> np.ndarray:
    p = primes.astype(float)
    split = split_mask(primes, ring.discriminant)
    ramified = primes == ring.ramified_prime
    h = np.where(split, (1 + 1 / p) ** -2, 1 / (1 + 1 / p**2))
    return np.where(ramified, 1 / (1 + 1 / p), h)


def j_factor(j: int) -> float:
    """c_j = prod over primes w dividing j of (1 + 1/N(w))^{-1}."""
    ring = ring_for_order(j)
    out = 1.0
    for p in factor_integer(j):
        out *= local_h(p, ring)
    return out


# -- r_K and zeta_K(2) ------------------------------------------------------------

def residue_by_digamma(ring: Ring) -> float:
    """L(1, chi_D) = -(1/q) sum_a chi_D(a) psi(a/q)."""
    chi = kronecker_character(ring.discriminant)
    q = chi.q
    a = np.arange(1, q)
    signs = np.where(chi.table[a] == 0, 1.0, np.where(chi.table[a] == 1, -1.0, 0.0))
    return float(-(signs * special.digamma(a / q)).sum() / q)


def residue_by_class_number(ring: Ring) -> float:
    """2 pi h / (w sqrt|D|) with h = 1."""
    return 2 * math.pi / (ring.unit_count * math.sqrt(abs(ring.discriminant)))


def residue_zeta_K(ring: Ring) -> Estimate:
    """r_K, the residue of zeta_K at s = 1, with the gap between two routes as its bound."""
    a, b = residue_by_digamma(ring), residue_by_class_number(ring)
    return Estimate(b, abs(a - b) + 4 * np.finfo(float).eps * b)


def zeta_K_at_2(ring: Ring) -> Estimate:
    """zeta(2) L(2, chi_D)."""
    lval = dirichlet_L(2, kronecker_character(ring.discriminant))
    z2 = math.pi**2 / 6
    return Estimate(z2 * lval.value.real, z2 * lval.abs_error_bound)


# -- P(1, psi_0) -------------------------------------------------------------------

@dataclass(frozen=True)
class EulerProductValue:
    value: float
    error_bound: float
    prime_limit: int
    raw_partial: float
    raw_tail_bound: float


def euler_P(j: int, prime_limit: int = DEFAULT_PRIME_LIMIT) -> EulerProductValue:
    """P(1, psi_0) = prod_{p not dividing j} (1 - h_p / p^2).

    The product is split as
        6/pi^2 * prod_{p | j} (1 - p^-2)^{-1} * prod_{p not dividing j} (1 - h_p/p^2)/(1 - p^-2),
    whose last factors are 1 + O(p^-3).  The plain partial product, with its
    O(1/P) tail, is returned alongside as the oracle.
    """
    ring = ring_for_order(j)
    primes = primes_up_to(prime_limit)
    keep = np.gcd(primes, j) == 1
    p = primes[keep].astype(float)
    h = _h_vector(primes[keep], ring)
    raw_log = np.log1p(-h / p**2)
    ratio_log = np.log1p((1 - h) / (p**2 - 1))
    zeta2_inv = 6 / math.pi**2
    for r in factor_integer(j):
        zeta2_inv /= 1 - r**-2
    value = zeta2_inv * math.exp(math.fsum(ratio_log))
    P = float(prime_limit)
    # ratio factors lie in [1, 1 + 3/p^3]: log tail <= sum_{n > P} 3/n^3 <= 3/(2 (P-1)^2)
    tail = 1.5 / (P - 1) ** 2
    raw = math.exp(math.fsum(raw_log))
    # raw factors lie in (1 - 1/n^2, 1]: |log tail| <= sum_{n > P} 1/(n^2 - 1) <= 1/(P - 1)
    raw_tail = 1 / (P - 1)
    return EulerProductValue(
        value=value,
        error_bound=value * math.expm1(tail) + 8 * np.finfo(float).eps * len(p) ** 0.5 * value,
        prime_limit=prime_limit,
        raw_partial=raw,
        raw_tail_bound=raw * math.expm1(raw_tail),
    )


# -- Z_j(w) ----------------------------------------------------------------------------

def _check_w(w: float, j: int) -> None:
    if j * w <= 1:
        raise ValueError("Z_j(w) needs j*w > 1")


def z_j(w: float, j: int, prime_limit: int = DEFAULT_PRIME_LIMIT) -> Estimate:
    """Z_j(w) = c_j zeta(jw) prod_{p not dividing j} (1 - (1 - g_p) p^{-jw}).

    The factor 1 - g_p is 2/(p+2) at split p and 0 at inert p, so the
    product converges like sum p^{-1-jw}.
    """
    _check_w(w, j)
    ring = ring_for_order(j)
    s = j * w
    primes = primes_up_to(prime_limit)
    keep = (np.gcd(primes, j) == 1) & split_mask(primes, ring.discriminant)
    p = primes[keep].astype(float)
    logs = np.log1p(-(2 / (p + 2)) * p**-s)
    zeta, zeta_err = hurwitz_zeta(s, 1.0)
    value = j_factor(j) * zeta.real * math.exp(math.fsum(logs))
    # omitted factors lie in [1 - 2 n^{-1-s}, 1]; |log| <= 2.01 n^{-1-s} for n > P >= 10
    P = float(prime_limit)
    tail = 2.01 * (P - 1) ** -s / s
    err = value * (math.expm1(tail) + zeta_err / zeta.real) + 8 * np.finfo(float).eps * value
    return Estimate(value, err)


def z_j_summand_weights(j: int, limit: int) -> np.ndarray:
    """f(m) / c_j for m = 0..limit, where Z_j(w) = c_j sum_m f(m) m^{-jw}.

    Straight from the series: (1 + 1/N(w))^{-1} for every prime w dividing m
    but not j, times (1 - h_p/p^2)^{-1} for every rational p dividing m but not j.
    """
    ring = ring_for_order(j)
    weight = np.ones(limit + 1)
    weight[0] = 0.0
    for p in primes_up_to(limit):
        p = int(p)
        if j % p == 0:
            continue
        h = local_h_closed_form(p, ring)
        weight[p::p] *= h / (1 - h / p**2)
    return weight


def z_j_direct(w: float, j: int, term_limit: int = DEFAULT_TERM_LIMIT) -> Estimate:
    """Direct partial sum of Z_j(w) over m <= M with tail c_j M^{1-jw}/(jw - 1).

    g_p <= 1, so every summand is at most c_j m^{-jw}.
    """
    _check_w(w, j)
    s = j * w
    weight = z_j_summand_weights(j, term_limit)
    m = np.arange(1, term_limit + 1, dtype=float)
    terms = weight[1:] * m**-s
    c = j_factor(j)
    value = c * math.fsum(terms)
    tail = c * term_limit ** (1 - s) / (s - 1)
    return Estimate(value + tail / 2, tail / 2 + 8 * np.finfo(float).eps * value)


# -- assembly --------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantBundle:
    ring: str
    j: int
    alpha: float
    r_K: float
    r_K_error: float
    zeta_K_2: float
    zeta_K_2_error: float
    P_value: float
    P_error: float
    Z_value: float
    Z_error: float
    C_j: float
    error_bound: float

    def as_dict(self) -> dict:
        return asdict(self)


def _product_interval(parts: list[Estimate], divide: Estimate) -> tuple[float, float]:
    hi = math.prod(e.upper for e in parts) / divide.lower
    lo = math.prod(e.lower for e in parts) / divide.upper
    return lo, hi


def main_constant(j: int, alpha: float = 0.0, prime_limit: int = DEFAULT_PRIME_LIMIT) -> ConstantBundle:
    if not 0 <= alpha < 0.5:
        raise ValueError("alpha must lie in [0, 1/2)")
    ring = ring_for_order(j)
    r = residue_zeta_K(ring)
    zk = zeta_K_at_2(ring)
    P = euler_P(j, prime_limit)
    Pe = Estimate(P.value, P.error_bound)
    Z = z_j(0.5 + alpha, j, prime_limit)
    C = r.value / zk.value * P.value * Z.value
    lo, hi = _product_interval([r, Pe, Z], zk)
    err = max(hi - C, C - lo) + 4 * np.finfo(float).eps * C
    return ConstantBundle(
        ring=ring.name.lower(), j=j, alpha=alpha,
        r_K=r.value, r_K_error=r.error_bound,
        zeta_K_2=zk.value, zeta_K_2_error=zk.error_bound,
        P_value=P.value, P_error=P.error_bound,
        Z_value=Z.value, Z_error=Z.error_bound,
        C_j=C, error_bound=err,
    )
