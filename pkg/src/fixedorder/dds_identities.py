"""Truncated double Dirichlet series and their rearrangements.

    A_j(s, w) = sum over the family of L(w, chi) / q^s                       (direct)
              = sum_m m^-w sum_d mu(d) chi^(m)(d) |d|^-2s sum_n (m/n)_j N(n)^-s   (Mobius)

Both sides are truncated deep inside the region of absolute convergence,
where triangle-inequality tails are small and rigorous.  The smooth weights
and their Mellin transforms also live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, sparse, special

from .characters import enumerate_characters, group_by_conductor
from .lfun import hurwitz_zeta, l_values_of_conductor
from .power_residue import residue_symbol, symbol_exponents
from .quadratic_ring import QInt, Ring, factor_integer, primes_above, ring_for_order
from .sieves import primes_up_to

EPS = np.finfo(float).eps
DEEP_REGION = 2.0


# -- smooth weights -----------------------------------------------------------------

@dataclass(frozen=True)
class SmoothWeight:
    """exp(-1 / (1 - ((x - c)/r)^2)) on (c - r, c + r), zero elsewhere."""

    name: str
    center: float
    radius: float

    @property
    def support(self) -> tuple[float, float]:
        return self.center - self.radius, self.center + self.radius

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / self.radius
        inside = np.abs(u) < 1
        out = np.zeros_like(x)
        out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return out if out.ndim else float(out)


WEIGHTS = {
    "default": SmoothWeight("default", 1.0, 0.5),
    "narrow": SmoothWeight("narrow", 1.0, 0.25),
    "wide": SmoothWeight("wide", 1.0, 0.75),
}


def weight(name: str) -> SmoothWeight:
    try:
        return WEIGHTS[name]
    except KeyError:
        raise ValueError(f"unknown weight {name!r}; choose from {sorted(WEIGHTS)}") from None


def mellin_hat(phi: SmoothWeight, s) -> complex:
    """int_0^inf phi(t) t^s dt/t by adaptive quadrature on the support."""
    s = complex(s)
    a, b = phi.support
    f = lambda t: phi(t) * t ** (s - 1)
    re, _ = integrate.quad(lambda t: f(t).real, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)
    im, _ = integrate.quad(lambda t: f(t).imag, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)
    return complex(re, im)


# -- tails ----------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedSeriesValue:
    value: complex
    truncation: int
    tail_bound: float


def divisor_tail(X: float, sigma: float) -> float:
    """Upper bound for sum_{n > X} d(n) n^-sigma, sigma > 1.

    Partial summation with sum_{n <= t} d(n) <= t (log t + 1).
    """
    if sigma <= 1:
        raise ValueError("need sigma > 1")
    X = max(float(X), 1.0)
    g = X ** (1 - sigma)
    return sigma * (g * (math.log(X) + 1) / (sigma - 1) + g / (sigma - 1) ** 2)


def power_tail(X: float, sigma: float) -> float:
    """sum_{n > X} n^-sigma <= X^{1-sigma} / (sigma - 1)."""
    return max(float(X), 1.0) ** (1 - sigma) / (sigma - 1)


def _zeta(sigma: float) -> float:
    return float(special.zeta(sigma))


def _guard(s: complex, w: complex) -> None:
    if s.real < DEEP_REGION or w.real < DEEP_REGION:
        raise ValueError(f"need Re(s), Re(w) >= {DEEP_REGION} for honest tail bounds")


# -- the direct side ------------------------------------------------------------------

def A_direct(s, w, j: int, X: int, include_trivial: bool = True) -> TruncatedSeriesValue:
    """sum over family characters of conductor <= X of L(w, chi) q^-s.

    ``include_trivial`` adds the n = 1 term zeta(w) that the Mobius form contains.
    Tail: at most d(q) characters of conductor q, each with |L(w, chi)| <= zeta(Re w).
    """
    s, w = complex(s), complex(w)
    _guard(s, w)
    total = []
    err = 0.0
    for q, chars in group_by_conductor(enumerate_characters(j, X)).items():
        scale = q ** -s
        for lv in l_values_of_conductor(w, chars):
            total.append(lv.value * scale)
            err += lv.abs_error_bound * abs(scale)
    if include_trivial:
        z, zerr = hurwitz_zeta(w, 1.0)
        total.append(z)
        err += zerr
    value = complex(math.fsum(t.real for t in total), math.fsum(t.imag for t in total))
    tail = _zeta(w.real) * divisor_tail(X, s.real) + err
    return TruncatedSeriesValue(value, X, tail)


# -- ideals and symbols ---------------------------------------------------------------

@dataclass(frozen=True)
class IdealTable:
    """Square-free ideals of O_K coprime to j with norm <= Y.

    ``membership`` is an (ideal x prime) 0/1 matrix; row 0 is the unit ideal.
    """

    j: int
    limit: int
    primes: tuple[QInt, ...]
    prime_norms: np.ndarray
    norms: np.ndarray
    membership: sparse.csr_matrix


def prime_ideals(j: int, limit: int) -> list[QInt]:
    """Prime elements of O_K not dividing j, with norm <= limit, sorted by norm."""
    ring = ring_for_order(j)
    out = []
    for p in primes_up_to(limit):
        p = int(p)
        if j % p == 0 or p == ring.ramified_prime:
            continue
        for pi in primes_above(p, ring):
            if pi.norm() <= limit:
                out.append(pi)
    out.sort(key=lambda pi: (pi.norm(), pi.a, pi.b))
    return out


@lru_cache(maxsize=16)
def ideal_table(j: int, limit: int) -> IdealTable:
    primes = prime_ideals(j, limit)
    pn = np.array([pi.norm() for pi in primes], dtype=np.int64)
    norms = [1]
    rows: list[list[int]] = [[]]
    stack = [(1, -1, [])]
    while stack:
        norm, last, members = stack.pop()
        for idx in range(last + 1, len(primes)):
            nn = norm * int(pn[idx])
            if nn > limit:
                break
            m2 = members + [idx]
            norms.append(nn)
            rows.append(m2)
            stack.append((nn, idx, m2))
    indptr = np.cumsum([0] + [len(r) for r in rows])
    indices = np.array([i for r in rows for i in r], dtype=np.int64)
    data = np.ones(len(indices), dtype=np.int64)
    memb = sparse.csr_matrix((data, indices, indptr), shape=(len(rows), len(primes)))
    return IdealTable(j, limit, tuple(primes), pn, np.array(norms, dtype=np.int64), memb)


def prime_symbol_matrix(primes, j: int, ms: np.ndarray) -> np.ndarray:
    """(m / pi)_j exponents, one row per prime, one column per m; -1 marks zero."""
    out = np.empty((len(primes), len(ms)), dtype=np.int64)
    for i, pi in enumerate(primes):
        out[i] = symbol_exponents(pi, j, ms)
    return out


def _ideal_symbol_block(table: IdealTable, exps: np.ndarray, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Exponent sums and zero flags of (m / n)_j for every ideal n in the table."""
    k = table.membership @ np.where(exps < 0, 0, exps)
    z = table.membership @ (exps < 0).astype(np.int64)
    return k % j, z > 0


def squarefree_primary_d(j: int, D: int) -> list[int]:
    """|d| for the square-free rational d <= D coprime to j (one primary sign each)."""
    ring = ring_for_order(j)
    bad = set(factor_integer(j)) | {ring.ramified_prime}
    out = [1]
    for d in range(2, D + 1):
        f = factor_integer(d)
        if all(e == 1 for e in f.values()) and not bad & set(f):
            out.append(d)
    return out


def _mobius(d: int) -> int:
    f = factor_integer(d) if d > 1 else {}
    return 0 if any(e > 1 for e in f.values()) else (-1) ** len(f)


# -- the Mobius side ------------------------------------------------------------------

def A_mobius(s, w, j: int, M: int, D: int, Y: int, block: int = 256) -> TruncatedSeriesValue:
    """The m <= M, |d| <= D, N(n) <= Y truncation of the Mobius-inverted triple sum.

    Every symbol is evaluated directly: (m/d)_j by factoring d, (m/n)_j from
    the prime symbols of n.
    """
    s, w = complex(s), complex(w)
    _guard(s, w)
    ring = ring_for_order(j)
    table = ideal_table(j, Y)
    ds = squarefree_primary_d(j, D)
    roots = np.exp(2j * np.pi * np.arange(j) / j)
    weights_n = table.norms.astype(float) ** -s
    coprime = np.array([np.gcd(table.norms, d) == 1 for d in ds], dtype=float)  # (d, n)
    d_coef = np.array([_mobius(d) * float(d) ** (-2 * s) for d in ds], dtype=complex)
    parts = []
    for start in range(1, M + 1, block):
        ms = np.arange(start, min(M, start + block - 1) + 1, dtype=np.int64)
        k, zero = _ideal_symbol_block(table, prime_symbol_matrix(table.primes, j, ms), j)
        vals = np.where(zero, 0, roots[k]) * weights_n[:, None]  # (n, m)
        inner = coprime @ vals  # (d, m)
        chi_d = np.array([symbol_exponents(QInt(d, 0, ring), j, ms) for d in ds])
        chi_d = np.where(chi_d < 0, 0, roots[np.where(chi_d < 0, 0, chi_d)])
        per_m = (d_coef[:, None] * chi_d * inner).sum(axis=0) * ms.astype(float) ** (-w)
        parts.extend(per_m.tolist())
    value = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    sr, wr = s.real, w.real
    zk = _zeta(sr) ** 2  # zeta_K(sigma) <= zeta(sigma)^2
    tail_m = power_tail(M, wr) * _zeta(2 * sr) * zk
    tail_d = _zeta(wr) * power_tail(D, 2 * sr) * zk
    tail_n = _zeta(wr) * _zeta(2 * sr) * divisor_tail(Y, sr)
    rounding = 16 * EPS * _zeta(wr) * _zeta(2 * sr) * zk * len(ds)
    return TruncatedSeriesValue(value, M, tail_m + tail_d + tail_n + rounding)


# -- Euler product over prime ideals --------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    name: str
    lhs: complex
    rhs: complex
    residual: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.bound


def euler_product_check(m: int, d: int, s: float, j: int, Y: int = 20_000) -> IdentityCheck:
    """Square-free Dirichlet series of (m/.)_j over n coprime to jd against its Euler product.

    Both are truncated at norm Y; they differ only by square-free n with
    N(n) > Y built from primes of norm <= Y, so the gap is at most
    sum_{N(n) > Y} N(n)^-s <= sum_{k > Y} d(k) k^-s.
    """
    s = float(s)
    if s < 2.5:
        raise ValueError("need s >= 2.5")
    d = abs(int(d))
    f = factor_integer(d) if d > 1 else {}
    if any(e > 1 for e in f.values()):
        raise ValueError("d must be square-free")
    if math.gcd(d, j) != 1 or ring_for_order(j).ramified_prime in f:
        raise ValueError("d must be coprime to j")
    table = ideal_table(j, Y)
    exps = prime_symbol_matrix(table.primes, j, np.array([m]))[:, 0]
    roots = np.exp(2j * np.pi * np.arange(j) / j)
    chi_p = np.where(exps < 0, 0, roots[np.where(exps < 0, 0, exps)])
    k, zero = _ideal_symbol_block(table, exps[:, None], j)
    vals = np.where(zero[:, 0], 0, roots[k[:, 0]]) * table.norms.astype(float) ** -s
    keep = np.gcd(table.norms, d) == 1
    series = complex(math.fsum(vals[keep].real), math.fsum(vals[keep].imag))
    pkeep = np.gcd(table.prime_norms, d) == 1
    logs = np.log(1 + chi_p[pkeep] * table.prime_norms[pkeep].astype(float) ** -s)
    product = complex(np.exp(complex(math.fsum(logs.real), math.fsum(logs.imag))))
    bound = divisor_tail(Y, s) + 16 * EPS * _zeta(s) ** 2 * max(1, len(logs)) ** 0.5
    return IdentityCheck("euler", series, product, abs(series - product), bound)


# -- the rational d-sum ---------------------------------------------------------------

def _prime_local(m: int, p: int, j: int, s: float) -> complex:
    """prod over w | p of (1 + (m/w)_j N(w)^-s)^-1, with (m/w)_j = 0 when w | m or w | j."""
    ring = ring_for_order(j)
    out = 1.0 + 0j
    for pi in primes_above(p, ring):
        if j % p == 0 or p == ring.ramified_prime or m % p == 0:
            continue
        chi = complex(residue_symbol(m, pi, j))
        out /= 1 + chi * pi.norm() ** -s
    return out


def sumd_check(m: int, s: float, j: int, D: int = 400, prime_limit: int = 5_000,
               reading: str = "corrected") -> IdentityCheck:
    """The rational d-sum against P(s, chi^(m)) times its correction at primes of m.

    ``reading="corrected"`` applies the correction at p | m with p not dividing j;
    ``reading="literal"`` applies it at every p | m/(m, j), p | j included.
    """
    if reading not in ("corrected", "literal"):
        raise ValueError(reading)
    lhs_terms = []
    for d in squarefree_primary_d(j, D):
        if math.gcd(d, m) != 1:
            continue
        term = _mobius(d) * float(d) ** (-2 * s)
        for p in factor_integer(d) if d > 1 else {}:
            term = term * _prime_local(m, p, j, s)
        lhs_terms.append(term)
    lhs = complex(math.fsum(t.real for t in lhs_terms), math.fsum(t.imag for t in lhs_terms))
    logs = []
    for p in primes_up_to(prime_limit):
        p = int(p)
        if j % p == 0:
            continue
        logs.append(np.log(1 - p ** (-2 * s) * _prime_local(m, p, j, s)))
    P = complex(np.exp(complex(math.fsum(x.real for x in logs), math.fsum(x.imag for x in logs))))
    if reading == "corrected":
        ps = [p for p in (factor_integer(m) if m > 1 else {}) if j % p]
    else:
        rest = m // math.gcd(m, j)
        ps = list(factor_integer(rest)) if rest > 1 else []
    rhs = P
    for p in ps:
        rhs /= 1 - p ** (-2 * s) * _prime_local(m, p, j, s)
    z2 = _zeta(s) ** 2
    # each d-term is at most |d|^-2s zeta(s)^2; omitted P factors have |log| <= 1.5 p^-2s
    tail_lhs = z2 * power_tail(D, 2 * s)
    tail_rhs = abs(rhs) * math.expm1(1.5 * power_tail(prime_limit, 2 * s))
    bound = tail_lhs + tail_rhs + 64 * EPS * z2
    return IdentityCheck(f"sumd_{reading}", lhs, rhs, abs(lhs - rhs), bound)


# -- the rearrangement as one check -------------------------------------------------

@dataclass(frozen=True)
class MobiusPlan:
    X: int
    M: int
    D: int
    Y: int


def default_mobius_plan(s: float) -> MobiusPlan:
    """Truncations whose combined tails stay near 1e-4 or below; deeper s needs less."""
    if s >= 3:
        return MobiusPlan(X=2000, M=300, D=60, Y=8000)
    return MobiusPlan(X=5000, M=1000, D=60, Y=15000)


def mobius_check(s, w, j: int, plan: MobiusPlan | None = None) -> IdentityCheck:
    """Direct family sum against the Mobius-inverted triple sum, within both tails."""
    plan = plan or default_mobius_plan(complex(s).real)
    direct = A_direct(s, w, j, plan.X)
    mobius = A_mobius(s, w, j, plan.M, plan.D, plan.Y)
    return IdentityCheck("mobius", direct.value, mobius.value, abs(direct.value - mobius.value),
                         direct.tail_bound + mobius.tail_bound)


EULER_EXAMPLES = ((1, 1), (5, 7), (2, 1), (7, 5), (11, 13))


def euler_examples(j: int) -> list[tuple[int, int]]:
    """The fixed (m, d) pairs valid for order j: d coprime to j and square-free."""
    ram = ring_for_order(j).ramified_prime
    return [(m, d) for m, d in EULER_EXAMPLES if math.gcd(d, j) == 1 and d % ram]
