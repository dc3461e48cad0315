"""Dirichlet L-functions through the Hurwitz zeta function.

The reference route is the finite sum

    L(s, chi) = q^{-s} sum_{a=1}^{q} chi(a) zeta(s, a/q),

with each zeta(s, x) evaluated by Euler-Maclaurin summation.  The
remainder after M Bernoulli corrections past the N-th term obeys

    |R| <= 4 |(s)_{2M}| / (2 pi)^{2M} * (N + x)^{1 - sigma - 2M} / (sigma + 2M - 1),

which is what ``abs_error_bound`` carries.  An approximate functional
equation built on mpmath's incomplete gamma is kept as a second,
independent evaluator.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy import special

from .characters import PrimitiveCharacter, character_data
from .gauss_sums import tau

EPS = np.finfo(float).eps
DEFAULT_TOL = 1e-13
MAX_BERNOULLI = 60


@dataclass(frozen=True)
class LValue:
    s: complex
    value: complex
    abs_error_bound: float

    def __complex__(self) -> complex:
        return self.value

    def __abs__(self) -> float:
        return abs(self.value)


@lru_cache(maxsize=1)
def _bernoulli_over_factorial() -> np.ndarray:
    # B_{2r} / (2r)!  for r = 0..MAX_BERNOULLI/2
    b = special.bernoulli(MAX_BERNOULLI)
    r = np.arange(0, MAX_BERNOULLI + 1, 2)
    out = b[r] / special.factorial(r, exact=False)
    out.setflags(write=False)
    return out


def _pochhammer_abs(s: complex, n: int) -> float:
    out = 1.0
    for i in range(n):
        out *= abs(s + i)
    return out


@dataclass(frozen=True)
class EMPlan:
    """Cut-off N and number of Bernoulli corrections M for one (s, min x)."""

    N: int
    M: int
    bound: float


def plan_euler_maclaurin(s: complex, x_min: float, tol: float = DEFAULT_TOL) -> EMPlan:
    sigma = s.real
    N = max(8, int(abs(s.imag)) // 2)
    while True:
        for M in range(1, MAX_BERNOULLI // 2):
            if sigma + 2 * M - 1 <= 0:
                continue
            bound = (4 * _pochhammer_abs(s, 2 * M) / (2 * math.pi) ** (2 * M)
                     * (N + x_min) ** (1 - sigma - 2 * M) / (sigma + 2 * M - 1))
            if bound <= tol:
                return EMPlan(N, M, bound)
        N *= 2
        if N > 1 << 20:
            raise ArithmeticError(f"no Euler-Maclaurin plan for s={s}")


def hurwitz_zeta(s, x, tol: float = DEFAULT_TOL):
    """zeta(s, x) for x in (0, 1] (scalar or array) and its truncation bound.

    Returns ``(value, bound)`` with the same shape as ``x``.
    """
    s = complex(s)
    if s == 1:
        raise ValueError("pole of the Hurwitz zeta function at s = 1")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0) or np.any(x > 1):
        raise ValueError("x must lie in (0, 1]")
    plan = plan_euler_maclaurin(s, float(x.min()), tol)
    N, M = plan.N, plan.M
    k = np.arange(N, dtype=float)[:, None]
    head = np.exp(-s * np.log(k + x[None, :])).sum(axis=0)
    y = N + x
    logy = np.log(y)
    ys = np.exp(-s * logy)
    val = head + y * ys / (s - 1) + 0.5 * ys
    coeff = _bernoulli_over_factorial()
    poch = s  # (s)_{2r-1}
    power = ys / y  # y^{-s-1}
    for r in range(1, M + 1):
        val = val + coeff[r] * poch * power
        poch = poch * (s + 2 * r - 1) * (s + 2 * r)
        power = power / (y * y)
    # rounding: every term is at most |head| in size, with N + 2M operations
    rounding = 4 * EPS * (N + 2 * M) * np.abs(np.exp(-s.real * np.log(x)) + np.abs(val))
    bound = plan.bound + rounding
    if scalar:
        return complex(val[0]), float(bound[0])
    return val, bound


def hurwitz_vector(s: complex, q: int, tol: float = DEFAULT_TOL):
    """zeta(s, a/q) for a = 1..q, indexed by a mod q (index 0 holds a = q)."""
    a = np.arange(1, q + 1, dtype=float)
    val, bound = hurwitz_zeta(s, a / q, tol)
    return np.roll(val, 1), np.roll(bound, 1)


def _roots(j: int, conjugate: bool = False) -> np.ndarray:
    sign = -1 if conjugate else 1
    return np.exp(sign * 2j * np.pi * np.arange(j) / j)


def _combine(table: np.ndarray, j: int, zeta: np.ndarray, bound: np.ndarray,
             q: int, s: complex, conjugate: bool = False) -> LValue:
    live = table >= 0
    # group the Hurwitz values by character exponent, then weight by roots of unity
    re = np.bincount(table[live], weights=zeta[live].real, minlength=j)
    im = np.bincount(table[live], weights=zeta[live].imag, minlength=j)
    total = complex(np.dot(re + 1j * im, _roots(j, conjugate)))
    scale = cmath.exp(-s * math.log(q))
    err = abs(scale) * (float(bound[live].sum()) + 4 * EPS * j * float(np.abs(zeta[live]).sum()))
    return LValue(s, scale * total, err)


def dirichlet_L(s, chi, tol: float = DEFAULT_TOL) -> LValue:
    """L(s, chi) for a PrimitiveCharacter, a RationalCharacter, or the trivial character mod 1."""
    s = complex(s)
    table, q, j = character_data(chi)
    if s == 1:
        if q == 1 or np.all(table[table >= 0] == 0):
            raise ValueError("pole at s = 1 for the principal character")
        return _value_at_one(table, q, j)
    zeta, bound = hurwitz_vector(s, q, tol)
    return _combine(table, j, zeta, bound, q, s)


def _value_at_one(table: np.ndarray, q: int, j: int) -> LValue:
    """L(1, chi) = -(1/q) sum_a chi(a) psi(a/q) for nonprincipal chi (the poles cancel)."""
    a = np.arange(1, q)
    live = table[a] >= 0
    vals = _roots(j)[table[a][live]]
    psi = special.digamma(a[live] / q)
    terms = vals * psi
    value = -complex(math.fsum(terms.real), math.fsum(terms.imag)) / q
    return LValue(1 + 0j, value, 8 * EPS * float(np.abs(psi).sum()) / q)


def l_values_of_conductor(s, chars, tol: float = DEFAULT_TOL, conjugate: bool = False) -> list[LValue]:
    """L(s, chi) (or L(s, chi-bar)) for several characters sharing one conductor.

    The Hurwitz vector is computed once and reused by every character.
    """
    s = complex(s)
    chars = list(chars)
    if not chars:
        return []
    q = chars[0].q
    if any(c.q != q for c in chars):
        raise ValueError("characters must share a conductor")
    zeta, bound = hurwitz_vector(s, q, tol)
    out = []
    for chi in chars:
        table, _, j = character_data(chi)
        out.append(_combine(table, j, zeta, bound, q, s, conjugate))
    return out


def log_gamma(z):
    return special.loggamma(z)


def gamma(z):
    return np.exp(special.loggamma(z))


def root_number(chi) -> complex:
    """tau(chi) / (i^a sqrt(q))."""
    a = chi.parity
    return tau(1, chi) / ((1j ** a) * math.sqrt(chi.q))


def fe_factor(s: complex, chi) -> complex:
    """W (q/pi)^{1/2-s} Gamma((1-s+a)/2) / Gamma((s+a)/2)."""
    a = chi.parity
    q = chi.q
    log_ratio = complex(log_gamma((1 - s + a) / 2) - log_gamma((s + a) / 2))
    return root_number(chi) * cmath.exp((0.5 - s) * math.log(q / math.pi) + log_ratio)


def fe_residual(s, chi, tol: float = DEFAULT_TOL) -> float:
    """|L(s, chi) - W (q/pi)^{1/2-s} Gamma-ratio L(1-s, chi-bar)|."""
    s = complex(s)
    if not 0 < s.real < 1:
        raise ValueError("need 0 < Re(s) < 1")
    if not isinstance(chi, PrimitiveCharacter):
        raise TypeError("functional equation needs a primitive family character")
    lhs = l_values_of_conductor(s, [chi], tol)[0].value
    rhs = l_values_of_conductor(1 - s, [chi], tol, conjugate=True)[0].value
    return abs(lhs - fe_factor(s, chi) * rhs)


def fe_residuals_of_conductor(s, chars, tol: float = DEFAULT_TOL) -> list[float]:
    """fe_residual for several characters of one conductor, sharing Hurwitz vectors."""
    s = complex(s)
    lhs = l_values_of_conductor(s, chars, tol)
    rhs = l_values_of_conductor(1 - s, chars, tol, conjugate=True)
    return [abs(l.value - fe_factor(s, chi) * r.value) for chi, l, r in zip(chars, lhs, rhs)]


def central_value(chi, alpha: float = 0.0, tol: float = DEFAULT_TOL) -> LValue:
    """L(1/2 + alpha, chi) for real alpha in [0, 1/2)."""
    if not 0 <= alpha < 0.5:
        raise ValueError("alpha must lie in [0, 1/2)")
    return l_values_of_conductor(0.5 + alpha, [chi], tol)[0]


# -- approximate functional equation (oracle) --------------------------------

def afe_value(s, chi, dps: int = 30) -> complex:
    """L(s, chi) by the smoothed approximate functional equation.

    Lambda(s) = sum chi(n) n^a G_{(s+a)/2}(pi n^2/q) + W sum chi-bar(n) n^a G_{(1-s+a)/2}(pi n^2/q),
    with G_z(y) = y^{-z} Gamma(z, y), and L(s) = Lambda(s) / ((q/pi)^{(s+a)/2} Gamma((s+a)/2)).
    Independent of the Hurwitz route except for the character table and tau.
    """
    table, q, j = character_data(chi)
    a = chi.parity
    w = root_number(chi)
    with mpmath.workdps(dps):
        s = mpmath.mpc(complex(s))
        z1, z2 = (s + a) / 2, (1 - s + a) / 2
        roots = [mpmath.exp(2j * mpmath.pi * k / j) for k in range(j)]
        total = mpmath.mpc(0)
        n = 1
        while True:
            y = mpmath.pi * n * n / q
            if y > dps * 2.5 + 10:
                break
            k = int(table[n % q])
            if k >= 0:
                c = roots[k]
                t1 = y ** (-z1) * mpmath.gammainc(z1, y)
                t2 = y ** (-z2) * mpmath.gammainc(z2, y)
                total += n ** a * (c * t1 + w * mpmath.conj(c) * t2)
            n += 1
        lam = total / ((q / mpmath.pi) ** z1 * mpmath.gamma(z1))
        return complex(lam)
