import cmath

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from fixedorder.gauss_sums import random_primary
from fixedorder.power_residue import (
    RootOfUnity, prime_symbol_table, rational_symbol_is_one, residue_symbol, residue_symbol_fast,
    symbol_exponents, verify_reciprocity,
)
from fixedorder.quadratic_ring import EISENSTEIN, GAUSSIAN, QInt, factor, gcd, qint, ring_for_order

orders = st.sampled_from([3, 4, 6])
seeds = st.integers(0, 2**32 - 1)


def _pair(j, seed, max_norm=3000):
    rng = np.random.default_rng(seed)
    while True:
        m, n = random_primary(j, max_norm, rng), random_primary(j, max_norm, rng)
        if gcd(m, n).is_unit():
            return m, n


def _element(ring, seed, size=200):
    a, b = np.random.default_rng(seed).integers(-size, size + 1, size=2)
    return QInt(int(a), int(b), ring)


def test_root_of_unity_arithmetic():
    a, b = RootOfUnity(6, 5), RootOfUnity(6, 4)
    assert (a * b).k == 3
    assert (a * RootOfUnity.zero(6)).is_zero
    assert a.conjugate().k == 1
    assert (a**6).k == 0
    assert str(RootOfUnity.zero(3)) == "0" and str(RootOfUnity(3, 2)) == "2"
    assert cmath.isclose(complex(RootOfUnity(4, 1)), 1j)


def test_symbol_examples():
    w = QInt(0, 1, EISENSTEIN)
    assert residue_symbol(w, 2, 3) == RootOfUnity(3, 1)
    assert residue_symbol(qint(0, 1), qint(2, 1), 4) == RootOfUnity(4, 1)
    for j in (3, 4, 6):
        assert residue_symbol(qint(5, 0, ring_for_order(j)), 1, j) == RootOfUnity.one(j)


def test_symbol_rejects_bad_modulus():
    with pytest.raises(ValueError):
        residue_symbol(2, 3, 3)
    with pytest.raises(ValueError):
        residue_symbol(1, 0, 4)
    with pytest.raises(ValueError):
        residue_symbol(qint(1, 1), 5, 3)


@given(orders, seeds)
def test_multiplicative_in_numerator(j, seed):
    ring = ring_for_order(j)
    n = _pair(j, seed)[1]
    m1, m2 = _element(ring, seed + 1), _element(ring, seed + 2)
    assert residue_symbol(m1 * m2, n, j) == residue_symbol(m1, n, j) * residue_symbol(m2, n, j)


@given(orders, seeds)
def test_multiplicative_in_modulus(j, seed):
    ring = ring_for_order(j)
    n1, n2 = _pair(j, seed, 500)
    m = _element(ring, seed + 3)
    assert residue_symbol(m, n1 * n2, j) == residue_symbol(m, n1, j) * residue_symbol(m, n2, j)


@given(orders, seeds)
def test_zero_exactly_when_not_coprime(j, seed):
    m, n = _pair(j, seed, 500)
    assert residue_symbol(m * n, n, j).is_zero
    assert residue_symbol_fast(m * n, n, j).is_zero
    assert not residue_symbol(m, n, j).is_zero


@given(seeds)
def test_orders_compatible_in_eisenstein(seed):
    m, n = _pair(6, seed)
    s6 = residue_symbol(m, n, 6)
    assert cmath.isclose(complex(s6**3), complex(residue_symbol(m, n, 2)), abs_tol=1e-12)
    assert cmath.isclose(complex(s6**2), complex(residue_symbol(m, n, 3)), abs_tol=1e-12)


def test_conjugate_over_n_is_quadratic():
    """(conj(n)/n)_6 is a quadratic symbol: its cube root part vanishes."""
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = random_primary(6, 3000, rng, squarefree=True)
        s6 = residue_symbol(n.conjugate(), n, 6)
        if s6.is_zero:
            continue
        assert s6.k in (0, 3)
        assert cmath.isclose(complex(s6), complex(residue_symbol(n.conjugate(), n, 2)), abs_tol=1e-12)


@given(orders, seeds)
def test_fast_route_matches_definition(j, seed):
    ring = ring_for_order(j)
    n = _pair(j, seed)[1]
    m = _element(ring, seed + 5, size=10_000)
    assert residue_symbol_fast(m, n, j) == residue_symbol(m, n, j)


def test_fast_route_example():
    ring = EISENSTEIN
    pi = next(p for p, _ in factor(QInt(13, 0, ring)).factors)
    m = QInt(3, 1, ring)
    assert residue_symbol_fast(m, pi, 3) == residue_symbol(m, pi, 3)


@given(orders, seeds)
def test_reciprocity_holds(j, seed):
    m, n = _pair(j, seed)
    assert verify_reciprocity(m, n, j)


def test_cubic_reciprocity_is_symmetric():
    rng = np.random.default_rng(9)
    for _ in range(100):
        m, n = _pair(3, int(rng.integers(2**32)))
        assert residue_symbol(m, n, 3) == residue_symbol(n, m, 3)


def test_reciprocity_preconditions():
    n = random_primary(3, 100, np.random.default_rng(0))
    with pytest.raises(ValueError):
        verify_reciprocity(n, n, 3)
    with pytest.raises(ValueError):
        verify_reciprocity(qint(2, 1), qint(3), 4)


def test_rational_symbols_are_trivial():
    assert rational_symbol_is_one(5, 7, 3)
    assert rational_symbol_is_one(5, 7, 4)
    with pytest.raises(ValueError):
        rational_symbol_is_one(5, 10, 3)


@given(orders, seeds)
def test_prime_table_matches_definition(j, seed):
    rng = np.random.default_rng(seed)
    n = random_primary(j, 2000, rng, squarefree=True)
    u = rng.integers(-500, 500, size=40)
    v = rng.integers(-500, 500, size=40)
    got = symbol_exponents(n, j, u, v)
    ring = ring_for_order(j)
    want = [residue_symbol(QInt(int(a), int(b), ring), n, j) for a, b in zip(u, v)]
    assert [(-1 if w.is_zero else w.k) for w in want] == got.tolist()


def test_prime_table_for_inert_prime():
    pi = QInt(7, 0, GAUSSIAN)
    table = prime_symbol_table(pi, 4)
    rng = np.random.default_rng(1)
    for a, b in rng.integers(-30, 30, size=(30, 2)):
        x = QInt(int(a), int(b), GAUSSIAN)
        want = residue_symbol(x, pi, 4)
        got = int(table.values(np.array([x.a]), np.array([x.b]))[0])
        assert got == (-1 if want.is_zero else want.k)
