import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from fixedorder.dds_identities import (
    WEIGHTS, A_direct, A_mobius, MobiusPlan, divisor_tail, euler_examples, euler_product_check,
    ideal_table, mellin_hat, mobius_check, squarefree_primary_d, sumd_check, weight,
)
from fixedorder.quadratic_ring import QInt, factor, is_squarefree, normalize_primary, ring_for_order


def _bump_integral(phi, s):
    a, b = phi.support
    with mpmath.workdps(30):
        f = lambda t: mpmath.exp(-1 / (1 - ((t - phi.center) / phi.radius) ** 2)) * t ** (s - 1)
        return complex(mpmath.quad(f, [a, phi.center, b]))


@pytest.mark.parametrize("name", sorted(WEIGHTS))
def test_mellin_matches_high_precision_quadrature(name):
    phi = weight(name)
    for s in (0, 1, 0.5 + 0.25j, 3j):
        assert abs(mellin_hat(phi, s) - _bump_integral(phi, s)) <= 1e-10


def test_mellin_examples():
    phi = weight("default")
    h0 = mellin_hat(phi, 0).real
    assert 0 < h0 < math.log(3)
    assert abs(mellin_hat(phi, 10j)) < h0


def test_weight_shape():
    phi = weight("default")
    assert phi(0.5) == 0 and phi(1.5) == 0 and phi(0.2) == 0
    assert phi(1.0) == pytest.approx(math.exp(-1))
    xs = np.linspace(0, 2, 101)
    assert np.all(phi(xs) >= 0)
    with pytest.raises(ValueError):
        weight("square")


@given(st.floats(1.1, 6), st.floats(10, 1e6))
def test_divisor_tail_decreases(sigma, X):
    assert divisor_tail(2 * X, sigma) < divisor_tail(X, sigma)


def test_divisor_tail_against_direct_sum():
    X, sigma = 100, 3.0
    d = np.zeros(20001, dtype=np.int64)
    for k in range(1, 20001):
        d[k::k] += 1
    partial = sum(d[n] * n**-sigma for n in range(X + 1, 20001))
    assert partial <= divisor_tail(X, sigma)


def test_ideal_table_counts_match_brute_force():
    for j in (3, 4, 6):
        ring = ring_for_order(j)
        Y = 400
        mode = "e_primary" if j == 6 else "primary"
        bad = 6 if j == 6 else (2 if j == 4 else 3)
        seen = set()
        r = math.isqrt(4 * Y) + 2
        for a, b in itertools.product(range(-r, r + 1), repeat=2):
            x = QInt(a, b, ring)
            nn = x.norm()
            if not 1 <= nn <= Y or math.gcd(nn, bad) != 1:
                continue
            if nn > 1 and not is_squarefree(x):
                continue
            p = normalize_primary(x, mode)[1] if nn > 1 else QInt(1, 0, ring)
            seen.add((p.a, p.b))
        table = ideal_table(j, Y)
        assert len(table.norms) == len(seen)
        assert sorted(table.norms.tolist()) == sorted(QInt(a, b, ring).norm() for a, b in seen)


def test_squarefree_d_list():
    assert squarefree_primary_d(3, 12) == [1, 2, 5, 7, 10, 11]
    assert squarefree_primary_d(4, 12) == [1, 3, 5, 7, 11]
    assert squarefree_primary_d(6, 12) == [1, 5, 7, 11]


def test_direct_side_examples():
    small, big = A_direct(3, 3, 3, 200), A_direct(3, 3, 3, 400)
    assert abs(small.value - big.value) <= small.tail_bound + big.tail_bound
    assert abs(small.value.imag) <= 1e-12
    assert big.tail_bound < small.tail_bound


def test_guard_region():
    with pytest.raises(ValueError):
        A_direct(1.5, 3, 3, 100)
    with pytest.raises(ValueError):
        A_mobius(3, 1.5, 3, 10, 10, 100)


@pytest.mark.parametrize("j", [3, 4, 6])
def test_mobius_rearrangement_small(j):
    check = mobius_check(3, 3, j, MobiusPlan(X=1000, M=150, D=40, Y=4000))
    assert check.passed, check
    assert abs(check.rhs.imag) <= 1e-12


def test_euler_product_examples():
    assert euler_product_check(1, 1, 3, 3).passed
    assert euler_product_check(5, 7, 3, 4).passed
    assert euler_product_check(2, 1, 2.5, 6).passed
    for j in (3, 4, 6):
        for m, d in euler_examples(j):
            assert euler_product_check(m, d, 3, j, Y=5000).passed


def test_euler_product_preconditions():
    with pytest.raises(ValueError):
        euler_product_check(1, 1, 2, 3)
    with pytest.raises(ValueError):
        euler_product_check(1, 12, 3, 3)
    with pytest.raises(ValueError):
        euler_product_check(1, 3, 3, 3)


@pytest.mark.parametrize("j", [3, 4, 6])
def test_rational_d_sum_collapses(j):
    for m in range(1, 21):
        check = sumd_check(m, 3, j, D=200, prime_limit=2000)
        assert check.passed, (m, check)


def test_rational_d_sum_literal_reading_fails_where_m_meets_j():
    assert not sumd_check(9, 3, 3, D=200, prime_limit=2000, reading="literal").passed
    assert not sumd_check(8, 3, 4, D=200, prime_limit=2000, reading="literal").passed
    assert sumd_check(7, 3, 3, D=200, prime_limit=2000, reading="literal").passed
