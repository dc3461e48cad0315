import math

import mpmath
import pytest

from fixedorder.characters import kronecker_character
from fixedorder.constants import (
    euler_P, j_factor, local_h, local_h_closed_form, main_constant, residue_by_class_number,
    residue_by_digamma, residue_zeta_K, z_j, z_j_direct, z_j_summand_weights, zeta_K_at_2,
)
from fixedorder.lfun import dirichlet_L
from fixedorder.quadratic_ring import EISENSTEIN, GAUSSIAN
from fixedorder.sieves import primes_up_to

LEIBNIZ = float(mpmath.nsum(lambda k: (-1) ** k / (2 * k + 1), [0, mpmath.inf]))
CATALAN = float(mpmath.nsum(lambda k: (-1) ** k / (2 * k + 1) ** 2, [0, mpmath.inf]))


def _chi_minus_3_series(s):
    # L(s, chi_-3) = sum_k (3k+1)^-s - (3k+2)^-s
    return float(mpmath.nsum(lambda k: (3 * k + 1) ** -s - (3 * k + 2) ** -s, [0, mpmath.inf]))


def test_residue_gaussian():
    r = residue_zeta_K(GAUSSIAN)
    assert abs(r.value - LEIBNIZ) <= 1e-10 and abs(r.value - math.pi / 4) <= 1e-10
    assert abs(residue_by_digamma(GAUSSIAN) - residue_by_class_number(GAUSSIAN)) <= 1e-10


def test_residue_eisenstein():
    r = residue_zeta_K(EISENSTEIN)
    assert abs(r.value - math.pi / (3 * math.sqrt(3))) <= 1e-10
    assert abs(r.value - _chi_minus_3_series(1)) <= 1e-10
    assert abs(residue_by_digamma(EISENSTEIN) - residue_by_class_number(EISENSTEIN)) <= 1e-10


def test_residue_matches_l_at_one():
    for ring in (GAUSSIAN, EISENSTEIN):
        chi = kronecker_character(ring.discriminant)
        assert abs(dirichlet_L(1, chi).value - residue_by_class_number(ring)) <= 1e-12


def test_zeta_K_at_two():
    z2 = math.pi**2 / 6
    g = zeta_K_at_2(GAUSSIAN)
    e = zeta_K_at_2(EISENSTEIN)
    assert abs(g.value - z2 * CATALAN) <= 1e-9
    assert abs(e.value - z2 * _chi_minus_3_series(2)) <= 1e-9
    assert 1 < g.value < 2 and 1 < e.value < 2


def test_local_factors_match_closed_form():
    for ring in (GAUSSIAN, EISENSTEIN):
        for p in primes_up_to(10_000):
            assert local_h(int(p), ring) == pytest.approx(local_h_closed_form(int(p), ring), rel=1e-14)


def test_j_factor_values():
    assert j_factor(3) == pytest.approx(3 / 4)
    assert j_factor(4) == pytest.approx(2 / 3)
    assert j_factor(6) == pytest.approx(3 / 5)


@pytest.mark.parametrize("j", [3, 4, 6])
def test_euler_P_convergence(j):
    small, big = euler_P(j, 10**5), euler_P(j, 10**6)
    assert 0 < big.value < 1
    assert big.raw_partial <= small.raw_partial
    assert abs(big.value - small.value) <= small.error_bound + big.error_bound
    assert big.error_bound <= 1e-8
    # the plain partial product brackets the accelerated value within its own tail
    assert big.raw_partial - big.raw_tail_bound <= big.value <= big.raw_partial


def test_euler_P_stable_between_limits():
    assert abs(euler_P(3, 10**6).value - euler_P(3, 2 * 10**6).value) <= 1e-8


@pytest.mark.parametrize("j", [3, 4, 6])
def test_z_j_routes_agree(j):
    euler = z_j(0.5, j)
    direct = z_j_direct(0.5, j, 10**6)
    assert abs(euler.value - direct.value) <= euler.error_bound + direct.error_bound
    assert euler.error_bound <= 1e-6
    assert euler.value >= j_factor(j)


def test_z_j_stable_between_limits():
    assert abs(z_j(0.5, 3, 10**6).value - z_j(0.5, 3, 2 * 10**6).value) <= 1e-8


def test_z_j_first_summand():
    for j in (3, 4, 6):
        assert z_j_summand_weights(j, 10)[1] == 1.0


def test_z_j_deep_value_against_series():
    # at j*w = 6 the direct sum converges fast enough to be an exact oracle
    for j in (3, 4, 6):
        w = 6 / j
        weights = z_j_summand_weights(j, 2000)
        series = j_factor(j) * math.fsum(weights[m] * m**-6.0 for m in range(1, 2001))
        assert abs(z_j(w, j, 10**5).value - series) <= 1e-12


def test_z_j_rejects_divergent_point():
    with pytest.raises(ValueError):
        z_j(1 / 3, 3)


@pytest.mark.parametrize("j", [3, 4, 6])
def test_main_constant_bundle(j):
    b = main_constant(j, 0.0)
    assert b.C_j > 0 and b.error_bound <= 1e-4
    assert b.C_j == pytest.approx(b.r_K / b.zeta_K_2 * b.P_value * b.Z_value, rel=1e-12)
    assert all(v > 0 for v in (b.r_K, b.zeta_K_2, b.P_value, b.Z_value))


def test_main_constant_decreases_in_alpha():
    values = [main_constant(3, a, 10**5).C_j for a in (0.0, 0.1, 0.25, 0.45)]
    assert all(x > y for x, y in zip(values, values[1:]))
    with pytest.raises(ValueError):
        main_constant(3, 0.5)
