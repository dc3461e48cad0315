import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fixedorder.characters import PrimitiveCharacter, enumerate_characters
from fixedorder.gauss_sums import (
    GATING_IDENTITIES, check_identity, e_tilde, e_tilde_exponent, gauss_gK, identity_instances,
    primary_elements, random_primary, residue_system, tau, verify_identity,
)
from fixedorder.power_residue import residue_symbol
from fixedorder.quadratic_ring import EISENSTEIN, GAUSSIAN, QInt, divrem, is_e_primary, is_primary, normalize_primary, qint, ring_for_order

orders = st.sampled_from([3, 4, 6])
seeds = st.integers(0, 2**32 - 1)
coord = st.integers(-40, 40)


def _direct_gK(k: QInt, n: QInt, j: int) -> complex:
    """Term-by-term oracle: definitional symbol times the Fraction-based e_tilde."""
    u, v = residue_system(n)
    total = 0j
    for a, b in zip(u.tolist(), v.tolist()):
        x = QInt(a, b, n.ring)
        total += complex(residue_symbol(x, n, j)) * e_tilde(k * x, n)
    return total


def test_e_tilde_trivial_cases():
    assert e_tilde(qint(0)) == 1
    for ring in (GAUSSIAN, EISENSTEIN):
        for a, b in itertools.product(range(-5, 6), repeat=2):
            assert e_tilde_exponent(QInt(a, b, ring)) == 0


@given(st.sampled_from([GAUSSIAN, EISENSTEIN]), coord, coord, coord, coord)
def test_e_tilde_has_unit_modulus(ring, a, b, c, d):
    den = QInt(c, d, ring)
    if not den:
        with pytest.raises(ZeroDivisionError):
            e_tilde(QInt(a, b, ring), den)
        return
    assert abs(e_tilde(QInt(a, b, ring), den)) == pytest.approx(1.0)


def test_e_tilde_matches_complex_formula():
    for ring, sqrt_d in ((GAUSSIAN, 2j), (EISENSTEIN, 1j * math.sqrt(3))):
        z_num, z_den = QInt(3, -2, ring), QInt(5, 1, ring)
        z = complex(z_num) / complex(z_den)
        want = cmath.exp(2j * math.pi * (z / sqrt_d - z.conjugate() / sqrt_d))
        assert cmath.isclose(e_tilde(z_num, z_den), want, abs_tol=1e-12)


@pytest.mark.parametrize("n", [qint(3, 2), qint(5), qint(2, 2), QInt(4, 3, EISENSTEIN), QInt(7, 0, EISENSTEIN)])
def test_residue_system_is_complete(n):
    u, v = residue_system(n)
    xs = [QInt(a, b, n.ring) for a, b in zip(u.tolist(), v.tolist())]
    assert len(xs) == n.norm()
    for x, y in itertools.combinations(xs, 2):
        assert divrem(x - y, n)[1]


@given(orders, seeds)
def test_gauss_sum_matches_termwise_oracle(j, seed):
    rng = np.random.default_rng(seed)
    n = random_primary(j, 300, rng)
    ring = ring_for_order(j)
    k = QInt(*(int(x) for x in rng.integers(-20, 20, size=2)), ring)
    assert cmath.isclose(gauss_gK(k, n, j).value, _direct_gK(k, n, j), abs_tol=1e-9)


@pytest.mark.parametrize("j", [3, 4, 6])
def test_modulus_law_square_free(j):
    for chi in enumerate_characters(j, 600):
        g = gauss_gK(1, chi.n, j)
        assert abs(abs(g.value) ** 2 - chi.q) <= 1e-6 * chi.q


@pytest.mark.parametrize("j", [3, 4, 6])
def test_gauss_sum_vanishes_off_square_free(j):
    rng = np.random.default_rng(j)
    for _ in range(10):
        n = random_primary(j, 1000, rng, squarefree=False)
        assert abs(gauss_gK(1, n, j).value) <= 1e-6 * math.sqrt(n.norm())


def test_tau_properties():
    for chi in enumerate_characters(3, 400)[::5]:
        t = tau(1, chi)
        assert abs(t) ** 2 == pytest.approx(chi.q, rel=1e-10)
        assert abs(tau(chi.q, chi)) < 1e-9


def test_tau_of_quadratic_character_mod_five():
    from fixedorder.characters import kronecker_character

    assert tau(1, kronecker_character(5)) == pytest.approx(math.sqrt(5))


@pytest.mark.parametrize("name", GATING_IDENTITIES)
@pytest.mark.parametrize("j", [3, 4, 6])
def test_gating_identities_hold(name, j):
    rng = np.random.default_rng(101)
    report = check_identity(name, j, identity_instances(name, j, 300, rng, samples=25))
    assert report.instances > 0
    assert report.passed, report


def test_spot_instances():
    ring3, ring4 = EISENSTEIN, GAUSSIAN
    n13 = normalize_primary(QInt(4, 1, ring3))[1]
    assert n13.norm() == 13
    assert verify_identity("grel", 3, d=QInt(7, 0, ring3), n=n13) <= 1e-8
    n5 = normalize_primary(qint(2, 1))[1]
    assert verify_identity("tauprim1", 4, n=n5) <= 1e-8


@pytest.mark.parametrize("j", [3, 4, 6])
def test_printed_product_formula_fails(j):
    rng = np.random.default_rng(7)
    report = check_identity("prod_2_03_literal", j, identity_instances("prod_2_03_literal", j, 300, rng, 25))
    assert not report.passed


def test_printed_quartic_twist_fails_exactly_on_half():
    chars = enumerate_characters(4, 500)
    bad = [c for c in chars if verify_identity("tauprim1_literal", 4, n=c.n) > 1e-8]
    flagged = [c for c in chars if residue_symbol(qint(0, 2), c.n, 4).k == 2]
    assert bad and [c.n for c in bad] == [c.n for c in flagged]


@pytest.mark.parametrize("name", GATING_IDENTITIES)
def test_injected_sign_bug_is_caught(name):
    rng = np.random.default_rng(5)
    inst = identity_instances(name, 4, 200, rng, samples=10)
    assert not check_identity(name, 4, inst, sign_flip=True).passed


def test_identity_preconditions():
    n = normalize_primary(qint(2, 1))[1]
    with pytest.raises(ValueError):
        verify_identity("gmult", 4, r=1, s=n, n=n)
    with pytest.raises(ValueError):
        verify_identity("grel", 4, d=qint(1, 2), n=n)
    with pytest.raises(ValueError):
        verify_identity("nonsense", 4, n=n)


@pytest.mark.parametrize("j", [3, 4, 6])
def test_primary_elements_pick_one_generator_per_ideal(j):
    ring = ring_for_order(j)
    bad = 6 if j == 6 else ring.ramified_prime
    elems = primary_elements(j, 300)
    test = is_e_primary if j == 6 else is_primary
    assert all(test(n) and 1 < n.norm() <= 300 for n in elems)
    r = 40
    nonzero = sum(1 < QInt(a, b, ring).norm() <= 300 and math.gcd(QInt(a, b, ring).norm(), bad) == 1
                  for a, b in itertools.product(range(-r, r + 1), repeat=2))
    assert len(elems) == nonzero // ring.unit_count


@pytest.mark.parametrize("j", [3, 4, 6])
def test_twisting_and_tau_shift_at_full_sample_size(j):
    rng = np.random.default_rng(j)
    gmult = check_identity("gmult", j, identity_instances("gmult", j, 500, rng, samples=500))
    shift = check_identity("tauprim", j, identity_instances("tauprim", j, 2000, rng, samples=100))
    assert gmult.instances == 500 and gmult.passed
    assert shift.instances == 100 and shift.passed
