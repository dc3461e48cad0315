import math

import numpy as np
import pytest

from fixedorder.characters import admissible_conductors, enumerate_characters, oracle_count
from fixedorder.dds_identities import A_direct, weight
from fixedorder.moment_harness import (
    LValueCache, conjugate_pair_gap, conductors_in_support, first_moment, fit_exponent,
    nonvanishing_report, predicted_error_exponent, scan, secondary_pole, two_term_fit,
    weighted_family_sum,
)
from fixedorder.parallel import make_mapper, parallel_map, resolve_threads


def test_char_count_matches_oracle_on_support():
    row = first_moment(3, 40, 0.0, "default")
    assert row.char_count == sum(oracle_count(3, q) for q in range(21, 60) if q % 3)


def test_row_invariants():
    row = first_moment(4, 300, 0.1, "wide")
    assert row.main_term > 0
    assert row.char_count >= row.nonvanishing_count >= 0
    assert abs(row.imag_part) <= 1e-9 * row.abs_mass
    assert row.ratio == row.lhs / row.main_term
    # Phi-hat(0) = int Phi(t) dt/t exceeds Phi-hat(1) = int Phi(t) dt for a weight centred at 1
    assert row.main_term_at_zero > row.main_term


def test_parameter_checks():
    with pytest.raises(ValueError):
        first_moment(3, 5)
    with pytest.raises(ValueError):
        first_moment(3, 100, 0.5)


def test_ratio_positive_for_j3():
    cache = LValueCache()
    for Q in (100, 200, 400, 800):
        assert first_moment(3, Q, cache=cache).ratio > 0


def test_support_is_open_interval():
    qs = conductors_in_support(3, 100, weight("default"))
    assert min(qs) > 50 and max(qs) < 150
    assert set(qs) == {q for q in admissible_conductors(3, 150) if 50 < q < 150}


def test_conjugate_pairing():
    for j in (3, 4, 6):
        assert conjugate_pair_gap(j, 600) <= 1e-9


def test_weighted_sum_matches_direct_series():
    # the moment's summation path reproduces the series evaluation at s = w = 3
    X = 300
    qs = admissible_conductors(3, X)
    fs = weighted_family_sum(3, 3, qs, lambda q: q ** -3.0)
    direct = A_direct(3, 3, 3, X, include_trivial=False)
    assert abs(fs.value - direct.value) <= 1e-13
    assert fs.char_count == len(enumerate_characters(3, X))


def test_cache_reuse_is_exact():
    cache = LValueCache()
    a = first_moment(6, 500, cache=cache)
    n = len(cache)
    b = first_moment(6, 500, cache=cache)
    assert len(cache) == n
    assert (a.lhs, a.main_term, a.char_count) == (b.lhs, b.main_term, b.char_count)


def test_parallel_and_serial_agree_bitwise():
    serial = first_moment(3, 400)
    parallel = first_moment(3, 400, mapper=make_mapper(2))
    assert serial.lhs == parallel.lhs
    assert serial.lhs_error == parallel.lhs_error


def test_parallel_map_preserves_order():
    assert parallel_map(abs, [-3, 1, -2, 5], threads=2, chunksize=1) == [3, 1, 2, 5]


def test_thread_resolution(monkeypatch):
    monkeypatch.delenv("NUM_THREADS", raising=False)
    assert resolve_threads() == 1
    monkeypatch.setenv("NUM_THREADS", "3")
    assert resolve_threads() == 3
    assert resolve_threads(2) == 2
    with pytest.raises(ValueError):
        resolve_threads(0)


def test_scan_reports_trend_and_exponent():
    result = scan(3, [200, 400, 800])
    assert len(result.rows) == 3 and len(result.deviations) == 3
    assert math.isfinite(result.exponent) and result.exponent_stderr >= 0
    assert result.predicted_exponent == pytest.approx(7 / 8)
    assert result.secondary_exponent == pytest.approx(5 / 6)
    assert len(result.plot_points()) == 3


def test_scan_rejects_bad_lists():
    with pytest.raises(ValueError):
        scan(3, [1000])
    with pytest.raises(ValueError):
        scan(3, [400, 200, 800])


def test_exponent_fit_recovers_power_law():
    Q = np.array([100.0, 200, 400, 800, 1600])
    slope, err = fit_exponent(Q, 3 * Q**0.8)
    assert slope == pytest.approx(0.8) and err < 1e-10


def test_two_term_fit_recovers_synthetic_constants():
    from fixedorder.moment_harness import MomentRow, _mellin

    phi = weight("default")
    rows = []
    for Q in (500.0, 1000.0, 2000.0, 4000.0):
        lhs = 0.7 * Q * _mellin(phi, 1.0) - 0.4 * Q ** secondary_pole(3, 0) * _mellin(phi, secondary_pole(3, 0))
        rows.append(MomentRow(3, Q, 0.0, "default", lhs, 1.0, 1.0, 1, 1, 0.0))
    fit = two_term_fit(rows)
    assert fit.leading == pytest.approx(0.7) and fit.secondary == pytest.approx(-0.4)


def test_error_exponent_formula():
    assert predicted_error_exponent(4, 0) == pytest.approx(9 / 10)
    assert predicted_error_exponent(6, 0.25) == pytest.approx(10 / 14)


def test_nonvanishing_report():
    a = nonvanishing_report(3, 300)
    b = nonvanishing_report(3, 600)
    assert 0 <= a.proportion <= 1
    assert b.count >= a.count
    assert a.reference == pytest.approx(300 ** (6 / 7))
