import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ising_exact import Branch, CouplingPoint, DomainError, RationalSeries, critical_point
from ising_exact.precision import high_precision
from ising_exact.toeplitz import (CorrelationGrid, SymbolParams, critical_amplitude, critical_asymptote_check,
                                  diagonal_at_tc, diagonal_minors, diagonal_series, fourier_coefficient,
                                  row_correlation, toeplitz_determinant)


def test_trivial_symbol():
    p = SymbolParams(0.0, 0.0)
    assert fourier_coefficient(0, p) == pytest.approx(1.0, abs=1e-14)
    assert all(abs(fourier_coefficient(n, p)) < 1e-14 for n in (-2, -1, 1, 2))


def test_zeroth_coefficient_series_against_quadrature():
    a = 0.1
    s = fourier_coefficient(0, SymbolParams(0.0, a), mode="series", order=20)
    assert s[2] == Fraction(-1, 4)
    assert float(s(a)) == pytest.approx(fourier_coefficient(0, SymbolParams(0.0, a)), abs=1e-10)


def test_nearest_neighbour_at_tc():
    assert row_correlation(1, critical_point()) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert toeplitz_determinant(0, SymbolParams(0.3, 0.2)) == 1.0


def test_first_diagonal_series_terms():
    assert diagonal_series(1, 4, Branch.BELOW_TC).series.to_strings() == ["1", "-1/4", "-3/64", "-5/256"]
    assert diagonal_series(2, 4, Branch.BELOW_TC).series.to_strings() == ["1", "-1/4", "-3/32", "-9/256"]


def test_series_and_numeric_agree_at_quarter():
    t = 0.25
    s = diagonal_series(2, 60, Branch.BELOW_TC)
    numeric = toeplitz_determinant(2, SymbolParams(0.0, math.sqrt(t)))
    assert float(s(t)) == pytest.approx(numeric, abs=1e-10)


def test_critical_closed_form():
    assert float(diagonal_at_tc(0)) == 1.0
    assert float(diagonal_at_tc(1)) == pytest.approx(2 / math.pi, rel=1e-15)
    assert float(diagonal_at_tc(2)) == pytest.approx(16 / (3 * math.pi**2), rel=1e-15)
    det = toeplitz_determinant(2, SymbolParams(0.0, 1.0))
    assert det == pytest.approx(16 / (3 * math.pi**2), abs=1e-10)


def test_critical_amplitude_and_correction():
    fit = critical_asymptote_check()
    assert fit.amplitude == pytest.approx(float(critical_amplitude()), abs=1e-5)
    assert float(critical_amplitude()) == pytest.approx(0.645002, abs=1e-6)
    assert fit.correction == pytest.approx(-1 / 64, rel=0.05)
    assert float(diagonal_at_tc(1)) == pytest.approx(float(critical_amplitude()), rel=0.02)


def test_boundary_coefficient_after_factoring_quarter_power():
    s = diagonal_series(1, 6, Branch.BELOW_TC).series
    reduced = s / RationalSeries.binomial(Fraction(1, 4), 6, sign=-1)
    assert reduced.to_strings()[:3] == ["1", "0", "3/64"]
    # C(N,N) >= M^2 forces a positive t^(N+1) term; a negative one is ruled out
    assert reduced[2] != Fraction(-3, 64)


def test_complete_elliptic_form_of_nearest_diagonal():
    # C(1,1) = (2/pi) E(k) below T_c
    k = 0.6
    p = CouplingPoint.isotropic(1 / math.sqrt(k))
    assert toeplitz_determinant(1, SymbolParams.diagonal(p)) == pytest.approx(
        2 / math.pi * float(mpmath.ellipe(k * k)), abs=1e-12)


def test_high_temperature_leading_term():
    ser = diagonal_series(2, 4, Branch.ABOVE_TC)
    assert ser.exponent == 1
    assert ser.series[0] == Fraction(3, 8)


def test_zero_separation_low_branch_is_one():
    assert diagonal_series(0, 5, Branch.BELOW_TC).series.first_mismatch(RationalSeries.one().truncate(5)) is None


def test_series_refuses_critical_point():
    with pytest.raises(DomainError):
        diagonal_series(1, 4, Branch.AT_TC)


@settings(max_examples=5, deadline=None)
@given(t=st.floats(min_value=0.01, max_value=0.5), N=st.integers(min_value=1, max_value=8))
def test_series_matches_numeric_determinant(t, N):
    low = diagonal_series(N, 80, Branch.BELOW_TC)
    assert float(low(t)) == pytest.approx(toeplitz_determinant(N, SymbolParams(0.0, math.sqrt(t))), abs=1e-10)


def test_long_distance_limit_is_magnetization_squared():
    k = 0.5
    m = diagonal_minors(SymbolParams(0.0, k), 64)
    assert abs(float(m[64]) - (1 - k * k) ** 0.25) < 1e-6
    assert np.all(np.diff(np.asarray(m, dtype=float)[:20]) < 0)


def test_decay_rate_per_diagonal_step():
    k = 0.5
    with high_precision():
        m = diagonal_minors(SymbolParams(0.0, k), 60, precision="hp")
        M2 = mpmath.mpf(1 - k * k) ** 0.25
        Ns = np.arange(10, 61)
        y = np.array([float(mpmath.log(m[n] - M2)) for n in Ns])
    A = np.column_stack([np.ones_like(Ns), Ns, np.log(Ns), 1.0 / Ns])
    rate = np.linalg.lstsq(A, y, rcond=None)[0][1]
    assert rate == pytest.approx(math.log(k * k), rel=0.01)


def test_grid_symmetry_and_records():
    g = CorrelationGrid(4, isotropic=True)
    g.set(1, 2, Fraction(1, 3), "test")
    assert g[2, 1] == g[-1, 2] == Fraction(1, 3)
    rec = g.to_records()
    assert rec and set(rec[0]) == {"M", "N", "value", "provenance"}
