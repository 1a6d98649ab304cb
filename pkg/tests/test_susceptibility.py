import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ising_exact import DomainError
from ising_exact.susceptibility import (amplitude_ratio, anisotropic_nickel_curve, angular_gap_scaling,
                                        c3_analytic, c4_analytic, clausen2, clausen_tail_bound,
                                        diagonal_amplitude_fit, diagonal_chi, diagonal_constants, dn_integral,
                                        new_w_values, nickel_amplitude, nickel_singularities,
                                        singularity_exponent)

SQ5 = math.sqrt(5)


def _same(values, expected, tol=1e-12):
    return sorted(values) == pytest.approx(sorted(expected), abs=tol)


# closed-form constants -------------------------------------------------------

def test_first_two_constants():
    assert dn_integral(1).c_value == pytest.approx(1.0, abs=1e-14)
    assert dn_integral(2).c_value == pytest.approx(1 / (12 * math.pi), abs=1e-6)


def test_third_and_fourth_constants():
    c3, c4 = c3_analytic(), c4_analytic()
    assert c3 == pytest.approx(8.1446e-4, rel=1e-4)
    assert c4 == pytest.approx(2.5448e-5, rel=1e-4)
    assert c4 > 0
    assert dn_integral(3).c_value == pytest.approx(c3, rel=1e-10)
    assert dn_integral(4).c_value == pytest.approx(c4, rel=1e-8)


def test_higher_integrals_match_printed_values():
    assert dn_integral(5).value == pytest.approx(0.0024846057, abs=2e-10)
    assert dn_integral(6).value == pytest.approx(0.0004891422, abs=1e-9)


def test_randomized_estimate_brackets_closed_form():
    est = dn_integral(4, budget=2**14, method="rqmc", seed=1)
    assert abs(est.c_value - c4_analytic()) / c4_analytic() < 0.05
    assert abs(est.c_value - c4_analytic()) < 5 * est.c_error + 1e-9


def test_randomized_error_shrinks_with_samples():
    errs = [dn_integral(3, budget=b, method="rqmc", seed=2).error for b in (2**10, 2**13, 2**16)]
    assert errs[0] > errs[1] > errs[2]
    # at least the Monte Carlo rate; scrambled nets usually beat it
    assert errs[2] < errs[0] * (2**6) ** -0.5 * 1.5


def test_seed_determines_estimate():
    a = dn_integral(3, budget=2**10, method="rqmc", seed=7)
    b = dn_integral(3, budget=2**10, method="rqmc", seed=7)
    c = dn_integral(3, budget=2**10, method="rqmc", seed=8)
    assert a.value == b.value and a.value != c.value


def test_constants_decrease_quickly():
    cs = [dn_integral(n).c_value for n in range(1, 5)]
    assert all(x > 0 for x in cs)
    assert all(b / a < 0.1 for a, b in zip(cs, cs[1:]))


def test_amplitude_ratio_near_twelve_pi():
    r = amplitude_ratio()
    assert abs(r.relative_to_12pi) < 5e-3


def test_out_of_range_n():
    with pytest.raises(Exception):
        dn_integral(9)


# Clausen function ----------------------------------------------------------

def test_clausen_routes():
    ref = 1.0149416064096536
    for method in ("bernoulli", "series", "mpmath"):
        assert clausen2(math.pi / 3, method) == pytest.approx(ref, abs=1e-14)
    assert clausen2(0.0) == 0.0
    est, bound = clausen_tail_bound(math.pi / 3)
    assert bound < 1e-15


@settings(max_examples=40, deadline=None)
@given(theta=st.floats(min_value=0.01, max_value=2 * math.pi - 0.01))
def test_clausen_routes_agree(theta):
    assert clausen2(theta, "bernoulli") == pytest.approx(clausen2(theta, "mpmath"), abs=1e-12)


# diagonal susceptibility ---------------------------------------------------

def test_infinite_temperature_diagonal():
    assert diagonal_chi(0.0, branch="high").value == 1.0
    assert diagonal_chi(1e-6, branch="high").value == pytest.approx(1.0, abs=1e-2)


def test_diagonal_tail_flag():
    res = diagonal_chi(0.99, n_cut=256, branch="high")
    assert not res.tail_reliable
    assert diagonal_chi(0.99, branch="high").tail_reliable


def test_diagonal_rejects_critical_point():
    with pytest.raises(DomainError):
        diagonal_chi(1.0)


def test_diagonal_amplitudes():
    const = diagonal_constants()
    low = diagonal_amplitude_fit("low")
    high = diagonal_amplitude_fit("high")
    assert low.amplitude == pytest.approx(0.25, rel=0.02)
    assert high.amplitude == pytest.approx(1.0, rel=0.02)
    assert low.amplitude == pytest.approx(const["C2_minus"] + const["C4_minus"], rel=2e-3)
    assert high.amplitude == pytest.approx(const["C1_plus"] + const["C3_plus"], rel=2e-3)


# singularities -------------------------------------------------------------

@pytest.mark.parametrize("n, expected", [
    (3, [-0.5, 1.0]),
    (4, [-0.5, 0.5]),
    (5, [-1.0, (1 + SQ5) / 4, (1 - SQ5) / 4, (3 + SQ5) / 2, (3 - SQ5) / 2]),
    (6, [-1.0, 1.0, -1 / 3, 1 / 3]),
])
def test_new_singularity_locations(n, expected):
    assert _same(new_w_values(n), expected)


def test_printed_fifth_order_pair_is_not_produced():
    ws = new_w_values(5)
    for printed in ((-1 + SQ5) / 4, (-1 - SQ5) / 4):
        assert min(abs(w - printed) for w in ws) > 1e-3


@settings(max_examples=20, deadline=None)
@given(n=st.integers(min_value=3, max_value=40))
def test_singularities_on_unit_circle(n):
    recs = nickel_singularities(n, amplitudes=False)
    assert recs
    assert max(abs(abs(r.s) - 1) for r in recs) < 1e-12


def test_density_growth():
    g = angular_gap_scaling()
    assert g.bulk_slope == pytest.approx(-2.0, abs=0.1)
    assert g.edge_slope == pytest.approx(-1.0, abs=0.05)


@pytest.mark.parametrize("N, branch, exponent, log", [
    (4, None, Fraction(13, 2), False),
    (3, None, Fraction(3), True),
    (2, "low", Fraction(1, 2), False),
])
def test_full_singularity_exponents(N, branch, exponent, log):
    assert singularity_exponent(N, branch) == (exponent, log)


def test_diagonal_singularity_exponent():
    assert singularity_exponent(2, diagonal=True) == (Fraction(1), True)


def test_amplitudes():
    a3 = nickel_amplitude(3, 0, 1)
    a5 = nickel_amplitude(5, 0, 1)
    assert abs(a5) / abs(a3) < 1e-2
    z = nickel_amplitude(3, 1, 0)
    assert z != 0 and math.isfinite(abs(z))
    assert z == nickel_amplitude(3, 1, 0)
    with pytest.raises(DomainError):
        nickel_amplitude(3, 0, 0)


def test_anisotropic_curve_trivial_and_critical():
    assert anisotropic_nickel_curve(3, 1, 1, samples=0) == []
    # cos = 1 on both axes: the curve is the critical manifold s_v s_h = 1
    pts = anisotropic_nickel_curve(3, 3, 3, s_h_values=[0.5, 1.0, 2.0])
    assert all(abs(p.s_v * p.s_h - 1) < 1e-6 for p in pts)
    assert max(abs(p.residual) for p in pts) < 1e-12


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_anisotropic_curve_isotropic_slice(n):
    for rec in nickel_singularities(n, amplitudes=False):
        j, l = rec.j or n, rec.l or n
        pts = anisotropic_nickel_curve(n, j, l, s_h_values=[rec.s])
        assert min(abs(p.s_v - rec.s) for p in pts) < 1e-8
