import math

import numpy as np
import pytest
from scipy import special

from ising_exact import Branch, DomainError, RationalSeries
from ising_exact.painleve import (meson_spectrum, meson_spectrum_airy, piii_solve, pvi_residual,
                                  pvi_sigma_residual, scaling_convergence, scaling_G, sigma_series,
                                  small_r_amplitude, small_theta_exponent, tracy_identity_check)


@pytest.mark.parametrize("N, order, branch", [(1, 20, "low"), (2, 16, "high"), (3, 16, "low"), (4, 16, "high")])
def test_sigma_form_residual_vanishes(N, order, branch):
    assert pvi_sigma_residual(N, order, branch).is_zero()


def test_perturbed_sigma_fails():
    sig = sigma_series(1, 18, Branch.BELOW_TC).sigma
    bad = pvi_residual(sig + RationalSeries.variable() ** 3, 1)
    assert bad.valuation() <= 6


def test_unknown_branch():
    with pytest.raises(DomainError):
        pvi_sigma_residual(1, 4, "sideways")


@pytest.fixture(scope="module")
def sol():
    return piii_solve(1.0)


def test_trivial_solution():
    flat = piii_solve(0.0)
    th = np.geomspace(1e-6, 10, 50)
    assert np.allclose(flat.eta(th), 1.0, atol=1e-12)
    assert np.allclose(scaling_G(2 * th, "below", lam=0.0), 1.0, atol=1e-12)
    assert np.allclose(scaling_G(2 * th, "above", lam=0.0), 0.0, atol=1e-12)


def test_large_theta_asymptotics(sol):
    lead = 2 / math.pi * special.k0(4.0)
    assert abs(sol.eta(2.0) - (1 - lead)) < 2 * lead**2


def test_ode_residual_small(sol):
    th = np.geomspace(1e-3, 8, 80)
    assert np.max(np.abs(sol.ode_residual(th))) < 1e-8


def test_eta_increasing(sol):
    th = np.geomspace(1e-6, 11, 400)
    assert np.all(np.diff(sol.eta(th)) > 0)


def test_small_theta_exponent(sol):
    # eta vanishes linearly up to logarithms
    assert small_theta_exponent(sol) == pytest.approx(1.0, rel=0.01)


def test_small_r_branches_share_amplitude(sol):
    amp = small_r_amplitude(sol)
    assert amp["branch_spread"] < 1e-3


def test_above_branch_single_particle_plateau(sol):
    r = np.array([10.0, 14.0, 18.0])
    ratio = scaling_G(r, "above", solution=sol) / special.k0(r)
    assert np.ptp(ratio) / ratio.mean() < 1e-3
    assert ratio.mean() == pytest.approx(1 / math.pi, rel=1e-3)


def test_outside_range_rejected(sol):
    from ising_exact import RangeError
    with pytest.raises(RangeError):
        sol.eta(100.0)


def test_tracy_identity():
    rep = tracy_identity_check()
    assert rep.passed and abs(rep.ratio - 1) < 1e-3


def test_tracy_identity_refuses_trivial_solution():
    with pytest.raises(DomainError):
        tracy_identity_check(0.0)


def test_lattice_approaches_scaling_function():
    dev = scaling_convergence(Ns=(16, 32, 64))
    assert dev[64] < 1e-2
    assert dev[64] < dev[32] < dev[16]


def test_meson_roots():
    a, b = meson_spectrum(20), meson_spectrum_airy(20)
    assert np.allclose(a, b, rtol=0, atol=1e-8)
    assert np.all(np.diff(a) > 0)
    j = np.arange(10, 21)
    slope = np.polyfit(np.log(j - 0.25), np.log(a[9:]), 1)[0]
    assert slope == pytest.approx(2 / 3, rel=0.01)
    assert meson_spectrum(0) == [] == meson_spectrum_airy(0)
