import math

import numpy as np
import pytest

from ising_exact import CouplingPoint, critical_point, derive_variables
from ising_exact.lattice import FiniteLattice, log_partition_function
from ising_exact.thermo import (free_energy_series, internal_energy, log_singularity_amplitudes,
                                onsager_free_energy, series_free_energy, spontaneous_magnetization)


def test_infinite_temperature_limit():
    assert onsager_free_energy(CouplingPoint(1, 1, 1e9)).value == pytest.approx(math.log(2), abs=1e-8)


def test_critical_value_matches_series():
    p = critical_point()
    assert onsager_free_energy(p).value == pytest.approx(series_free_energy(p), abs=1e-6)


def test_reduced_and_double_integrals_agree():
    p = derive_variables(1.0, 0.6, 2.0)
    assert onsager_free_energy(p, "reduced").value == pytest.approx(onsager_free_energy(p, "double").value, abs=1e-9)


def test_bulk_value_close_to_small_torus():
    lat = FiniteLattice.nearest_neighbour(4, 4)
    finite = log_partition_function(lat, 3.0) / 16
    assert onsager_free_energy(derive_variables(1, 1, 3.0)).value == pytest.approx(finite, rel=0.02)


def test_dual_pair_free_energies():
    p = derive_variables(1.0, 0.7, 2.5)
    d = p.dual()
    lhs = onsager_free_energy(p).value - 0.5 * math.log(p.s_v * p.s_h)
    rhs = onsager_free_energy(d).value
    assert lhs == pytest.approx(rhs, abs=1e-8)


def test_magnetization_values():
    assert spontaneous_magnetization(CouplingPoint(1, 1, 1e-3)) == pytest.approx(1.0)
    assert spontaneous_magnetization(critical_point()) == 0.0
    assert spontaneous_magnetization(CouplingPoint.isotropic(2.0)) == pytest.approx((15 / 16) ** 0.125, rel=1e-13)


def test_magnetization_decreases_below_tc(tc):
    Ts = np.linspace(0.5, tc * 0.999, 40)
    m = [spontaneous_magnetization(CouplingPoint(1, 1, T)) for T in Ts]
    assert np.all(np.diff(m) < 0)


def test_energy_limits_and_critical_value():
    assert internal_energy(CouplingPoint(1, 1, 0.05)) == pytest.approx(-2.0, abs=1e-9)
    assert abs(internal_energy(CouplingPoint(1, 1, 1e6))) < 1e-5
    assert internal_energy(critical_point()) == pytest.approx(-2 / math.sqrt(2), rel=1e-12)


def test_energy_continuous_at_tc(tc):
    below = internal_energy(CouplingPoint(1, 1, tc * (1 - 1e-9)))
    above = internal_energy(CouplingPoint(1, 1, tc * (1 + 1e-9)))
    assert abs(below - above) < 1e-5


def test_high_temperature_series_starts_at_log2():
    s = free_energy_series(6, "high")
    assert s[0] == 0 and s[1] == 0
    assert series_free_energy(CouplingPoint(1, 1, 1e9), 10) == pytest.approx(math.log(2), abs=1e-12)


def test_first_low_temperature_term_matches_torus_counting():
    # a single flipped spin costs four bonds: u^2 per site with u = exp(-4K)
    s = free_energy_series(4, "low")
    assert s[1] == 0 and s[2] == 1


def test_log_singularity_branch_symmetric():
    amp = log_singularity_amplitudes()
    assert amp["relative_difference"] < 1e-4
