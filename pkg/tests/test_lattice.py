import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ising_exact import CapacityError, DomainError, critical_point, critical_temperature
from ising_exact.lattice import (FiniteLattice, complex_u_zeros, enumerate_partition, field_moments,
                                 lee_yang_zeros, log_partition_function, oracle_correlation,
                                 torus_bond_correlation, transfer_matrix_log_z)
from ising_exact.thermo import onsager_free_energy

TC = critical_temperature(1.0, 1.0)


def test_decoupled_spins_in_a_field():
    lat = FiniteLattice.nearest_neighbour(2, 3, Ev=0.0, Eh=0.0)
    H, T = 0.7, 1.3
    assert log_partition_function(lat, T, H) == pytest.approx(6 * math.log(2 * math.cosh(H / T)), rel=1e-13)


def test_configuration_count():
    assert enumerate_partition(FiniteLattice.nearest_neighbour(2, 2)).total() == 16


def test_small_torus_near_bulk_at_tc():
    bulk = onsager_free_energy(critical_point()).value
    four = log_partition_function(FiniteLattice.nearest_neighbour(4, 4), TC) / 16
    assert four == pytest.approx(transfer_matrix_log_z(4, 4, TC, boundary="periodic") / 16, rel=1e-13)
    dev = {L: transfer_matrix_log_z(L, L, TC, boundary="periodic") / L**2 / bulk - 1 for L in (4, 6, 8)}
    assert dev[4] == pytest.approx(four / bulk - 1, rel=1e-10)
    # the 4x4 torus sits 4.3% above the bulk; the gap closes like 1/L^2
    assert 0.03 < dev[4] < 0.05 and dev[6] < 0.03
    assert dev[4] * 16 == pytest.approx(dev[8] * 64, rel=0.05)


def test_polynomial_and_float_sum_agree():
    lat = FiniteLattice.nearest_neighbour(3, 3)
    poly = enumerate_partition(lat)
    assert poly.log_value(2.0, 0.3) == pytest.approx(log_partition_function(lat, 2.0, 0.3), rel=1e-13)


def test_transfer_matrix_agrees_with_enumeration():
    for boundary in ("periodic", "cylindrical"):
        lat = FiniteLattice.nearest_neighbour(3, 3, boundary=boundary)
        tm = transfer_matrix_log_z(3, 3, 2.0, H=0.2, boundary=boundary)
        assert tm == pytest.approx(log_partition_function(lat, 2.0, 0.2), rel=1e-12)


def test_correlation_limits():
    lat = FiniteLattice.nearest_neighbour(3, 3)
    assert oracle_correlation(lat, 1e6, 0.0, (0, 1)) == pytest.approx(0.0, abs=1e-5)
    assert oracle_correlation(lat, 2.0, 0.0, (0, 0)) == 1.0


def test_exact_correlation_rational():
    lat = FiniteLattice.nearest_neighbour(2, 2)
    corr = oracle_correlation(lat, 2.0, 0.0, (0, 1), exact=True)
    x = Fraction(1, 3)  # x = exp(-2/T)
    assert float(corr.exact_value(x)) == pytest.approx(corr(2.0 / math.log(3)), rel=1e-12)
    assert float(corr.exact_value(x)) == pytest.approx(oracle_correlation(lat, 2.0 / math.log(3), 0.0, (0, 1)), rel=1e-12)


def test_nearest_neighbour_finite_size_approach():
    target = 1 / math.sqrt(2)
    four = oracle_correlation(FiniteLattice.nearest_neighbour(4, 4), TC, 0.0, (0, 1))
    assert four == pytest.approx(torus_bond_correlation(4, TC), rel=1e-8)
    assert abs(four - target) / target > 0.05  # the 4x4 torus is 10% off
    values = {L: torus_bond_correlation(L, TC) for L in (6, 8, 10)}
    assert abs(values[10] - target) / target < 0.05
    Ls = np.array(sorted(values), dtype=float)
    slope, intercept = np.polyfit(1 / Ls, [values[int(L)] for L in Ls], 1)
    assert abs(intercept - target) < abs(values[10] - target)


def test_lee_yang_circle():
    for L, T in ((2, 2 * TC), (3, TC)):
        zeros = lee_yang_zeros(FiniteLattice.nearest_neighbour(L, L), T)
        assert len(zeros) == L * L
        assert max(abs(abs(z) - 1) for z in zeros) < 1e-10


def test_lee_yang_gap_shrinks_towards_tc():
    def gap(T):
        zs = lee_yang_zeros(FiniteLattice.nearest_neighbour(3, 3), T)
        return min(abs(math.atan2(z.imag, z.real)) for z in zs)
    assert gap(TC) < gap(2 * TC)


def test_single_site_zero():
    zeros = lee_yang_zeros(FiniteLattice(1, 1, couplings={(1, 0): 0.0}), 1.0)
    assert zeros == [pytest.approx(-1.0)]


def test_zero_reconstruction():
    poly = enumerate_partition(FiniteLattice.nearest_neighbour(2, 2))
    coeffs = [sum(row) for row in poly.u_coefficients()]
    roots = complex_u_zeros(FiniteLattice.nearest_neighbour(2, 2))
    rebuilt = np.real(np.poly(roots)[::-1]) * coeffs[len(roots)]
    assert np.allclose(rebuilt, coeffs[: len(roots) + 1], rtol=1e-8)


def test_no_coupling_means_no_u_zeros():
    assert complex_u_zeros(FiniteLattice.nearest_neighbour(2, 2, Ev=0.0, Eh=0.0)) == []


def test_complex_temperature_zeros_are_not_on_one_circle():
    zeros = complex_u_zeros(FiniteLattice.nearest_neighbour(3, 3))
    radii = np.abs(zeros)
    assert radii.max() - radii.min() > 1e-3


def test_capacity_limit():
    with pytest.raises(CapacityError):
        enumerate_partition(FiniteLattice.nearest_neighbour(6, 6))


def test_odd_displacement_ranges_checked():
    with pytest.raises(DomainError):
        oracle_correlation(FiniteLattice.nearest_neighbour(2, 2), 1.0, 0.0, (2, 0))


@settings(max_examples=20, deadline=None)
@given(T=st.floats(min_value=0.3, max_value=10.0), H=st.floats(min_value=-2.0, max_value=2.0))
def test_field_reversal_symmetry(T, H):
    lat = FiniteLattice.nearest_neighbour(2, 3)
    assert log_partition_function(lat, T, H) == pytest.approx(log_partition_function(lat, T, -H), rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(T=st.floats(min_value=0.3, max_value=10.0))
def test_zero_field_moments(T):
    m, chi = field_moments(enumerate_partition(FiniteLattice.nearest_neighbour(3, 3)), T)
    assert m == 0.0 or abs(m) < 1e-15
    assert chi > 0


def test_decoupled_sublattices_factorize():
    # diagonal-only couplings on a 2x2 torus split it into two independent pairs
    lat = FiniteLattice(2, 2, couplings={(1, 1): 1.0})
    pair = FiniteLattice(1, 2, couplings={(0, 1): 1.0})
    T = 1.7
    assert log_partition_function(lat, T) == pytest.approx(2 * log_partition_function(pair, T), rel=1e-12)
