import math

import mpmath
import numpy as np
import pytest

from ising_exact import DomainError, CouplingPoint, critical_amplitude, critical_point
from ising_exact.hirota import (DualPair, critical_grid_report, difference_residual, offcritical_residual_scan,
                                propagate_critical, propagate_from_diagonal)
from ising_exact.precision import high_precision
from ising_exact.toeplitz import CorrelationGrid


def test_constant_grids_have_zero_residual():
    g = CorrelationGrid(4)
    for M in range(5):
        for N in range(M, 5):
            g.set(M, N, 0.3, "constant")
    pair = DualPair(g, g, 1.3, 0.7, 0.5, 2.0)
    assert difference_residual(pair, 1, 2) == (0.0, 0.0)


def test_origin_excluded():
    g = CorrelationGrid(2)
    with pytest.raises(DomainError):
        difference_residual(DualPair.critical(g), 0, 0)


def test_first_stencil_values():
    with high_precision():
        g = propagate_from_diagonal(3)
        assert float(g[0, 1]) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
        assert float(g[1, 2]) == pytest.approx((2 / math.pi) ** 2 / (1 / math.sqrt(2)), abs=1e-12)
        assert float(g[1, 2]) == pytest.approx(0.57312, abs=5e-5)


def test_propagated_grid_reproduces_diagonal():
    with high_precision():
        g = propagate_critical(12)
        assert float(abs(g[2, 2] - 16 / (3 * mpmath.pi**2))) < 1e-8
        pair = DualPair.critical(g)
        assert max(abs(float(r)) for M, N, _, _ in g.entries() if (M, N) != (0, 0) and N < 12
                   for r in difference_residual(pair, M, N)) < 1e-9


def test_perturbed_grid_violates_equations():
    with high_precision():
        g = propagate_critical(6)
        rng = np.random.default_rng(0)
        bad = CorrelationGrid(6)
        for M, N, v, _ in g.entries():
            bad.set(M, N, v * (1 + 0.05 * rng.standard_normal()), "perturbed")
        res = [abs(float(r)) for r in difference_residual(DualPair.critical(bad), 2, 3)]
        assert max(res) > 1e-3


def test_grid_shape_properties():
    with high_precision():
        g = propagate_critical(15)
        vals = {(M, N): float(v) for M, N, v, _ in g.entries()}
    assert all(v > 0 for v in vals.values())
    assert all(vals[(0, N)] > vals[(0, N + 1)] for N in range(15))
    assert all(vals[(N, N)] > vals[(N + 1, N + 1)] for N in range(15))
    assert g[3, 7] == g[7, 3]


def test_routes_agree_and_amplitude_isotropic():
    rep = critical_grid_report(30, radius=30.0)
    assert rep.route_disagreement < 1e-8 and rep.diagonal_error < 1e-8
    assert rep.direction_spread < 0.02
    target = 2 ** 0.125 * float(critical_amplitude())
    assert all(abs(a / target - 1) < 0.02 for a in rep.amplitude_by_direction.values())


def test_offcritical_scan_small_residuals():
    report = offcritical_residual_scan(CouplingPoint.isotropic(1.5), n_max=3)
    assert report
    assert max(abs(float(x)) for pair in report.values() for x in pair) < 1e-9


def test_critical_scan_matches_stencil():
    report = offcritical_residual_scan(critical_point(), n_max=3)
    assert max(abs(float(x)) for pair in report.values() for x in pair) < 1e-9


def test_trivial_sizes_rejected():
    with pytest.raises(DomainError):
        propagate_critical(0)
