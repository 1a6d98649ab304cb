import math

import pytest
from hypothesis import given, settings, strategies as st

from ising_exact import Branch, CouplingPoint, DomainError, critical_point, critical_temperature, derive_variables


def test_isotropic_critical_temperature():
    assert critical_temperature(1, 1) == pytest.approx(2 / math.log(1 + math.sqrt(2)), rel=1e-15)
    assert critical_temperature(0.5, 0.5) == pytest.approx(1 / math.log(1 + math.sqrt(2)), rel=1e-15)


def test_anisotropic_critical_temperature_residual():
    T = critical_temperature(2.0, 1.0)
    assert abs(math.sinh(4 / T) * math.sinh(2 / T) - 1) < 1e-14


def test_critical_point_variables():
    p = critical_point()
    assert p.branch is Branch.AT_TC
    assert (p.k, p.t, p.tau, p.w) == (1.0, 1.0, 0.0, 0.25)


@pytest.mark.parametrize("s, k, w", [(2.0, 0.25, 0.2)])
def test_isotropic_substitution(s, k, w):
    p = CouplingPoint.isotropic(s)
    assert p.k == pytest.approx(k, rel=1e-14)
    assert p.w == pytest.approx(w, rel=1e-14)
    assert p.branch is Branch.BELOW_TC


def test_tau_at_half():
    assert CouplingPoint.isotropic(0.5).tau == pytest.approx(0.75, rel=1e-14)


def test_branches_and_t_in_unit_interval():
    lo = derive_variables(1, 1, 1.5)
    hi = derive_variables(1, 1, 4.0)
    assert lo.branch is Branch.BELOW_TC and hi.branch is Branch.ABOVE_TC
    assert 0 < lo.t < 1 and 0 < hi.t < 1


@pytest.mark.parametrize("T", [0.0, -1.0])
def test_nonpositive_temperature_rejected(T):
    with pytest.raises(DomainError):
        derive_variables(1, 1, T)


def test_anisotropic_has_no_s():
    with pytest.raises(DomainError):
        derive_variables(2, 1, 3.0).s


positive = st.floats(min_value=0.2, max_value=5.0)


@settings(max_examples=60, deadline=None)
@given(Ev=positive, Eh=positive, T=st.floats(min_value=0.5, max_value=20.0))
def test_duality_is_an_involution(Ev, Eh, T):
    p = CouplingPoint(Ev, Eh, T)
    back = p.dual().dual()
    assert back.Ev == pytest.approx(Ev, rel=1e-12, abs=1e-12)
    assert back.Eh == pytest.approx(Eh, rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(s=st.floats(min_value=0.05, max_value=20.0))
def test_tau_odd_and_w_even_under_inversion(s):
    a, b = CouplingPoint.isotropic(s), CouplingPoint.isotropic(1 / s)
    assert a.tau == pytest.approx(-b.tau, rel=1e-9, abs=1e-12)
    assert a.w == pytest.approx(b.w, rel=1e-9)
