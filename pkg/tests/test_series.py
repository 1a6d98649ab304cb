from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ising_exact import DomainError, RationalSeries
from ising_exact.series import series_determinant

small = st.fractions(min_value=-5, max_value=5, max_denominator=12)
coeff_lists = st.lists(small, min_size=1, max_size=8)


def test_binomial_quarter_power():
    s = RationalSeries.binomial(Fraction(1, 4), 4, sign=-1)
    assert s.to_strings() == ["1", "-1/4", "-3/32", "-7/128"]


def test_inverse_of_one_minus_t():
    s = (RationalSeries.one() - RationalSeries.variable()).truncate(6).inverse()
    assert s.coeffs == [1] * 6


def test_log_exp_roundtrip():
    x = RationalSeries([0, 1, Fraction(1, 3)], 8)
    assert (x.exp().log() - x).is_zero()


def test_fractional_power_needs_unit_constant():
    with pytest.raises(DomainError):
        RationalSeries([2, 1], 5).power(Fraction(1, 2))


def test_truncation_past_order_raises():
    s = RationalSeries([1, 2], 2)
    with pytest.raises(IndexError):
        s[2]


def test_determinant_of_identity():
    one, zero = RationalSeries.one(), RationalSeries([])
    assert series_determinant([[one, zero], [zero, one]]).coeffs == [1]


@settings(max_examples=50, deadline=None)
@given(a=coeff_lists, b=coeff_lists)
def test_product_commutes(a, b):
    A, B = RationalSeries(a, 8), RationalSeries(b, 8)
    assert (A * B).first_mismatch(B * A) is None


@settings(max_examples=50, deadline=None)
@given(a=coeff_lists)
def test_unit_series_inverse(a):
    A = RationalSeries([1] + a, 8)
    assert (A * A.inverse()).first_mismatch(RationalSeries.one().truncate(8)) is None


@settings(max_examples=40, deadline=None)
@given(a=coeff_lists, p=st.fractions(min_value=-3, max_value=3, max_denominator=8),
       q=st.fractions(min_value=-3, max_value=3, max_denominator=8))
def test_powers_add(a, p, q):
    A = RationalSeries([1] + a, 6)
    assert (A.power(p) * A.power(q)).first_mismatch(A.power(p + q)) is None
