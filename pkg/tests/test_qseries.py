import pytest
from hypothesis import given, settings, strategies as st

from ising_exact import ContractError, DomainError
from ising_exact.qseries import (CartanE8, QSeries, check_named_identity, e8_form_minimum, e8_vectors,
                                 euler_function, fermionic_e8, fermionic_m34_spin, gap_partition_counts,
                                 inverse_euler_function, partition_numbers, rocha_caridi, rogers_ramanujan,
                                 verify_identity)

CHARACTERS = [(3, 4, 1, 1), (3, 4, 1, 2), (3, 4, 1, 3), (2, 5, 1, 1), (2, 5, 1, 2)]


def test_partition_numbers():
    assert partition_numbers(10)[:11] == (1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42)


def test_euler_product_inverse():
    K = 300
    assert euler_function(K) * inverse_euler_function(K) == QSeries.one(K)


def test_character_against_partition_oracle():
    rc = rocha_caridi(2, 5, 1, 2, 10)
    assert list(rc.coeffs) == [1, 1, 1, 1, 2, 2, 3, 3, 4, 5, 6]
    assert rc == gap_partition_counts(10)
    assert rocha_caridi(2, 5, 1, 2, 400) == gap_partition_counts(400)
    assert rocha_caridi(2, 5, 1, 1, 300) == gap_partition_counts(300, smallest=2)


@pytest.mark.parametrize("pps", CHARACTERS)
def test_characters_normalized_and_nonnegative(pps):
    c = rocha_caridi(*pps, 200)
    assert c[0] == 1
    assert all(isinstance(x, int) and x >= 0 for x in c.coeffs)
    assert all(b >= a for a, b in zip(c.coeffs[10:], c.coeffs[11:]))


def test_bad_character_labels():
    with pytest.raises(DomainError):
        rocha_caridi(3, 4, 0, 1, 10)
    with pytest.raises(DomainError):
        rocha_caridi(2, 4, 1, 1, 10)


def test_spin_sums_constant_terms():
    assert fermionic_m34_spin("even", 0).coeffs == (1,)
    assert fermionic_m34_spin("odd", 0).coeffs == (1,)


def test_spin_sums_equal_character():
    K = 500
    odd, even = fermionic_m34_spin("odd", K), fermionic_m34_spin("even", K)
    assert verify_identity(odd, even).ok
    assert verify_identity(odd, rocha_caridi(3, 4, 1, 2, K)).ok


def test_e8_sum_equals_character():
    assert verify_identity(fermionic_e8(30), rocha_caridi(3, 4, 1, 1, 30)).ok


def test_e8_lattice():
    c = CartanE8.build()
    assert c.determinant() == 1
    vecs = list(e8_vectors(6))
    assert vecs[0] == ((0,) * 8, 0)
    smallest = min(v for m, v in vecs if any(m))
    assert e8_form_minimum(2) == smallest == 2


@settings(max_examples=50, deadline=None)
@given(m=st.lists(st.integers(min_value=-4, max_value=4), min_size=8, max_size=8))
def test_e8_form_even_nonnegative_integer(m):
    v = CartanE8.build().quadratic_form(m)
    assert v == int(v) and v >= 0 and v % 2 == 0
    assert (v == 0) == (not any(m))


def test_rogers_ramanujan():
    assert list(rogers_ramanujan(1, 6).coeffs) == [1, 1, 1, 1, 2, 2, 3]
    assert rogers_ramanujan(2, 5)[0] == 1
    for which in ("rr1", "rr2"):
        assert check_named_identity(which, 1000).ok


def test_negative_control():
    res = verify_identity(fermionic_m34_spin("odd", 50), rocha_caridi(2, 5, 1, 1, 50))
    assert not res.ok and res.first_mismatch == 1


def test_identity_checker():
    a = rocha_caridi(3, 4, 1, 2, 20)
    assert verify_identity(a, a).ok
    with pytest.raises(ContractError):
        verify_identity(a, a.truncate(10))
    with pytest.raises(DomainError):
        check_named_identity("nope", 5)


@settings(max_examples=30, deadline=None)
@given(a=st.lists(st.integers(-20, 20), min_size=1, max_size=15),
       b=st.lists(st.integers(-20, 20), min_size=1, max_size=15))
def test_qseries_product_commutes(a, b):
    A, B = QSeries.from_list(a, 14), QSeries.from_list(b, 14)
    assert A * B == B * A
