from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matchpos.algebra import Poly1
from matchpos.positivity import (
    alpha0_checks,
    alpha0_first_identity,
    alpha0_series,
    cancellation_check,
    k_series,
    ln_f_coefficient,
    ln_f_second_closed_form,
    ln_f_top_coefficient,
    log_k_series,
    parity_classes,
    second_identity_check,
    second_identity_value,
    stirling_series_coefficient,
)
from matchpos.series import series_exp

# 1 + K_i through nu^4, produced offline with a computer algebra system.
ONE_PLUS_K = {
    2: [1, 2, F(7, 2), F(23, 4), F(73, 8)],
    3: [1, 6, F(49, 2), F(337, 4), F(2103, 8)],
    4: [1, 12, 89, F(1049, 2), F(5391, 2)],
}


@pytest.mark.parametrize("i", sorted(ONE_PLUS_K))
def test_k_series_against_oracle(i):
    assert (k_series(i, 4) + 1).coeffs == ONE_PLUS_K[i]


def test_k_series_trivial_cases():
    assert k_series(0, 3).coeffs == [0, 0, 0, 0]
    assert k_series(1, 3).coeffs == [0, 0, 0, 0]


@given(st.integers(0, 12))
def test_k_first_order_coefficient(i):
    assert k_series(i, 2)[1] == i * (i - 1)


@given(st.integers(0, 8))
def test_two_routes_for_k_agree(i):
    assert series_exp(log_k_series(i, 5)) - 1 == k_series(i, 5)


def test_stirling_series_coefficients():
    assert stirling_series_coefficient(1) == F(-1, 24)
    assert stirling_series_coefficient(3) == F(1, 2880)
    with pytest.raises(ValueError):
        stirling_series_coefficient(2)


@pytest.mark.parametrize("r", [2, 3])
def test_second_log_coefficient_closed_form(r):
    got = ln_f_coefficient(r, 2)
    want = ln_f_second_closed_form(r)
    assert got == want
    assert want(1) == 0
    assert got.coefficient(3) == ln_f_top_coefficient(r, 2)


def test_closed_form_expansion_at_r2():
    # -(1/12) s (12 s - 12 - 24 s - 2 s^2 + 24 + 9 s - 7) / 4
    s = Poly1.x("i")
    want = s * (s * s * -2 - s * 3 + 5) * F(-1, 48)
    assert ln_f_second_closed_form(2) == want


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("h", [1, 3])
def test_log_coefficient_top_degree(r, h):
    poly = ln_f_coefficient(r, h)
    assert poly.degree == h + 1
    assert poly.coefficient(h + 1) == F(factorial(h - 1), factorial(h + 1)) / F(r) ** h


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("i", [0, 3, 7])
def test_second_identity(k, i):
    for r in (2, 3):
        c = second_identity_check(r, k, i)
        assert c.passed and c.got == F(factorial(k - 2)) / r ** (k - 1)


def test_second_identity_rejects_small_k():
    with pytest.raises(ValueError):
        second_identity_value(2, 1, 0)


def test_parity_classes():
    assert parity_classes(0) == ([0], [])
    assert parity_classes(3) == ([1, 3], [0, 2])
    assert parity_classes(4) == ([0, 2, 4], [1, 3])


def test_alpha0_k0_uses_plus_class_only():
    ex = alpha0_series(3, 0, 2)
    assert ex.coefficient(0) == 1


@pytest.mark.parametrize("i", [0, 1, 5, 10])
def test_alpha0_k1(i):
    ex = alpha0_series(i, 1, 3)
    assert ex.coefficient(0) == 0
    assert ex.coefficient(1) == F(i, 3)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_alpha0_leading_order(k):
    for r in (2, 3):
        ex = alpha0_series(1, k, r)
        assert ex.leading_order == k - 1
        assert ex.leading_coefficient() == F(factorial(k - 2)) / F(r) ** (k - 1)
        assert ex.leading_is_eps_free()
        assert all(c.passed for c in alpha0_checks(1, k, r))


def test_alpha0_higher_orders_carry_eps():
    ex = alpha0_series(4, 2, 2, order=5)
    assert not ex.alpha0[4].is_constant()


def test_first_identity_matches_product_route():
    for k in (1, 2, 3):
        ex = alpha0_series(2, k, 2)
        assert alpha0_first_identity(2, k, 2) == ex.alpha0


@pytest.mark.parametrize("k", [2, 3, 4])
def test_quadratic_cancellation(k):
    for d in range(1, k):
        checks = cancellation_check(1, k, 2, d)
        assert all(c.passed for c in checks)


def test_cancellation_argument_checks():
    with pytest.raises(ValueError):
        cancellation_check(0, 2, 2, 2)
