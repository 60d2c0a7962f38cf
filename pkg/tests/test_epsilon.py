from fractions import Fraction as F
from math import factorial

import pytest

from matchpos.epsilon import (
    EpsilonRing,
    h_hat_coeffs,
    h_hat_series,
    m_small,
    operator_coefficients,
    xhat_apply,
)
from matchpos.series import MultiPoly, extract
from matchpos.wanless import a_numeric, m_big, u_sequence


def test_epsilon_ring_atoms():
    assert EpsilonRing(6).atoms == ("eps_4", "eps_5", "eps_6")
    assert EpsilonRing(5, s_min=3).atoms == ("eps_3", "eps_4", "eps_5")
    with pytest.raises(ValueError):
        EpsilonRing(6, s_min=2)


def test_xhat_apply():
    seq = ["M0", "M1", "M2", "M3"]
    assert xhat_apply(seq, 0, 3) == "M3"
    assert xhat_apply(seq, 3, 3) == "M0"
    assert xhat_apply(seq, 4, 3) == 0


def test_operator_coefficients():
    eps = EpsilonRing(8)
    e = operator_coefficients(eps, 8)
    ring = eps.ring
    e4 = MultiPoly.atom(ring, "eps_4")
    e5 = MultiPoly.atom(ring, "eps_5")
    assert e[0] == 1 and e[1] == 0 and e[3] == 0
    assert e[4] == e4 * F(1, 8)
    assert e[5] == e5 * F(-1, 10)
    # second-order term of the exponential: (eps_4/8)^2 / 2
    assert extract(e[8], {"eps_4": 2}) == F(1, 128)


def test_m_small_below_first_correction_is_unchanged():
    eps = EpsilonRing(6)
    u = u_sequence(2, 3)
    got = m_small(2, 3, eps, u).value
    assert got == m_big(2, u, 3).embed(got.ring)


def test_m_small_first_correction():
    eps = EpsilonRing(6)
    got = m_small(2, 4, eps).value
    u = u_sequence(2, 4)
    want = m_big(2, u, 4).embed(got.ring) + MultiPoly.atom(got.ring, "eps_4") * F(1, 8)
    assert got == want


def test_m_small_with_eps_zero_recovers_m_big():
    eps = EpsilonRing(7)
    got = m_small(3, 7, eps).value
    zeroed = got.subs({a: 0 for a in eps.atoms})
    assert zeroed == m_big(3, u_sequence(3, 7), 7).embed(zeroed.ring)


def test_h_hat_leading_terms():
    eps = EpsilonRing(5)
    for j in range(2, 8):
        a = h_hat_coeffs(2, j, eps, order=5)
        assert a[0] == 1
        assert a[1] == a_numeric(2, j)[1]
        assert a[1] == j * (j - 1) * (-1 + F(1, 4))


def test_h_hat_eps4_coefficient_at_j4():
    # (eps_4/8) * 4!/2^4 = 3/16 at nu^4
    a = h_hat_coeffs(2, 4, EpsilonRing(4), order=4)
    assert extract(h_hat_series(2, 4, EpsilonRing(4), order=4), {"nu": 4, "eps_4": 1}) == F(3, 16)
    assert a[4].subs({"eps_4": 0}) == 0


def test_h_hat_matches_m_small_expansion():
    # hat-a_h = [n^(j-h)] j! m_j / r^j
    r, j = 3, 6
    eps = EpsilonRing(6)
    m = m_small(r, j, eps).value
    coeffs = h_hat_coeffs(r, j, eps, order=j)
    for h in range(j + 1):
        want = m.coefficient({"n": j - h}) * F(factorial(j), r**j)
        assert coeffs[h].embed(want.ring) == want
