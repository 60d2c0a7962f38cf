from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matchpos.series import MultiPoly, Ring
from matchpos.wanless import (
    a_numeric,
    a_poly_in_j,
    a_values,
    arbitrary_u_sequence,
    check_u_relation,
    leading_log_coefficient,
    log_h_coefficients,
    m_big,
    partitions,
    t_series,
    u_sequence,
    verify_a_polynomiality,
    verify_pernici_identities,
)

# Oracle values below were produced offline with a computer algebra system
# (series of T_r, exponential of the generating exponent, log in nu) and
# frozen here; they do not depend on this package.
U_R2 = [1, 2, 6, 20, 70, 252, 924]
U_R3 = [1, 3, 15, 87, 543, 3543, 23823]
A_R2_J6 = [F(1), F(-45, 2), F(805, 4), F(-7155, 8), F(15797, 8), F(-3465, 2)]
A_R3_J5 = [F(1), F(-50, 3), F(955, 9), F(-8330, 27), F(9448, 27)]
LOG_R2_J7 = [F(0), F(-63, 2), F(-679, 8), F(-2499, 8)]


def test_t_series_coefficients():
    assert t_series(2, 6).coeffs == U_R2
    assert t_series(3, 6).coeffs == U_R3
    with pytest.raises(ValueError):
        t_series(1, 3)


@given(st.integers(2, 9))
def test_u_closed_forms(r):
    u = u_sequence(r, 6)
    assert u[2] == 2 * r * r - r
    assert t_series(r, 1)[1] == r
    assert check_u_relation(u)


def test_check_u_relation_rejects_perturbed_sequence():
    u = u_sequence(3, 5)
    u.values[4] += 1
    assert not check_u_relation(u)


def test_m_big_small_case():
    u = u_sequence(2, 2)
    ring = Ring(("n",))
    n = MultiPoly.atom(ring, "n")
    assert m_big(2, u, 2) == n * n * 2 - n * 3
    assert m_big(2, u, 0) == 1


def test_a_values_against_oracle():
    assert a_numeric(2, 6) == A_R2_J6
    assert a_numeric(3, 5) == A_R3_J5
    assert a_numeric(2, 2) == [1, F(-3, 2)]


def test_a_values_match_m_big_expansion():
    # a_h is read from j! M_j / (n r)^j; compare with the n-polynomial directly.
    r, j = 3, 5
    u = u_sequence(r, j)
    m = m_big(r, u, j)
    for h, want in enumerate(a_numeric(r, j)):
        got = m.coefficient({"n": j - h}).constant_value() * factorial(j) / F(r) ** j
        assert got == want


def test_log_coefficients_against_oracle():
    u = u_sequence(2, 8)
    assert log_h_coefficients(u, 7, 3) == LOG_R2_J7


def test_partitions():
    assert list(partitions(4)) == [[4], [3, 1], [2, 2], [2, 1, 1], [1, 1, 1, 1]]
    assert list(partitions(0)) == [[]]
    assert len(list(partitions(8))) == 22


@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("h", range(0, 5))
def test_a_poly_in_j_matches_direct_values(r, h):
    u = u_sequence(r, max(h + 1, 2))
    poly = a_poly_in_j(r, u, h, validate=False)
    assert poly.degree <= 2 * h
    for j in range(h + 1, 3 * h + 4):
        assert poly(j) == a_values(u, j, h)[h]


def test_a1_closed_form():
    # a_1(j) = j(j-1) b_2 / r^2 with b_2 = -u_2/2 = -(2r^2 - r)/2
    r = F(5)
    u = u_sequence(r, 3)
    poly = a_poly_in_j(r, u, 1)
    for j in range(2, 8):
        assert poly(j) == -j * (j - 1) * (2 * r * r - r) / (2 * r * r)


def test_leading_log_spot_values():
    assert leading_log_coefficient(2, 1) == F(-3, 4)
    assert leading_log_coefficient(3, 2) == F(-17, 54)


def test_pernici_identities_small():
    checks = verify_pernici_identities(2, 3)
    assert checks and all(c.passed for c in checks)
    lead = [c for c in checks if c.name == "log_coefficient_leading_term"]
    assert [c.got for c in lead] == [leading_log_coefficient(2, h) for h in (1, 2, 3)]


def test_pernici_degree_bound_for_arbitrary_u():
    u = arbitrary_u_sequence(5, seed=11)
    checks = verify_pernici_identities(u, 3)
    assert checks and all(c.passed for c in checks)
    assert {c.name for c in checks} == {"log_coefficient_degree_bound"}


def test_pernici_window_validation():
    with pytest.raises(ValueError):
        verify_pernici_identities(2, 3, j_window=range(4, 7))


def test_arbitrary_sequences_are_seeded():
    a = arbitrary_u_sequence(6, seed=3)
    b = arbitrary_u_sequence(6, seed=3)
    assert a.values == b.values
    assert a.values != arbitrary_u_sequence(6, seed=4).values
    sym = arbitrary_u_sequence(4, symbolic=True)
    assert sym.ring.atoms == ("u_2", "u_3", "u_4")


def test_a_polynomiality_report():
    checks = verify_a_polynomiality(2, 3)
    assert len(checks) == 4 and all(c.passed for c in checks)


def test_u_index_errors():
    u = u_sequence(2, 3)
    with pytest.raises(IndexError):
        u[5]
    with pytest.raises(ValueError):
        u_sequence(2, 1)
