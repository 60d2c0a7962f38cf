from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matchpos.algebra import Poly1
from matchpos.series import (
    MultiPoly,
    Ring,
    TruncatedSeries,
    atom_key,
    extract,
    series_compose,
    series_exp,
    series_inverse,
    series_log,
    series_mul,
    series_pow,
    series_sqrt_one_minus,
)

rationals = st.builds(F, st.integers(-30, 30), st.integers(1, 12))


def tail(order=6):
    """Series with zero constant term."""
    return st.lists(rationals, min_size=order, max_size=order).map(lambda c: TruncatedSeries([0] + c, order))


def test_ring_orders_atoms_naturally():
    ring = Ring(("eps_10", "n", "eps_4", "u_2"))
    assert ring.atoms == ("eps_4", "eps_10", "n", "u_2")
    assert atom_key("eps_12") == ("eps", 12)
    with pytest.raises(ValueError):
        Ring(("n", "n"))
    with pytest.raises(KeyError):
        ring.index("j")


def test_multipoly_arithmetic_and_text():
    ring = Ring(("n", "eps_4"))
    n = MultiPoly.atom(ring, "n")
    e = MultiPoly.atom(ring, "eps_4")
    p = (n + e) ** 2 - n * n
    assert p.to_text() == "eps_4^2 + 2*eps_4*n"
    assert p.degree("n") == 1 and p.total_degree() == 2
    assert p.coefficient({"n": 1}) == e * 2
    assert p.subs({"eps_4": 3}) == n * 6 + 9
    assert not p.free_of(["eps_4"])
    assert (p - p) == 0
    assert MultiPoly.constant(ring, F(1, 3)).to_text() == "1/3"


def test_multipoly_ring_mismatch():
    a = MultiPoly.atom(Ring(("n",)), "n")
    b = MultiPoly.atom(Ring(("m",)), "m")
    with pytest.raises(ValueError):
        a + b
    assert (a.embed(Ring(("m", "n"))) + b.embed(Ring(("m", "n")))).atoms_present() == {"m", "n"}


def test_series_basics():
    x = TruncatedSeries.variable(4)
    one_minus = TruncatedSeries([1, -1], 4)
    assert series_inverse(one_minus) == TruncatedSeries([1, 1, 1, 1, 1], 4)
    assert (x * x)[2] == 1
    assert x.valuation() == 1
    assert TruncatedSeries([], 3).valuation() is None
    assert series_exp(x).coeffs == [1, 1, F(1, 2), F(1, 6), F(1, 24)]
    assert series_log(TruncatedSeries([1, 1], 4)).coeffs == [0, 1, F(-1, 2), F(1, 3), F(-1, 4)]
    assert x.to_text() == "x + O(x^5)"


def test_sqrt_one_minus_matches_binomial_series():
    s = series_sqrt_one_minus(TruncatedSeries([0, 4], 4))
    # sqrt(1 - 4x) = 1 - 2x - 2x^2 - 4x^3 - 10x^4
    assert s.coeffs == [1, -2, -2, -4, -10]


def test_domain_errors():
    with pytest.raises(ValueError):
        series_exp(TruncatedSeries([1, 1], 3))
    with pytest.raises(ValueError):
        series_log(TruncatedSeries([2, 1], 3))
    with pytest.raises(ValueError):
        series_pow(TruncatedSeries([2, 1], 3), F(1, 2))
    with pytest.raises(ValueError):
        series_compose(TruncatedSeries([1, 1], 3), TruncatedSeries([1, 1], 3))


@given(tail())
def test_exp_log_roundtrip(a):
    assert series_log(series_exp(a)) == a
    assert series_exp(series_log(series_exp(a))) == series_exp(a)


@given(tail(), tail())
def test_exp_is_multiplicative(a, b):
    assert series_exp(a + b) == series_mul(series_exp(a), series_exp(b))


@given(tail(), rationals, rationals)
def test_power_laws(a, p, q):
    base = a + 1
    assert series_mul(series_pow(base, p), series_pow(base, q)) == series_pow(base, p + q)
    assert series_pow(base, 3) == series_mul(base, series_mul(base, base))
    assert series_mul(base, series_inverse(base)) == TruncatedSeries.one(base.order)


@given(tail())
def test_compose_with_exp(b):
    e = series_exp(TruncatedSeries.variable(b.order))
    assert series_compose(e, b) == series_exp(b)


def test_series_with_symbolic_coefficients():
    ring = Ring(("eps_4",))
    e = MultiPoly.atom(ring, "eps_4")
    s = TruncatedSeries([MultiPoly(ring), MultiPoly(ring), e], 4, "y")
    ex = series_exp(s)
    assert ex[4] == e * e * F(1, 2)
    assert extract(ex, {"y": 4, "eps_4": 2}) == F(1, 2)
    with pytest.raises(ValueError):
        extract(ex, {"y": 5})


def test_extract_from_poly_coefficients():
    s = TruncatedSeries([Poly1([1], "j"), Poly1([0, 3, 2], "j")], 1, "nu")
    assert extract(s, {"nu": 1, "j": 2}) == 2
    with pytest.raises(KeyError):
        extract(TruncatedSeries([1, 2], 1), {"x": 1, "eps_4": 1})
