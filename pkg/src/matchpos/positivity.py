"""Normalization series K_i, F_i = (1 + hat-H_i)(1 + K_i), and the alpha_0 expansion.

With v = 2n and nu = 1/n,

    1 + K_i = (1 - nu/2)^i / prod_{t<2i} (1 - t nu/2)

exactly; the Stirling-series decomposition G_{i,1..5} gives a second,
independent route to the same series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .algebra import ConsistencyError, Poly1, as_fraction, bernoulli, delta_power_sum, interpolate_checked
from .epsilon import EpsilonRing, h_hat_series
from .report import Check
from .series import MultiPoly, TruncatedSeries, series_exp, series_log, series_mul, series_pow


def stirling_series_coefficient(j: int) -> Fraction:
    """c_j in ln((2n-2i)!) - ln((2n)!) = ... + sum_{j odd} c_j (1/n^j - 1/(n-i)^j)."""
    if j < 1 or j % 2 == 0:
        raise ValueError("c_j is defined for odd j >= 1")
    return -bernoulli(j + 1) / (j * (j + 1) * 2**j)


def _k_direct(i: int, order: int) -> TruncatedSeries:
    num = series_pow(TruncatedSeries([1, Fraction(-1, 2)], order, "nu"), i)
    den = TruncatedSeries.one(order, "nu")
    for t in range(2 * i):
        den = series_mul(den, TruncatedSeries([1, Fraction(-t, 2)], order, "nu"))
    return num / den - 1


def log_k_series(i: int, order: int) -> TruncatedSeries:
    """ln(1 + K_i) = G_{i,1} + ... + G_{i,5} as a nu-series."""
    def one_minus(c, n):
        return TruncatedSeries([1, -c], n, "nu")

    g1 = series_log(one_minus(Fraction(1, 2), order)) * i
    big_l = series_log(one_minus(i, order + 1))
    # (2n - 2i) ln(1 - i nu) = (2/nu) L - 2 i L
    g2 = TruncatedSeries([2 * big_l[k + 1] for k in range(order + 1)], order, "nu") - big_l.truncate(order) * (2 * i)
    g3 = 2 * i
    g4 = series_log(one_minus(i, order)) * Fraction(1, 2)
    g5 = TruncatedSeries([], order, "nu")
    for j in range(1, order + 1, 2):
        shifted = series_pow(one_minus(i, order), -j).shift_up(j)
        g5 = g5 + (TruncatedSeries.variable(order, "nu") ** j - shifted) * stirling_series_coefficient(j)
    g = g1 + g2 + g3 + g4 + g5
    if g[0] != 0:
        raise ConsistencyError("constant terms of the G decomposition do not cancel")
    return g


@lru_cache(maxsize=None)
def k_series(i: int, order: int) -> TruncatedSeries:
    """K_i through nu^order, computed by both routes and cross-checked."""
    if i < 0 or order < 1:
        raise ValueError("need i >= 0 and order >= 1")
    direct = _k_direct(i, order)
    via_g = series_exp(log_k_series(i, order)) - 1
    if direct != via_g:
        raise ConsistencyError(f"K_{i}: direct and Stirling-series routes disagree")
    return direct


def _eps(order: int, eps: EpsilonRing | None) -> EpsilonRing:
    return eps if eps is not None else EpsilonRing(s_max=max(order, 4))


@lru_cache(maxsize=None)
def f_series(r, i: int, order: int, eps: EpsilonRing | None = None) -> TruncatedSeries:
    """F_i = (1 + hat-H_i)(1 + K_i) with eps atoms symbolic."""
    r = as_fraction(r)
    eps = _eps(order, eps)
    return series_mul(h_hat_series(r, i, eps, order), k_series(i, order) + 1)


@lru_cache(maxsize=None)
def ln_f_series(r, i: int, order: int, eps: EpsilonRing | None = None) -> TruncatedSeries:
    return series_log(f_series(as_fraction(r), i, order, eps))


def ln_f_coefficient(r, h: int, i_window=None, eps: EpsilonRing | None = None) -> Poly1:
    """[nu^h] ln F_i as a polynomial in i (interpolated, overdetermined)."""
    r = as_fraction(r)
    window = list(range(0, h + 5) if i_window is None else i_window)
    if len(window) < h + 4:
        raise ValueError(f"i window needs at least {h + 4} nodes for h={h}")
    pts = [(i, ln_f_series(r, i, h, eps)[h]) for i in window]
    poly, bad = interpolate_checked(pts, h + 2, var="i")
    if bad:
        raise ConsistencyError(f"[nu^{h}] ln F_i is not a polynomial of degree <= {h + 1} in i")
    return Poly1([_scalar(c) for c in poly.coeffs], "i")


def ln_f_top_coefficient(r, h: int) -> Fraction:
    """Predicted [i^(h+1)] of [nu^h] ln F_i, i.e. (k-2)!/(k! r^(k-1)) at k = h+1."""
    r = as_fraction(r)
    return Fraction(factorial(h - 1), factorial(h + 1)) / r**h


def ln_f_second_closed_form(r) -> Poly1:
    """-(1/12) s (3r^2 s - 3r^2 - 12 r s - 2 s^2 + 12 r + 9 s - 7) / r^2, as a polynomial in s = i."""
    r = as_fraction(r)
    s = Poly1.x("i")
    inner = s * (3 * r**2) - 3 * r**2 - s * (12 * r) - s * s * 2 + 12 * r + s * 9 - 7
    return s * inner * Fraction(-1, 12) / r**2


def second_identity_value(r, k: int, i: int, eps: EpsilonRing | None = None):
    """Left side of the alternating-sum identity, with the log truncated at m = k-1."""
    if k < 2:
        raise ValueError("k must be at least 2")
    r = as_fraction(r)
    total = Fraction(0)
    for l in range(k + 1):
        u = f_series(r, i + l, k - 1, eps) - 1
        acc = TruncatedSeries([], k - 1, "nu")
        power = TruncatedSeries.one(k - 1, "nu")
        for m in range(1, k):
            power = series_mul(power, u)
            acc = acc + power * Fraction((-1) ** (m + 1), m)
        total = total + acc[k - 1] * (comb(k, l) * (-1) ** (l + k))
    return total


def second_identity_expected(r, k: int) -> Fraction:
    return Fraction(factorial(k - 2)) / as_fraction(r) ** (k - 1)


def second_identity_check(r, k: int, i: int, eps: EpsilonRing | None = None) -> Check:
    got = second_identity_value(r, k, i, eps)
    want = second_identity_expected(r, k)
    return Check("second_identity", {"r": as_fraction(r), "k": k, "i": i}, want, got, got == want)


def parity_classes(k: int) -> tuple[list[int], list[int]]:
    """(L+, L-): L+ holds the l in 0..k with the parity of k."""
    plus = [l for l in range(k + 1) if l % 2 == k % 2]
    minus = [l for l in range(k + 1) if l % 2 != k % 2]
    return plus, minus


def t_series(sign: str, i: int, k: int, r, order: int, eps: EpsilonRing | None = None) -> TruncatedSeries:
    """t_+ or t_-: sum over the parity class of C(k,l) ln(1 + U_{i+l})."""
    if k < 1:
        raise ValueError("k must be at least 1")
    plus, minus = parity_classes(k)
    ells = {"+": plus, "-": minus}[sign]
    out = TruncatedSeries([], order, "nu")
    for l in ells:
        out = out + ln_f_series(as_fraction(r), i + l, order, eps) * comb(k, l)
    return out


def _is_eps_free(c) -> bool:
    return not isinstance(c, MultiPoly) or c.is_constant()


def _scalar(c):
    return c.constant_value() if isinstance(c, MultiPoly) and c.is_constant() else c


@dataclass
class AlphaExpansion:
    i: int
    k: int
    r: Fraction
    alpha0: TruncatedSeries

    def coefficient(self, d: int):
        return _scalar(self.alpha0[d])

    @property
    def leading_order(self) -> int | None:
        return self.alpha0.valuation()

    def leading_coefficient(self):
        d = self.leading_order
        return None if d is None else self.coefficient(d)

    def leading_is_eps_free(self) -> bool:
        d = self.leading_order
        return d is None or _is_eps_free(self.alpha0[d])


def alpha0_series(i: int, k: int, r, order: int | None = None, eps: EpsilonRing | None = None) -> AlphaExpansion:
    """Product difference over the parity classes, fully expanded in nu.

    For k = 0 the L- class is empty and its product is dropped, so alpha_0 is
    the L+ product F_i itself (leading term 1).
    """
    r = as_fraction(r)
    order = k + 2 if order is None else order
    plus, minus = parity_classes(k)

    def product(ells):
        out = TruncatedSeries.one(order, "nu")
        for l in ells:
            out = series_mul(out, series_pow(f_series(r, i + l, order, eps), comb(k, l)))
        return out

    alpha = product(plus)
    if minus:
        alpha = alpha - product(minus)
    return AlphaExpansion(i, k, r, alpha)


def alpha0_first_identity(i: int, k: int, r, order: int | None = None, eps: EpsilonRing | None = None) -> TruncatedSeries:
    """exp(t_+) - exp(t_-), the same quantity through the log-sum route."""
    order = k + 2 if order is None else order
    return series_exp(t_series("+", i, k, r, order, eps)) - series_exp(t_series("-", i, k, r, order, eps))


def alpha0_checks(i: int, k: int, r, eps: EpsilonRing | None = None) -> list[Check]:
    """Leading-term statements for k = 0, k = 1 and k >= 2."""
    r = as_fraction(r)
    ex = alpha0_series(i, k, r, eps=eps)
    params = {"r": r, "k": k, "i": i}
    checks = []
    if k == 0:
        checks.append(Check("alpha0_leading_term", params, Fraction(1), ex.coefficient(0), ex.coefficient(0) == 1))
    elif k == 1:
        want = Fraction(i) / r
        got = [ex.coefficient(0), ex.coefficient(1)]
        checks.append(Check("alpha0_leading_term", params, [Fraction(0), want], got, got == [0, want]))
    else:
        low = [ex.coefficient(d) for d in range(k - 1)]
        want = second_identity_expected(r, k)
        got = ex.coefficient(k - 1)
        checks.append(Check("alpha0_vanishing_low_orders", params, [0] * (k - 1), low, all(c == 0 for c in low)))
        checks.append(Check("alpha0_leading_term", params, want, got, got == want))
        checks.append(
            Check(
                "alpha0_leading_eps_free",
                params,
                True,
                _is_eps_free(ex.alpha0[k - 1]),
                _is_eps_free(ex.alpha0[k - 1]),
            )
        )
    return checks


def cancellation_check(i: int, k: int, r, d: int, eps: EpsilonRing | None = None) -> list[Check]:
    """Quadratic terms of the exp-log expansion cancel through nu^d, d <= k-1."""
    if k < 2 or d > k - 1:
        raise ValueError("need k >= 2 and d <= k-1")
    r = as_fraction(r)
    order = max(k - 1, 1)
    tp = t_series("+", i, k, r, order, eps)
    tm = t_series("-", i, k, r, order, eps)
    params = {"r": r, "k": k, "i": i, "d": d}
    squares = (series_mul(tp, tp) - series_mul(tm, tm))[d]
    conv = Fraction(0)
    for s in range(1, d):
        conv = conv + tp[s] * tp[d - s] - tm[s] * tm[d - s]
    equal_low = [s for s in range(1, d) if tp[s] != tm[s]]
    return [
        Check("quadratic_cancellation", params, 0, squares, squares == 0),
        Check("quadratic_cancellation_convolution", params, 0, conv, conv == 0),
        Check("t_coefficients_agree", params, [], equal_low, not equal_low),
    ]


def delta_binomial_table(k: int, d: int) -> int:
    return delta_power_sum(k, d)


__all__ = [
    "AlphaExpansion",
    "alpha0_checks",
    "alpha0_first_identity",
    "alpha0_series",
    "cancellation_check",
    "delta_binomial_table",
    "f_series",
    "k_series",
    "ln_f_coefficient",
    "ln_f_second_closed_form",
    "ln_f_series",
    "ln_f_top_coefficient",
    "log_k_series",
    "parity_classes",
    "second_identity_check",
    "second_identity_expected",
    "second_identity_value",
    "stirling_series_coefficient",
    "t_series",
]
