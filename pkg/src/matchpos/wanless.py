"""Idealized matching counts M_j and their 1/n expansion coefficients a_h(r, j).

The generating exponent is ``n r x + n * sum_s b_s x^s`` with
``b_s = -u_s (-1)^s / s``; ``a_h`` is the coefficient of ``n^-h`` in
``j! M_j / (n r)^j``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator

from .algebra import (
    ConsistencyError,
    Poly1,
    as_fraction,
    falling,
    falling_factorial_poly,
    interpolate_checked,
)
from .report import Check
from .series import (
    MultiPoly,
    Ring,
    TruncatedSeries,
    embed,
    series_exp,
    series_inverse,
    series_log,
    series_pow,
    series_sqrt_one_minus,
)


@dataclass
class USequence:
    """Values u_2..u_S, either derived from r or arbitrary.

    ``values`` maps s to a Fraction, or to a MultiPoly over ``ring`` in
    symbolic mode.
    """

    r: Fraction
    values: dict[int, object]
    mode: str = "numeric"
    ring: Ring | None = None
    seed: int | None = None

    @property
    def s_max(self) -> int:
        return max(self.values, default=1)

    def __getitem__(self, s: int):
        try:
            return self.values[s]
        except KeyError:
            raise IndexError(f"u_{s} not available (s_max={self.s_max})") from None

    def b(self, s: int):
        """Coefficient of x^s (divided by n) in the generating exponent."""
        return -self[s] * Fraction((-1) ** s, s)


def t_series(r, order: int) -> TruncatedSeries:
    """The x-series T_r whose coefficients define u_s(r)."""
    r = as_fraction(r)
    if r < 2:
        raise ValueError(f"u_s(r) needs r >= 2, got r={r}")
    sq = series_sqrt_one_minus(TruncatedSeries([0, 4 * (r - 1)], order))
    den = r * sq + (2 * (r - 1) - r)
    return series_inverse(den) * (2 * (r - 1))


def u_sequence(r, s_max: int) -> USequence:
    if s_max < 2:
        raise ValueError("s_max must be at least 2")
    r = as_fraction(r)
    t = t_series(r, s_max)
    return USequence(r, {s: t[s] for s in range(2, s_max + 1)})


def check_u_relation(u: USequence) -> bool:
    """Plug u back into the algebraic relation defining T_r.

    With D = 2(r-1)/T we have r*sqrt(1-4x(r-1)) = D - (r-2); squaring and
    clearing T gives r^2 (1-4x(r-1)) T^2 = (2(r-1) - (r-2) T)^2.
    """
    r, n = u.r, u.s_max
    t = TruncatedSeries([1, r] + [u[s] for s in range(2, n + 1)], n)
    lhs = t * t * (TruncatedSeries([1, -4 * (r - 1)], n) * r * r)
    rhs_inner = (2 * (r - 1)) - t * (r - 2)
    return lhs == rhs_inner * rhs_inner


def arbitrary_u_sequence(
    s_max: int, *, r=1, seed: int | None = None, symbolic: bool = False, bound: int = 100
) -> USequence:
    """u-values unrelated to any graph: seeded random rationals or free atoms."""
    r = as_fraction(r)
    if symbolic:
        ring = Ring(tuple(f"u_{s}" for s in range(2, s_max + 1)))
        vals = {s: MultiPoly.atom(ring, f"u_{s}") for s in range(2, s_max + 1)}
        return USequence(r, vals, mode="arbitrary", ring=ring)
    rng = random.Random(seed)
    vals = {
        s: Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for s in range(2, s_max + 1)
    }
    return USequence(r, vals, mode="arbitrary", seed=seed)


def m_big(r, u: USequence, j: int) -> MultiPoly:
    """M_j as an explicit polynomial in the atom ``n``."""
    if j < 0:
        raise ValueError("j must be non-negative")
    r = as_fraction(r)
    ring = Ring(("n",) + (u.ring.atoms if u.ring else ()))
    if j == 0:
        return MultiPoly.constant(ring, 1)
    if u.s_max < j and j >= 2:
        raise ValueError(f"u covers s <= {u.s_max}, M_{j} needs s <= {j}")
    n = MultiPoly.atom(ring, "n")
    expo = [MultiPoly(ring), n * r] + [n * embed(u.b(s), ring) for s in range(2, j + 1)]
    return series_exp(TruncatedSeries(expo, j))[j]


def a_values(u: USequence, j: int, h_max: int) -> list:
    """a_0 .. a_{h_max} at integer j (zero for h >= j).

    Uses a_h = j!/((j-h)! r^h) [x^h] (1 + g)^(j-h), g = sum_s (b_s / r) x^(s-1),
    which only touches the low-order part of M_j.
    """
    r = u.r
    out: list = [Fraction(1)] + [Fraction(0)] * h_max
    top = min(h_max, j - 1)
    if top < 1:
        return out
    if u.s_max < top + 1:
        raise ValueError(f"u covers s <= {u.s_max}, need s <= {top + 1}")
    g = TruncatedSeries([1] + [u.b(s) / r for s in range(2, top + 2)], top)
    for h in range(1, top + 1):
        p = series_pow(g.truncate(h), j - h)
        out[h] = p[h] * Fraction(falling(j, h), 1) / r**h
    return out


def a_numeric(r, j: int) -> list:
    """[a_0, ..., a_{j-1}] for the u-sequence of T_r."""
    if j < 1:
        raise ValueError("j must be at least 1")
    u = u_sequence(r, max(j, 2))
    return a_values(u, j, j - 1)


def partitions(h: int, min_part: int = 1) -> Iterator[list[int]]:
    """Integer partitions of h, parts non-increasing and >= min_part."""
    if h == 0:
        yield []
        return

    def rec(rem: int, cap: int):
        if rem == 0:
            yield []
            return
        for p in range(min(rem, cap), min_part - 1, -1):
            for rest in rec(rem - p, p):
                yield [p] + rest

    yield from rec(h, h)


def _multiplicity_factorial(parts: list[int]) -> int:
    out = 1
    for p in set(parts):
        out *= factorial(parts.count(p))
    return out


def a_poly_in_j(r, u: USequence, h: int, *, validate: bool = True, var: str = "j") -> Poly1:
    """a_h(r, j) as a polynomial in j, from the multiset expansion.

    Sum over multisets {s_i >= 2} with sum(s_i - 1) = h of
    j^(S) * prod(b_s) / (r^S * prod(mult!)), S = sum(s_i).
    """
    r = as_fraction(r)
    if h < 0:
        raise ValueError("h must be non-negative")
    if h == 0:
        return Poly1([1], var)
    if u.s_max < h + 1:
        raise ValueError(f"u covers s <= {u.s_max}, a_{h} needs s <= {h + 1}")
    total = Poly1([], var)
    for parts in partitions(h):
        ss = [p + 1 for p in parts]
        big_s = sum(ss)
        coeff = Fraction(1, r**big_s * _multiplicity_factorial(parts))
        for s in ss:
            coeff = u.b(s) * coeff
        total = total + falling_factorial_poly(big_s, var) * coeff
    if validate:
        for j in range(h + 1, 3 * h + 4):
            want = a_values(u, j, h)[h]
            if total(j) != want:
                raise ConsistencyError(f"a_{h} polynomial disagrees with direct value at j={j}")
    return total


def log_h_coefficients(u: USequence, j: int, h_max: int) -> list:
    """[nu^h] log(1 + H_j) for h = 0..h_max."""
    a = a_values(u, j, h_max)
    return series_log(TruncatedSeries(a, h_max, "nu")).coeffs


def leading_log_coefficient(r, h: int) -> Fraction:
    r = as_fraction(r)
    return Fraction(1, (h + 1) * h) * (1 / r**h - 2)


def default_j_window(h_max: int) -> range:
    return range(h_max + 2, 3 * h_max + 4)


def verify_pernici_identities(
    u_or_r, h_max: int, j_window: Iterable[int] | None = None
) -> list[Check]:
    """Degree bound and leading coefficient of [nu^h] log(1 + H_j) in j.

    ``u_or_r`` is a USequence (arbitrary mode: degree checks only) or a
    numeric r (u from T_r; leading coefficients checked as well).
    """
    if isinstance(u_or_r, USequence):
        u = u_or_r
    else:
        u = u_sequence(u_or_r, h_max + 1)
    window = sorted(default_j_window(h_max) if j_window is None else j_window)
    if len(window) < h_max + 4 or window[0] <= h_max:
        raise ValueError(
            f"j window must have at least {h_max + 4} nodes, all above h_max={h_max}"
        )
    table = {j: log_h_coefficients(u, j, h_max) for j in window}
    params_base = {"r": u.r, "mode": u.mode}
    if u.seed is not None:
        params_base["seed"] = u.seed
    checks = []
    for h in range(1, h_max + 1):
        pts = [(j, table[j][h]) for j in window]
        poly, bad = interpolate_checked(pts, h + 2, var="j")
        params = dict(params_base, h=h, window=f"{window[0]}..{window[-1]}")
        checks.append(
            Check(
                "log_coefficient_degree_bound",
                params,
                expected=f"degree <= {h + 1}",
                got=f"{len(bad)} off-polynomial nodes" if bad else f"degree {poly.degree}",
                passed=not bad and poly.degree <= h + 1,
            )
        )
        if u.mode == "numeric":
            lead = poly.coefficient(h + 1)
            want = leading_log_coefficient(u.r, h)
            checks.append(
                Check("log_coefficient_leading_term", params, expected=want, got=lead, passed=lead == want)
            )
    return checks


def verify_a_polynomiality(r, h_max: int) -> list[Check]:
    """Closed-form a_h(j) against the direct value at 2h+3 consecutive j."""
    u = u_sequence(r, h_max + 1)
    checks = []
    for h in range(0, h_max + 1):
        poly = a_poly_in_j(r, u, h, validate=False)
        nodes = range(h + 1, 3 * h + 4)
        bad = [j for j in nodes if poly(j) != a_values(u, j, h)[h]]
        checks.append(
            Check(
                "a_polynomial_matches_direct",
                {"r": as_fraction(r), "h": h, "nodes": len(nodes)},
                expected=f"agreement, degree <= {2 * h}",
                got=f"degree {poly.degree}, mismatches {bad}",
                passed=not bad and poly.degree <= 2 * h,
            )
        )
    return checks


__all__ = [
    "USequence",
    "a_numeric",
    "a_poly_in_j",
    "a_values",
    "arbitrary_u_sequence",
    "check_u_relation",
    "default_j_window",
    "leading_log_coefficient",
    "log_h_coefficients",
    "m_big",
    "partitions",
    "t_series",
    "u_sequence",
    "verify_a_polynomiality",
    "verify_pernici_identities",
]
