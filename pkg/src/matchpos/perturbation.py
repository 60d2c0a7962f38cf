"""Perturbed a-series and the compensating shifts xx_s.

The perturbed series is

    F = sum_s a'_s(j) nu^s + sum_i c_i j^(z_i) / r^(z_i) nu^(z_i) sum_s a'_s(j - z_i) nu^s

with a'_s the polynomial extensions built from a base sequence u'. Feeding
u'_s + xx_s back through the u -> a map must reproduce F. The map is
triangular: u_s first enters at [nu^(s-1)], through the single-part term
j^(s) b_s / r^s, so xx_s is read off from that coefficient once xx_t, t < s,
are known.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    ConsistencyError,
    Poly1,
    RationalFunction,
    as_fraction,
    falling_factorial_poly,
    interpolate_checked,
)
from .report import Check
from .series import MultiPoly, TruncatedSeries, series_log
from .wanless import (
    USequence,
    _multiplicity_factorial,
    a_poly_in_j,
    a_values,
    arbitrary_u_sequence,
    default_j_window,
    leading_log_coefficient,
    partitions,
    u_sequence,
)

VAR = "j"


@dataclass(frozen=True)
class Perturbation:
    """Terms (z, c); c is a Fraction or a MultiPoly atom."""

    terms: tuple = ()
    z_min: int = 4

    def __post_init__(self):
        if self.z_min not in (2, 4):
            raise ValueError("z_min must be 2 or 4")
        terms = tuple((int(z), c if isinstance(c, MultiPoly) else as_fraction(c)) for z, c in self.terms)
        for z, _ in terms:
            if z < self.z_min:
                raise ValueError(f"perturbation order z={z} below z_min={self.z_min}")
        object.__setattr__(self, "terms", terms)

    def __hash__(self):
        return hash((tuple((z, str(c)) for z, c in self.terms), self.z_min))

    def restricted(self, z_max: int) -> "Perturbation":
        return Perturbation(tuple((z, c) for z, c in self.terms if z <= z_max), self.z_min)

    def to_text(self) -> str:
        if not self.terms:
            return "[]"
        return "[" + ", ".join(f"({z}, {_text(c)})" for z, c in self.terms) + "]"


def _text(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return c.to_text()


def build_perturbed_f(u: USequence, pert: Perturbation, order: int) -> TruncatedSeries:
    """F through nu^order; coefficients are polynomials in j."""
    if u.s_max < order + 1:
        raise ValueError(f"u covers s <= {u.s_max}; F through nu^{order} needs s <= {order + 1}")
    r = u.r
    base = [a_poly_in_j(r, u, h, var=VAR) for h in range(order + 1)]
    coeffs = list(base)
    for z, c in pert.terms:
        if z > order:
            continue
        scale = falling_factorial_poly(z, VAR) * c / r**z
        for h in range(order - z + 1):
            coeffs[z + h] = coeffs[z + h] + scale * base[h].shift(-z)
    return TruncatedSeries(coeffs, order, "nu")


def a_from_b(bs: dict, r, h: int):
    """a_h(j) from arbitrary b_s values (any ring closed under * by Poly1)."""
    if h == 0:
        return RationalFunction(Poly1([1], VAR))
    total = RationalFunction(Poly1([], VAR))
    for parts in partitions(h):
        ss = [p + 1 for p in parts]
        big_s = sum(ss)
        term = RationalFunction(falling_factorial_poly(big_s, VAR)) * Fraction(1, r**big_s * _multiplicity_factorial(parts))
        for s in ss:
            term = term * bs[s]
        total = total + term
    return total


def _b(u_s, s: int):
    return u_s * Fraction(-((-1) ** s), s)


def single_part_multiplier(r, s: int) -> Poly1:
    """d a_(s-1) / d u_s = -(-1)^s j^(s) / (s r^s)."""
    return falling_factorial_poly(s, VAR) * Fraction(-((-1) ** s), s) / as_fraction(r) ** s


@dataclass
class XXSolution:
    r: Fraction
    base: USequence
    pert: Perturbation
    order: int
    f: TruncatedSeries
    xx: dict = field(default_factory=dict)

    def __getitem__(self, s: int) -> RationalFunction:
        return self.xx[s]

    def degrees(self) -> dict:
        return {s: v.degrees() for s, v in self.xx.items()}

    def shifted_u(self) -> dict:
        return {s: self.xx[s] + self.base[s] for s in self.xx}

    def to_text(self) -> str:
        return "\n".join(f"xx_{s} = {self.xx[s].to_text()}" for s in sorted(self.xx))


def solve_xx(
    pert: Perturbation,
    s_max: int,
    *,
    r=1,
    base: USequence | None = None,
    seed: int = 0,
) -> XXSolution:
    """Solve for xx_2..xx_s_max so that {u' + xx} reproduces F through nu^(s_max-1)."""
    if s_max < 2:
        raise ValueError("s_max must be at least 2")
    if s_max > 12 and base is None:
        raise ValueError("s_max above 12 is outside desk scale; pass an explicit base sequence")
    r = as_fraction(r)
    base = base or arbitrary_u_sequence(s_max, r=r, seed=seed)
    f = build_perturbed_f(base, pert, s_max - 1)
    sol = XXSolution(r, base, pert, s_max, f)
    bs: dict = {}
    for s in range(2, s_max + 1):
        bs[s] = _b(RationalFunction(Poly1([base[s]], VAR)), s)
        partial = a_from_b(bs, r, s - 1)
        residual = RationalFunction(f[s - 1]) - partial
        mult = single_part_multiplier(r, s)
        if mult.is_zero():
            raise ConsistencyError(f"zero multiplier at s={s}")
        xx = residual / mult
        sol.xx[s] = xx
        bs[s] = _b(xx + base[s], s)
    return sol


def back_substitute(sol: XXSolution) -> list:
    """a_h(j) from {u' + xx}, h = 0..s_max-1, exactly."""
    bs = {s: _b(v, s) for s, v in sol.shifted_u().items()}
    return [a_from_b(bs, sol.r, h) for h in range(sol.order)]


def _no_integer_root_above(den: Poly1, s: int) -> bool:
    if den.degree <= 0:
        return True
    bound = 1 + max(abs(c) for c in den.coeffs[:-1])
    return all(den(j) != 0 for j in range(s + 1, int(bound) + 2))


def solution_checks(sol: XXSolution, j_values=None) -> list[Check]:
    """Exact and numeric back-substitution, plus pole location."""
    params = {"r": sol.r, "pert": sol.pert.to_text(), "s_max": sol.order}
    checks = []
    got = back_substitute(sol)
    bad = [h for h, a in enumerate(got) if not a == RationalFunction(sol.f[h])]
    checks.append(Check("xx_back_substitution_exact", params, [], bad, not bad))

    j_values = list(j_values) if j_values is not None else list(range(sol.order + 1, sol.order + 6))
    mismatches = []
    for j in j_values:
        vals = {s: sol.base[s] + sol.xx[s](j) for s in sol.xx}
        u = USequence(sol.r, vals, mode="arbitrary")
        direct = a_values(u, j, sol.order - 1)
        want = [sol.f[h](j) for h in range(sol.order)]
        if direct != want:
            mismatches.append(j)
    checks.append(Check("xx_back_substitution_numeric", {**params, "j": j_values}, [], mismatches, not mismatches))

    poles = [s for s, v in sol.xx.items() if not _no_integer_root_above(v.den, s)]
    checks.append(Check("xx_denominator_nonzero_above_s", params, [], poles, not poles))
    return checks


def verify_degree_property(sol: XXSolution, z_min: int | None = None) -> list[Check]:
    """deg P_s < deg Q_s for z_min = 4; degrees are only recorded for z_min = 2."""
    z_min = sol.pert.z_min if z_min is None else z_min
    checks = []
    for s in sorted(sol.xx):
        v = sol.xx[s]
        dn, dd = v.degrees()
        params = {"s": s, "pert": sol.pert.to_text(), "z_min": z_min}
        ok = v.is_zero() or dn < dd
        if z_min >= 4:
            checks.append(Check("xx_decays_in_j", params, "deg P < deg Q", [dn, dd], ok))
        else:
            checks.append(Check("xx_degrees_recorded", params, None, [dn, dd], True))
    return checks


def ln_f_poly(r, pert: Perturbation, h_max: int) -> TruncatedSeries:
    u = u_sequence(r, h_max + 1)
    return series_log(build_perturbed_f(u, pert, h_max))


def verify_perturbed_log_expansion(r, pert: Perturbation, h_max: int, j_window=None) -> list[Check]:
    """Degree bound and leading j-coefficient of [nu^h] ln F, h = 1..h_max.

    The exact route reads the polynomial in j directly; the window route
    evaluates at integer j, interpolates on h+2 nodes and checks the rest.
    """
    r = as_fraction(r)
    if any(z < 4 for z, _ in pert.terms):
        raise ValueError("the degree statement covers z_i >= 4 only")
    window = list(default_j_window(h_max) if j_window is None else j_window)
    if len(window) < h_max + 3:
        raise ValueError(f"j window needs at least {h_max + 3} nodes")
    u = u_sequence(r, h_max + 1)
    f = build_perturbed_f(u, pert, h_max)
    lnf = series_log(f)
    numeric = {}
    for j in window:
        fj = TruncatedSeries([f[h](j) for h in range(h_max + 1)], h_max, "nu")
        numeric[j] = series_log(fj)
    checks = []
    for h in range(1, h_max + 1):
        params = {"r": r, "h": h, "pert": pert.to_text()}
        g = lnf[h]
        want = leading_log_coefficient(r, h)
        checks.append(Check("perturbed_log_degree_bound", params, h + 1, g.degree, g.degree <= h + 1))
        got = g.coefficient(h + 1)
        checks.append(Check("perturbed_log_leading_term", params, want, got, got == want))
        poly, bad = interpolate_checked([(j, numeric[j][h]) for j in window], h + 2, var=VAR)
        ok = not bad and poly == g
        checks.append(Check("perturbed_log_window_agrees", {**params, "window": [window[0], window[-1]]}, [], [b[0] for b in bad], ok))
    return checks


def perturbation_invariance(r, perts: list, h_max: int) -> Check:
    """Verdicts of verify_perturbed_log_expansion coincide across perturbations (and the empty one)."""
    verdicts = {}
    for p in [Perturbation()] + list(perts):
        verdicts[p.to_text()] = [c.passed for c in verify_perturbed_log_expansion(r, p, h_max)]
    first = next(iter(verdicts.values()))
    same = all(v == first for v in verdicts.values())
    return Check(
        "perturbation_invariance",
        {"r": as_fraction(r), "h_max": h_max, "perturbations": list(verdicts)},
        True,
        same and all(first),
        same and all(first),
    )


__all__ = [
    "Perturbation",
    "XXSolution",
    "a_from_b",
    "back_substitute",
    "build_perturbed_f",
    "ln_f_poly",
    "perturbation_invariance",
    "single_part_multiplier",
    "solution_checks",
    "solve_xx",
    "verify_degree_property",
    "verify_perturbed_log_expansion",
]
