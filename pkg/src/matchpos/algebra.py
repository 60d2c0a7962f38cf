"""Exact scalar and univariate polynomial arithmetic.

Rationals are :class:`fractions.Fraction`. Everything here is exact; there is
no floating point in this module.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence


class ConsistencyError(ArithmeticError):
    """Two independent constructions of the same object disagreed."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def falling(x, z: int):
    """x (x-1) ... (x-z+1); works for ints, Fractions and anything ring-like."""
    out = 1
    for t in range(z):
        out = out * (x - t)
    return out


# -- Bernoulli and Stirling numbers ------------------------------------------

_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m with B_1 = -1/2."""
    if m < 0:
        raise ValueError("bernoulli index must be non-negative")
    while len(_BERNOULLI) <= m:
        t = len(_BERNOULLI)
        acc = sum(comb(t + 1, k) * _BERNOULLI[k] for k in range(t))
        _BERNOULLI.append(-acc / (t + 1))
    return _BERNOULLI[m]


_STIRLING1: list[list[int]] = [[1]]
_STIRLING2: list[list[int]] = [[1]]


def stirling_first_unsigned(n: int, k: int) -> int:
    """Number of permutations of n objects with exactly k cycles."""
    if n < 0 or k < 0 or k > n:
        return 0
    rows = _STIRLING1
    while len(rows) <= n:
        m = len(rows)  # building row m from row m-1
        prev = rows[-1]
        row = [0] * (m + 1)
        for j in range(1, m + 1):
            row[j] = (prev[j - 1] if j - 1 < len(prev) else 0) + (m - 1) * (prev[j] if j < len(prev) else 0)
        rows.append(row)
    return rows[n][k]


def stirling_second(n: int, k: int) -> int:
    """Number of partitions of an n-set into k non-empty blocks."""
    if n < 0 or k < 0 or k > n:
        return 0
    rows = _STIRLING2
    while len(rows) <= n:
        m = len(rows)
        prev = rows[-1]
        row = [0] * (m + 1)
        for j in range(1, m + 1):
            row[j] = (prev[j - 1] if j - 1 < len(prev) else 0) + j * (prev[j] if j < len(prev) else 0)
        rows.append(row)
    return rows[n][k]


# -- Poly1 --------------------------------------------------------------------

def _is_zero(c) -> bool:
    return c == 0


def _coerce(c):
    return Fraction(c) if isinstance(c, int) else c


class Poly1:
    """Dense univariate polynomial, lowest degree first.

    Coefficients are usually Fractions, but any ring element supporting
    ``+``, ``*`` and comparison with 0 works (e.g. :class:`MultiPoly`).
    Division-based operations (divmod, gcd) need field coefficients.
    """

    __slots__ = ("var", "coeffs")
    __hash__ = None

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        cs = [_coerce(c) for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = cs
        self.var = var

    @classmethod
    def constant(cls, c, var: str = "x") -> "Poly1":
        return cls([c], var)

    @classmethod
    def x(cls, var: str = "x") -> "Poly1":
        return cls([0, 1], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coefficient(self, d: int):
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else Fraction(0)

    def _check(self, other: "Poly1"):
        if other.var != self.var and other.degree > 0 and self.degree > 0:
            raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")

    def __add__(self, other):
        if isinstance(other, Poly1):
            self._check(other)
            n = max(len(self.coeffs), len(other.coeffs))
            a, b = self.coeffs, other.coeffs
            var = self.var if self.degree > 0 else other.var
            return Poly1(
                [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)],
                var,
            )
        if isinstance(other, (int, Fraction)) or _is_ring_scalar(other):
            cs = list(self.coeffs) or [Fraction(0)]
            cs[0] = cs[0] + other
            return Poly1(cs, self.var)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Poly1([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Poly1):
            self._check(other)
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return Poly1([], self.var)
            out = [Fraction(0)] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if _is_zero(x):
                    continue
                for j, y in enumerate(b):
                    out[i + j] = out[i + j] + x * y
            var = self.var if self.degree > 0 else other.var
            return Poly1(out, var)
        if isinstance(other, (int, Fraction)) or _is_ring_scalar(other):
            return Poly1([c * other for c in self.coeffs], self.var)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) or _is_ring_scalar(other):
            return Poly1([other * c for c in self.coeffs], self.var)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Poly1([c / other for c in self.coeffs], self.var)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out = Poly1([1], self.var)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly1):
            if self.degree <= 0 and other.degree <= 0:
                return self.coefficient(0) == other.coefficient(0)
            return self.var == other.var and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) or _is_ring_scalar(other):
            if self.degree > 0:
                return False
            return self.coefficient(0) == other
        return NotImplemented

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "Poly1") -> "Poly1":
        """self(inner(t)); the result lives in inner's variable."""
        acc = Poly1([], inner.var)
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return Poly1(acc.coeffs, inner.var)

    def shift(self, z) -> "Poly1":
        """p(x - z)."""
        return self.compose(Poly1([-as_fraction(z), 1], self.var))

    def derivative(self) -> "Poly1":
        return Poly1([c * i for i, c in enumerate(self.coeffs)][1:], self.var)

    def divmod(self, other: "Poly1") -> tuple["Poly1", "Poly1"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.lead()
        if len(rem) - 1 < d:
            return Poly1([], self.var), Poly1(rem, self.var)
        quot = [Fraction(0)] * (len(rem) - d)
        for k in range(len(rem) - 1 - d, -1, -1):
            q = rem[k + d] / lead
            quot[k] = q
            if q:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= q * b
        return Poly1(quot, self.var), Poly1(rem[:d], self.var)

    def monic(self) -> "Poly1":
        if self.is_zero():
            return self
        return self / self.lead()

    def to_text(self) -> str:
        from .series import coefficient_text

        terms = []
        for d in range(self.degree, -1, -1):
            c = self.coeffs[d]
            if _is_zero(c):
                continue
            mono = "" if d == 0 else (self.var if d == 1 else f"{self.var}^{d}")
            terms.append(coefficient_text(c, mono))
        return _join_terms(terms)

    def __repr__(self):
        return f"Poly1({self.to_text()!r}, var={self.var!r})"


def _is_ring_scalar(x) -> bool:
    # MultiPoly is imported lazily to keep this module free of series deps.
    from .series import MultiPoly

    return isinstance(x, MultiPoly)


def _join_terms(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def poly_gcd(a: Poly1, b: Poly1) -> Poly1:
    """Monic gcd over Q."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else Poly1([], a.var)


def falling_factorial_poly(z: int, var: str = "x") -> Poly1:
    p = Poly1([1], var)
    for t in range(z):
        p = p * Poly1([-t, 1], var)
    return p


# -- interpolation ------------------------------------------------------------

def interpolate(points: Sequence[tuple], var: str = "x") -> Poly1:
    """Unique polynomial of degree < len(points) through ``points``.

    Abscissae must be exact rationals; ordinates may be any ring element that
    supports subtraction and division by a rational (Newton form).
    """
    xs = [as_fraction(p[0]) for p in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation abscissae must be pairwise distinct")
    dd = [_coerce(p[1]) for p in points]
    n = len(xs)
    coef = [dd[0]] if n else []
    for level in range(1, n):
        dd = [(dd[i + 1] - dd[i]) / (xs[i + level] - xs[i]) for i in range(len(dd) - 1)]
        coef.append(dd[0])
    poly = Poly1([], var)
    for k in range(n - 1, -1, -1):
        poly = poly * Poly1([-xs[k], 1], var) + coef[k]
    return Poly1(poly.coeffs, var)


def interpolate_checked(points: Sequence[tuple], n_fit: int, var: str = "x") -> tuple[Poly1, list]:
    """Interpolate on the first ``n_fit`` points, report the rest that disagree.

    Returns the interpolant and a list of ``(x, expected, got)`` mismatches.
    """
    if n_fit > len(points):
        raise ValueError("not enough points to interpolate")
    poly = interpolate(points[:n_fit], var)
    bad = []
    for x, y in points[n_fit:]:
        got = poly(as_fraction(x))
        if got != y:
            bad.append((x, y, got))
    return poly, bad


@lru_cache(maxsize=None)
def pw_polynomial(w: int, var: str = "x") -> Poly1:
    """Polynomial extension of n -> [n, n-w] (unsigned Stirling, first kind).

    Built by interpolation on n = w..3w and verified on two extra nodes.
    """
    if w < 0:
        raise ValueError("w must be non-negative")
    pts = [(n, Fraction(stirling_first_unsigned(n, n - w))) for n in range(w, 3 * w + 3)]
    poly, bad = interpolate_checked(pts, 2 * w + 1, var)
    if bad:
        raise ConsistencyError(f"P_{w} is not a polynomial of degree {2 * w}: {bad}")
    return poly


# -- rational functions -------------------------------------------------------

def _slices(p: Poly1) -> list[Poly1]:
    """Split a polynomial with MultiPoly coefficients into Fraction polynomials.

    One slice per monomial of the coefficient ring; a Fraction polynomial is
    its own single slice.
    """
    from .series import MultiPoly

    if all(not isinstance(c, MultiPoly) for c in p.coeffs):
        return [p]
    by_mono: dict = {}
    for d, c in enumerate(p.coeffs):
        if isinstance(c, MultiPoly):
            items = c.terms.items()
        else:
            items = [(None, c)] if c else []
        for mono, v in items:
            by_mono.setdefault(mono, {})[d] = v
    out = []
    for mono, degs in by_mono.items():
        top = max(degs)
        out.append(Poly1([degs.get(d, 0) for d in range(top + 1)], p.var))
    return out


def _exact_div(p: Poly1, g: Poly1) -> Poly1:
    if g.degree <= 0:
        return p / g.lead() if g.lead() != 1 else p
    from .series import MultiPoly

    if all(not isinstance(c, MultiPoly) for c in p.coeffs):
        q, rem = p.divmod(g)
        if not rem.is_zero():
            raise ConsistencyError("inexact polynomial division")
        return q
    ring = next(c.ring for c in p.coeffs if isinstance(c, MultiPoly))
    out: list = []
    for c_mono in _monomials(p):
        sl = Poly1([_mono_coeff(c, c_mono) for c in p.coeffs], p.var)
        q, rem = sl.divmod(g)
        if not rem.is_zero():
            raise ConsistencyError("inexact polynomial division")
        for d, v in enumerate(q.coeffs):
            while len(out) <= d:
                out.append(MultiPoly(ring))
            out[d] = out[d] + MultiPoly(ring, {c_mono: v}) if c_mono is not None else out[d] + v
    return Poly1(out, p.var)


def _monomials(p: Poly1):
    from .series import MultiPoly

    seen = []
    for c in p.coeffs:
        keys = c.terms.keys() if isinstance(c, MultiPoly) else ([None] if c else [])
        for k in keys:
            if k not in seen:
                seen.append(k)
    return seen


def _mono_coeff(c, mono):
    from .series import MultiPoly

    if isinstance(c, MultiPoly):
        return c.terms.get(mono, Fraction(0)) if mono is not None else Fraction(0)
    return c if mono is None else Fraction(0)


class RationalFunction:
    """Reduced ratio num/den of polynomials in one variable.

    The denominator has Fraction coefficients and is monic. The numerator may
    carry MultiPoly coefficients (symbolic parameters); reduction then divides
    out the gcd common to every coefficient slice.
    """

    __slots__ = ("num", "den")
    __hash__ = None

    def __init__(self, num, den=None, var: str | None = None):
        if not isinstance(num, Poly1):
            num = Poly1([num], var or "x")
        var = var or num.var
        if den is None:
            den = Poly1([1], var)
        elif not isinstance(den, Poly1):
            den = Poly1([den], var)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        num = Poly1(num.coeffs, var)
        den = Poly1(den.coeffs, var)
        if num.is_zero():
            self.num, self.den = num, Poly1([1], var)
            return
        g = den
        for sl in _slices(num):
            g = poly_gcd(g, sl)
            if g.degree == 0:
                break
        if g.degree > 0:
            num = _exact_div(num, g)
            den = _exact_div(den, g)
        lead = den.lead()
        if lead != 1:
            num = num / lead if all(isinstance(c, Fraction) for c in num.coeffs) else num * (1 / lead)
            den = den / lead
        self.num, self.den = num, den

    @property
    def var(self) -> str:
        return self.num.var

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly1):
            return RationalFunction(other, var=self.var)
        return RationalFunction(Poly1([other], self.var))

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        from .series import MultiPoly

        if any(isinstance(c, MultiPoly) for c in o.num.coeffs):
            raise TypeError("cannot divide by a rational function with symbolic coefficients")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, RationalFunction) else other
        return self.num * o.den == o.num * self.den

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def degrees(self) -> tuple[int, int]:
        return self.num.degree, self.den.degree

    def to_text(self) -> str:
        if self.den.degree == 0:
            return self.num.to_text()
        return f"({self.num.to_text()}) / ({self.den.to_text()})"

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"


def delta_power_sum(k: int, d: int) -> int:
    """sum_l C(k,l) (-1)^(l+k) l^d, the k-th forward difference of i^d at 0."""
    return sum(comb(k, l) * (-1) ** (l + k) * l**d for l in range(k + 1))


__all__ = [
    "ConsistencyError",
    "Poly1",
    "RationalFunction",
    "as_fraction",
    "bernoulli",
    "binomial",
    "delta_power_sum",
    "factorial",
    "falling",
    "falling_factorial_poly",
    "interpolate",
    "interpolate_checked",
    "poly_gcd",
    "pw_polynomial",
    "stirling_first_unsigned",
    "stirling_second",
]
