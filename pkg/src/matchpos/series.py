"""Sparse multivariate polynomials and truncated power series.

A :class:`Ring` is an ordered set of atom names (``"j"``, ``"nu"``, ``"u_3"``,
``"eps_4"``...). :class:`MultiPoly` stores exponent vectors aligned with its
ring. :class:`TruncatedSeries` is a series in one distinguished variable with
an explicit truncation order; its coefficients are Fractions, MultiPolys or
Poly1s (anything ring-like).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .algebra import Poly1, _join_terms, as_fraction

_ATOM_RE = re.compile(r"^([A-Za-z]+)(?:_?(\d+))?$")


def atom_key(name: str) -> tuple[str, int]:
    m = _ATOM_RE.match(name)
    if not m:
        raise ValueError(f"bad atom name {name!r}")
    return m.group(1), int(m.group(2)) if m.group(2) is not None else -1


@dataclass(frozen=True)
class Ring:
    atoms: tuple[str, ...] = ()

    def __post_init__(self):
        atoms = tuple(sorted(set(self.atoms), key=atom_key))
        if len(atoms) != len(self.atoms):
            raise ValueError(f"duplicate atoms in ring: {self.atoms}")
        object.__setattr__(self, "atoms", atoms)

    def index(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise KeyError(f"atom {name!r} not in ring {self.atoms}") from None

    def union(self, other: "Ring") -> "Ring":
        return Ring(tuple(set(self.atoms) | set(other.atoms)))

    def __len__(self):
        return len(self.atoms)


def _frac_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def coefficient_text(c, mono: str) -> str:
    """Render ``c*mono`` with an explicit leading sign when negative."""
    if isinstance(c, MultiPoly) and c.is_constant():
        c = c.constant_value()
    if isinstance(c, (MultiPoly, Poly1)):
        inner = c.to_text()
        if not mono:
            return inner if " " not in inner else f"({inner})"
        return f"({inner})*{mono}"
    c = as_fraction(c)
    if not mono:
        return _frac_text(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{_frac_text(c)}*{mono}"


class MultiPoly:
    """Sparse polynomial over ``ring`` with rational coefficients.

    ``terms`` maps exponent tuples to nonzero Fractions, so structural
    equality is polynomial equality.
    """

    __slots__ = ("ring", "terms")
    __hash__ = None

    def __init__(self, ring: Ring, terms: Mapping[tuple, Fraction] | None = None):
        self.ring = ring
        if terms:
            self.terms = {e: Fraction(c) for e, c in terms.items() if c != 0}
        else:
            self.terms = {}

    @classmethod
    def constant(cls, ring: Ring, c) -> "MultiPoly":
        return cls(ring, {(0,) * len(ring): as_fraction(c)})

    @classmethod
    def atom(cls, ring: Ring, name: str, power: int = 1) -> "MultiPoly":
        e = [0] * len(ring)
        e[ring.index(name)] = power
        return cls(ring, {tuple(e): Fraction(1)})

    @classmethod
    def from_dict(cls, ring: Ring, spec: Mapping[tuple | Mapping, object]) -> "MultiPoly":
        terms = {}
        for mono, c in spec.items():
            if isinstance(mono, Mapping):
                e = [0] * len(ring)
                for a, p in mono.items():
                    e[ring.index(a)] = p
                mono = tuple(e)
            terms[mono] = terms.get(mono, 0) + as_fraction(c)
        return cls(ring, terms)

    # -- arithmetic --------------------------------------------------------
    def _lift(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring.atoms} vs {other.ring.atoms}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(self.ring, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        p = MultiPoly(self.ring)
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = MultiPoly(self.ring)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return MultiPoly(self.ring)
            p = MultiPoly(self.ring)
            p.terms = {e: c * other for e, c in self.terms.items()}
            return p
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, MultiPoly) and other.is_constant():
            return self * (1 / other.constant_value())
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(self.ring, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.terms == {(0,) * len(self.ring): Fraction(other)}
        return NotImplemented

    # -- inspection --------------------------------------------------------
    def is_constant(self) -> bool:
        zero = (0,) * len(self.ring)
        return all(e == zero for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * len(self.ring), Fraction(0))

    def degree(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def free_of(self, names: Iterable[str]) -> bool:
        idx = [self.ring.index(a) for a in names]
        return all(e[i] == 0 for e in self.terms for i in idx)

    def atoms_present(self) -> set[str]:
        return {a for i, a in enumerate(self.ring.atoms) if any(e[i] for e in self.terms)}

    def coefficient(self, spec: Mapping[str, int]) -> "MultiPoly":
        idx = {self.ring.index(a): p for a, p in spec.items()}
        out = {}
        for e, c in self.terms.items():
            if all(e[i] == p for i, p in idx.items()):
                e2 = tuple(0 if i in idx else x for i, x in enumerate(e))
                out[e2] = c
        return MultiPoly(self.ring, out)

    def subs(self, values: Mapping[str, object]) -> "MultiPoly":
        """Substitute rationals for some atoms."""
        idx = {self.ring.index(a): as_fraction(v) for a, v in values.items()}
        out: dict = {}
        for e, c in self.terms.items():
            for i, v in idx.items():
                c = c * v ** e[i]
            e2 = tuple(0 if i in idx else x for i, x in enumerate(e))
            out[e2] = out.get(e2, 0) + c
        return MultiPoly(self.ring, out)

    def embed(self, ring: Ring) -> "MultiPoly":
        if ring == self.ring:
            return self
        pos = [ring.index(a) for a in self.ring.atoms]
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(ring)
            for p, x in zip(pos, e):
                e2[p] = x
            out[tuple(e2)] = c
        return MultiPoly(ring, out)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        ordered = sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))
        parts = []
        for e, c in ordered:
            mono = "*".join(
                a if p == 1 else f"{a}^{p}" for a, p in zip(self.ring.atoms, e) if p
            )
            parts.append(coefficient_text(c, mono))
        return _join_terms(parts)

    def __repr__(self):
        return f"MultiPoly({self.to_text()!r})"


def embed(x, ring: Ring):
    """Lift a Fraction or MultiPoly into ``ring``."""
    if isinstance(x, MultiPoly):
        return x.embed(ring)
    return MultiPoly.constant(ring, x)


def _zero():
    return Fraction(0)


def _scalar_of(c) -> Fraction:
    if isinstance(c, MultiPoly):
        if not c.is_constant():
            raise ValueError("expected a constant coefficient")
        return c.constant_value()
    if isinstance(c, Poly1):
        if c.degree > 0:
            raise ValueError("expected a constant coefficient")
        return as_fraction(c.coefficient(0))
    return as_fraction(c)


class TruncatedSeries:
    """Power series in ``var`` known exactly through ``var**order``."""

    __slots__ = ("var", "order", "coeffs")
    __hash__ = None

    def __init__(self, coeffs: Sequence, order: int, var: str = "x"):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        cs = [Fraction(c) if isinstance(c, int) else c for c in list(coeffs)[: order + 1]]
        cs.extend(_zero() for _ in range(order + 1 - len(cs)))
        self.coeffs = cs
        self.order = order
        self.var = var

    @classmethod
    def one(cls, order: int, var: str = "x") -> "TruncatedSeries":
        return cls([1], order, var)

    @classmethod
    def variable(cls, order: int, var: str = "x") -> "TruncatedSeries":
        return cls([0, 1], order, var)

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k <= self.order else _zero()

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot raise truncation order")
        return TruncatedSeries(self.coeffs, order, self.var)

    def _check(self, other: "TruncatedSeries"):
        if other.var != self.var:
            raise ValueError(f"series variable mismatch: {self.var!r} vs {other.var!r}")

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            n = min(self.order, other.order)
            return TruncatedSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], n, self.var)
        cs = list(self.coeffs)
        cs[0] = cs[0] + other
        return TruncatedSeries(cs, self.order, self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return TruncatedSeries([c * other for c in self.coeffs], self.order, self.var)

    def __rmul__(self, other):
        return TruncatedSeries([other * c for c in self.coeffs], self.order, self.var)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, series_inverse(other))
        other = as_fraction(other)
        return TruncatedSeries([c / other for c in self.coeffs], self.order, self.var)

    def __pow__(self, p):
        return series_pow(self, p)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return (
                self.var == other.var
                and self.order == other.order
                and all(a == b for a, b in zip(self.coeffs, other.coeffs))
            )
        return NotImplemented

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return None

    def map(self, fn) -> "TruncatedSeries":
        return TruncatedSeries([fn(c) for c in self.coeffs], self.order, self.var)

    def shift_up(self, s: int) -> "TruncatedSeries":
        """Multiply by var**s, keeping the truncation order."""
        return TruncatedSeries([_zero()] * s + self.coeffs, self.order, self.var)

    def exp(self):
        return series_exp(self)

    def log(self):
        return series_log(self)

    def to_text(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            parts.append(coefficient_text(c, mono))
        parts.append(f"O({self.var}^{self.order + 1})")
        return _join_terms(parts)

    def __repr__(self):
        return f"TruncatedSeries({self.to_text()!r})"


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    a._check(b)
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    nz_a = [(i, c) for i, c in enumerate(ac[: n + 1]) if c != 0]
    nz_b = [(i, c) for i, c in enumerate(bc[: n + 1]) if c != 0]
    out = [_zero() for _ in range(n + 1)]
    for i, x in nz_a:
        for j, y in nz_b:
            if i + j > n:
                break
            out[i + j] = out[i + j] + x * y
    return TruncatedSeries(out, n, a.var)


def series_exp(a: TruncatedSeries) -> TruncatedSeries:
    """exp(a) for a series with zero constant term."""
    if a[0] != 0:
        raise ValueError("series_exp needs a zero constant term")
    n = a.order
    e = [Fraction(1)] + [_zero() for _ in range(n)]
    nz = [(i, i * a.coeffs[i]) for i in range(1, n + 1) if a.coeffs[i] != 0]
    for k in range(1, n + 1):
        acc = _zero()
        for i, ia in nz:
            if i > k:
                break
            acc = acc + ia * e[k - i]
        e[k] = acc / k
    return TruncatedSeries(e, n, a.var)


def series_log(a: TruncatedSeries) -> TruncatedSeries:
    """log(a) for a series with constant term 1."""
    if a[0] != 1:
        raise ValueError("series_log needs constant term 1")
    n = a.order
    ac = a.coeffs
    l = [_zero() for _ in range(n + 1)]
    for k in range(1, n + 1):
        acc = _zero()
        for i in range(1, k):
            if l[i] != 0 and ac[k - i] != 0:
                acc = acc + i * l[i] * ac[k - i]
        l[k] = ac[k] - acc / k
    return TruncatedSeries(l, n, a.var)


def series_inverse(a: TruncatedSeries) -> TruncatedSeries:
    """1/a; the constant term must be an invertible rational."""
    a0 = _scalar_of(a[0])
    if a0 == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    inv0 = 1 / a0
    n = a.order
    b = [inv0] + [_zero() for _ in range(n)]
    for k in range(1, n + 1):
        acc = _zero()
        for i in range(1, k + 1):
            if a.coeffs[i] != 0:
                acc = acc + a.coeffs[i] * b[k - i]
        b[k] = -acc * inv0
    return TruncatedSeries(b, n, a.var)


def series_sqrt_one_minus(u: TruncatedSeries) -> TruncatedSeries:
    """(1 - u)^(1/2) for u with zero constant term."""
    if u[0] != 0:
        raise ValueError("series_sqrt_one_minus needs a zero constant term")
    n = u.order
    y = [Fraction(1)] + [_zero() for _ in range(n)]
    for k in range(1, n + 1):
        acc = -u.coeffs[k]
        for i in range(1, k):
            acc = acc - y[i] * y[k - i]
        y[k] = acc / 2
    return TruncatedSeries(y, n, u.var)


def series_pow(a: TruncatedSeries, p) -> TruncatedSeries:
    """a**p. Any rational p when the constant term is 1, else integer p >= 0."""
    if isinstance(p, int) and p >= 0 and a[0] != 1:
        out = TruncatedSeries.one(a.order, a.var)
        base = a
        while p:
            if p & 1:
                out = series_mul(out, base)
            base = series_mul(base, base)
            p >>= 1
        return out
    if a[0] != 1:
        raise ValueError("non-integer powers need constant term 1")
    p = as_fraction(p)
    n = a.order
    ac = a.coeffs
    nz = [(i, ac[i]) for i in range(1, n + 1) if ac[i] != 0]
    b = [Fraction(1)] + [_zero() for _ in range(n)]
    for k in range(1, n + 1):
        acc = _zero()
        for i, ai in nz:
            if i > k:
                break
            acc = acc + ((p + 1) * i - k) * ai * b[k - i]
        b[k] = acc / k
    return TruncatedSeries(b, n, a.var)


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """outer(inner(x)); inner must have zero constant term."""
    if inner[0] != 0:
        raise ValueError("composition needs an inner series with zero constant term")
    n = min(outer.order, inner.order)
    acc = TruncatedSeries([outer.coeffs[n]], n, inner.var)
    for k in range(n - 1, -1, -1):
        acc = series_mul(acc, inner.truncate(n)) + outer.coeffs[k]
    return acc


def extract(p, spec: Mapping[str, int]):
    """Coefficient of the monomial described by ``spec``.

    For a series, the series variable picks the coefficient (exponent 0 when
    absent) and the remaining atoms are extracted from it. Atoms not named in
    ``spec`` stay symbolic.
    """
    spec = dict(spec)
    if isinstance(p, TruncatedSeries):
        k = spec.pop(p.var, 0)
        if k > p.order:
            raise ValueError(f"{p.var}^{k} is beyond the truncation order {p.order}")
        p = p[k]
    if isinstance(p, Poly1):
        d = spec.pop(p.var, 0) if p.var in spec else 0
        p = p.coefficient(d)
    if not spec:
        return p
    if isinstance(p, MultiPoly):
        return p.coefficient(spec)
    unknown = ", ".join(sorted(spec))
    raise KeyError(f"unknown atom(s) {unknown} for a rational coefficient")


__all__ = [
    "MultiPoly",
    "Ring",
    "TruncatedSeries",
    "atom_key",
    "coefficient_text",
    "embed",
    "extract",
    "series_compose",
    "series_exp",
    "series_inverse",
    "series_log",
    "series_mul",
    "series_pow",
    "series_sqrt_one_minus",
]
