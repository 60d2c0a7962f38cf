"""Cycle corrections: m_j = exp(sum_s eps_s/(2s) (-xhat)^s) M_j, xhat M_j = M_{j-1}.

The operator exponential is expanded exactly as a polynomial in xhat; powers
beyond j annihilate M_j, so only finitely many terms survive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import as_fraction, falling
from .series import MultiPoly, Ring, TruncatedSeries, embed, series_exp
from .wanless import USequence, a_values, m_big, u_sequence


@dataclass(frozen=True)
class EpsilonRing:
    """Atoms eps_{s_min} .. eps_{s_max}; s_min is 4 for bipartite graphs, 3 otherwise."""

    s_max: int
    s_min: int = 4

    def __post_init__(self):
        if self.s_min not in (3, 4):
            raise ValueError("s_min must be 3 or 4")

    @property
    def atoms(self) -> tuple[str, ...]:
        return tuple(f"eps_{s}" for s in range(self.s_min, self.s_max + 1))

    @property
    def ring(self) -> Ring:
        return Ring(self.atoms)


@dataclass
class CorrectedM:
    j: int
    value: MultiPoly


def xhat_apply(seq, power: int, j: int):
    """xhat^power applied to M_j, i.e. seq[j - power]; zero below index 0."""
    idx = j - power
    if idx < 0:
        return Fraction(0)
    return seq[idx]


@lru_cache(maxsize=None)
def operator_coefficients(eps: EpsilonRing, order: int) -> tuple:
    """e_0..e_order with exp(sum_s eps_s/(2s) (-y)^s) = sum_p e_p y^p."""
    ring = eps.ring
    expo = [MultiPoly(ring) for _ in range(order + 1)]
    for s in range(eps.s_min, min(eps.s_max, order) + 1):
        expo[s] = MultiPoly.atom(ring, f"eps_{s}") * Fraction((-1) ** s, 2 * s)
    return tuple(series_exp(TruncatedSeries(expo, order, "y")).coeffs)


def m_small(r, j: int, eps: EpsilonRing, u: USequence | None = None) -> CorrectedM:
    """Corrected count m_j as a polynomial in n and the eps atoms."""
    r = as_fraction(r)
    u = u or u_sequence(r, max(j, 2))
    ring = Ring(("n",) + eps.atoms + (u.ring.atoms if u.ring else ()))
    e = operator_coefficients(eps, j)
    bigs = [m_big(r, u, t).embed(ring) for t in range(j + 1)]
    total = MultiPoly(ring)
    for p in range(j + 1):
        term = xhat_apply(bigs, p, j)
        if term == 0 or e[p] == 0:
            continue
        total = total + embed(e[p], ring) * term
    return CorrectedM(j, total)


def h_hat_coeffs(r, j: int, eps: EpsilonRing, order: int | None = None, u: USequence | None = None) -> list:
    """hat-a_0 .. hat-a_order: the nu-expansion of j! m_j / (n r)^j.

    A shift by p contributes e_p * j^(p) / r^p * nu^p * (1 + H_{j-p}).
    """
    r = as_fraction(r)
    order = eps.s_max if order is None else order
    u = u or u_sequence(r, max(order + 1, 2))
    e = operator_coefficients(eps, order)
    ring = eps.ring
    out = [MultiPoly(ring) for _ in range(order + 1)]
    for p in range(0, min(order, j) + 1):
        if e[p] == 0:
            continue
        scale = embed(e[p], ring) * Fraction(falling(j, p), 1) / r**p
        a = a_values(u, j - p, order - p)
        for t, at in enumerate(a):
            if at != 0:
                out[p + t] = out[p + t] + scale * at
    return out


def h_hat_series(r, j: int, eps: EpsilonRing, order: int | None = None, u: USequence | None = None) -> TruncatedSeries:
    """1 + hat-H_j as a nu-series."""
    coeffs = h_hat_coeffs(r, j, eps, order, u)
    return TruncatedSeries(coeffs, len(coeffs) - 1, "nu")


__all__ = [
    "CorrectedM",
    "EpsilonRing",
    "h_hat_coeffs",
    "h_hat_series",
    "m_small",
    "operator_coefficients",
    "xhat_apply",
]
