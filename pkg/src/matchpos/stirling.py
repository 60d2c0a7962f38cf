"""Weighted configurations, the permutation identity and Stirling reductions.

P_w(x) is the polynomial extension of n -> [n, n-w] (unsigned Stirling
numbers of the first kind). A weighted configuration is an ordered sequence
of disjoint non-empty blocks covering {c_1..c_g}, each block carrying a
weight w_i >= 0 with sum w; it evaluates to (-1)^m / m * prod P_{w_i}(t_i),
t_i the block sum. The partitions in the permutation identity are unordered
and carry (r-1)! instead, so the two conventions differ by a factor r!.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .algebra import as_fraction, interpolate_checked, pw_polynomial, stirling_first_unsigned, stirling_second
from .report import Check


# -- set partitions -----------------------------------------------------------

def set_partitions(items):
    """Unordered set partitions of ``items`` as lists of lists (restricted growth order)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def ordered_set_partitions(items):
    """Ordered sequences of blocks, built by choosing the first block directly."""
    items = tuple(items)
    if not items:
        yield []
        return
    n = len(items)
    for mask in range(1, 1 << n):
        block = [items[i] for i in range(n) if mask >> i & 1]
        rest = [items[i] for i in range(n) if not mask >> i & 1]
        for tail in ordered_set_partitions(rest):
            yield [block] + tail


def compositions(w: int, m: int):
    """Weak compositions of w into m parts."""
    if m == 0:
        if w == 0:
            yield ()
        return
    for cut in itertools.combinations(range(w + m - 1), m - 1):
        prev = -1
        parts = []
        for c in cut + (w + m - 1,):
            parts.append(c - prev - 1)
            prev = c
        yield tuple(parts)


# -- configurations -----------------------------------------------------------

@dataclass(frozen=True)
class WeightedConfiguration:
    """Blocks hold indices into the c-vector; weights align with blocks."""

    blocks: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.blocks) != len(self.weights):
            raise ValueError("one weight per block")
        if any(not b for b in self.blocks):
            raise ValueError("blocks must be non-empty")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")
        flat = [i for b in self.blocks for i in b]
        if len(flat) != len(set(flat)):
            raise ValueError("blocks must be disjoint")

    @property
    def m(self) -> int:
        return len(self.blocks)

    def sums(self, c) -> tuple:
        return tuple(sum((as_fraction(c[i]) for i in b), Fraction(0)) for b in self.blocks)

    def evaluate(self, c) -> Fraction:
        out = Fraction((-1) ** self.m, self.m)
        for w, t in zip(self.weights, self.sums(c)):
            out *= pw_polynomial(w)(t)
        return out


def _check_c(c, allow_repeated: bool) -> list:
    c = [as_fraction(x) for x in c]
    if not allow_repeated and len(set(c)) != len(c):
        raise ValueError("the c_i must be pairwise distinct")
    return c


def _weight_poly(t: Fraction, w: int) -> list:
    return [pw_polynomial(k)(t) for k in range(w + 1)]


def _block_product(sums, w: int) -> Fraction:
    """sum over weak compositions of w of prod P_{w_i}(t_i), by truncated convolution."""
    acc = [Fraction(1)] + [Fraction(0)] * w
    for t in sums:
        p = _weight_poly(t, w)
        acc = [sum(acc[a] * p[d - a] for a in range(d + 1)) for d in range(w + 1)]
    return acc[w]


def phi_sum(g: int, w: int, c, *, method: str = "unordered", allow_repeated: bool = False) -> Fraction:
    """Sum of evaluations over all weighted configurations of {c_1..c_g}.

    ``unordered`` walks set partitions once and multiplies by m!;
    ``ordered`` enumerates block sequences and weight compositions explicitly.
    """
    c = _check_c(c, allow_repeated)
    if g < 2 or len(c) != g:
        raise ValueError("need g >= 2 values")
    if w < 0:
        raise ValueError("w must be non-negative")
    total = Fraction(0)
    if method == "unordered":
        for part in set_partitions(range(g)):
            m = len(part)
            sums = [sum((c[i] for i in b), Fraction(0)) for b in part]
            total += Fraction((-1) ** m * factorial(m), m) * _block_product(sums, w)
    elif method == "ordered":
        for seq in ordered_set_partitions(range(g)):
            blocks = tuple(tuple(b) for b in seq)
            for ws in compositions(w, len(seq)):
                total += WeightedConfiguration(blocks, ws).evaluate(c)
    else:
        raise ValueError(f"unknown method {method!r}")
    return total


def random_distinct_rationals(g: int, rng: random.Random, bound: int = 100) -> list:
    out: list = []
    while len(out) < g:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x not in out:
            out.append(x)
    return out


def phi_checks(g_max: int, samples: int = 5, seed: int = 0) -> tuple[list[Check], list[int]]:
    """phi_sum = 0 for 2 <= g <= g_max, 0 <= w <= g-2, on seeded random c."""
    checks, seeds = [], []
    for g in range(2, g_max + 1):
        for w in range(0, g - 1):
            for k in range(samples):
                s = seed * 1_000_003 + g * 1000 + w * 10 + k
                seeds.append(s)
                c = random_distinct_rationals(g, random.Random(s))
                v = phi_sum(g, w, c)
                checks.append(Check("phi_sum_vanishes", {"g": g, "w": w, "seed": s}, Fraction(0), v, v == 0))
    return checks, seeds


def phi_polynomiality(g: int, w: int, c_fixed, nodes) -> tuple[bool, list]:
    """phi_sum in the last c (others fixed) matches a degree-2w interpolant."""
    nodes = list(nodes)
    if len(nodes) < 2 * w + 3:
        raise ValueError("need at least 2w+3 nodes")
    pts = [(x, phi_sum(g, w, list(c_fixed) + [x])) for x in nodes]
    _, bad = interpolate_checked(pts, 2 * w + 1, var="c")
    return not bad, bad


def repeated_limit_values(g: int, w: int, base, steps: int = 4) -> list:
    """phi_sum along c_g -> c_1 (c_g = c_1 + 1/k) and at the repeated point itself."""
    base = [as_fraction(x) for x in base]
    vals = [phi_sum(g, w, base[:-1] + [base[0] + Fraction(1, k)], allow_repeated=True) for k in range(1, steps + 1)]
    vals.append(phi_sum(g, w, base[:-1] + [base[0]], allow_repeated=True))
    return vals


# -- permutations -------------------------------------------------------------

def cycle_count(perm) -> int:
    seen = [False] * len(perm)
    cycles = 0
    for i in range(len(perm)):
        if not seen[i]:
            cycles += 1
            while not seen[i]:
                seen[i] = True
                i = perm[i]
    return cycles


def permutation_weight(perm) -> int:
    """Ground-set size minus number of cycles."""
    return len(perm) - cycle_count(perm)


def group_weight_count(sizes, w: int) -> int:
    """Number of elements of weight w in Sym(a_1) x ... x Sym(a_m)."""
    acc = [1] + [0] * w
    for a in sizes:
        p = [stirling_first_unsigned(a, a - k) if k <= a else 0 for k in range(w + 1)]
        acc = [sum(acc[x] * p[d - x] for x in range(d + 1)) for d in range(w + 1)]
    return acc[w]


def permutation_identity_lhs(sizes, w: int) -> int:
    """sum_r (-1)^(r-1) (r-1)! sum over unordered partitions of [g] of P_w(|C_I1|..|C_Ir|)."""
    sizes = list(sizes)
    g = len(sizes)
    if g < 1 or any(a < 1 for a in sizes):
        raise ValueError("sizes must be positive")
    if not 0 <= w <= sum(sizes) - 1:
        raise ValueError("need 0 <= w <= sum(sizes) - 1")
    total = 0
    for part in set_partitions(range(g)):
        r = len(part)
        total += (-1) ** (r - 1) * factorial(r - 1) * group_weight_count([sum(sizes[i] for i in b) for b in part], w)
    return total


def block_labels(sizes) -> list[int]:
    return [b for b, a in enumerate(sizes) for _ in range(a)]


def finest_admitting_partition(perm, labels) -> list[frozenset]:
    """Finest partition J of the block indices whose unions sigma preserves."""
    parent = list(range(max(labels) + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in enumerate(perm):
        a, b = find(labels[x]), find(labels[y])
        if a != b:
            parent[a] = b
    classes: dict = {}
    for i in range(len(parent)):
        classes.setdefault(find(i), set()).add(i)
    return sorted((frozenset(v) for v in classes.values()), key=min)


def admits(part, perm, labels) -> bool:
    where = {}
    for k, blk in enumerate(part):
        for i in blk:
            where[i] = k
    return all(where[labels[x]] == where[labels[y]] for x, y in enumerate(perm))


def admitting_partition_count(perm, sizes, r: int) -> int:
    """Number of partitions of [g] into r parts admitting sigma, by direct enumeration."""
    labels = block_labels(sizes)
    return sum(1 for p in set_partitions(range(len(sizes))) if len(p) == r and admits(p, perm, labels))


def alternating_stirling2(m: int) -> int:
    if m < 1:
        raise ValueError("m must be at least 1")
    return sum((-1) ** (r - 1) * factorial(r - 1) * stirling_second(m, r) for r in range(1, m + 1))


def permutation_identity_by_sigma(sizes, w: int) -> tuple[int, list[Check]]:
    """Same total, summed per sigma through admitting-partition counts.

    Each Phi_r(sigma) is counted directly (memoized on J_sigma) and compared
    with S(m, r); for w <= g-2 every sigma must have m > 1.
    """
    sizes = list(sizes)
    g = len(sizes)
    labels = block_labels(sizes)
    n = len(labels)
    memo: dict = {}
    problems: list = []
    total = 0
    for perm in itertools.permutations(range(n)):
        if permutation_weight(perm) != w:
            continue
        jsig = tuple(finest_admitting_partition(perm, labels))
        m = len(jsig)
        if w <= g - 2 and m <= 1:
            problems.append(("m_not_above_1", perm))
        if jsig not in memo:
            direct = [admitting_partition_count(perm, sizes, r) for r in range(1, g + 1)]
            want = [stirling_second(m, r) for r in range(1, g + 1)]
            if direct != want:
                problems.append(("phi_r_mismatch", perm))
            memo[jsig] = sum((-1) ** (r - 1) * factorial(r - 1) * direct[r - 1] for r in range(1, g + 1))
        total += memo[jsig]
    params = {"sizes": sizes, "w": w}
    checks = [
        Check("admitting_count_is_stirling2", params, [], [p[0] for p in problems if p[0] == "phi_r_mismatch"],
              not any(p[0] == "phi_r_mismatch" for p in problems)),
        Check("finest_partition_nontrivial", params, [], [p[0] for p in problems if p[0] == "m_not_above_1"],
              not any(p[0] == "m_not_above_1" for p in problems)),
    ]
    return total, checks


def size_vectors(total_max: int, g_min: int = 1):
    """Non-increasing positive size vectors with sum <= total_max."""
    def rec(rem, cap):
        yield []
        for a in range(min(rem, cap), 0, -1):
            for tail in rec(rem - a, a):
                yield [a] + tail

    for v in rec(total_max, total_max):
        if len(v) >= g_min:
            yield v


def permutation_checks(total_max: int) -> list[Check]:
    checks = []
    for sizes in size_vectors(total_max, g_min=2):
        g = len(sizes)
        for w in range(0, g - 1):
            lhs = permutation_identity_lhs(sizes, w)
            params = {"sizes": sizes, "w": w}
            checks.append(Check("permutation_identity", params, 0, lhs, lhs == 0))
            via, extra = permutation_identity_by_sigma(sizes, w)
            checks.append(Check("permutation_identity_by_sigma", params, lhs, via, via == lhs))
            checks.extend(extra)
    return checks


__all__ = [
    "WeightedConfiguration",
    "admits",
    "admitting_partition_count",
    "alternating_stirling2",
    "block_labels",
    "compositions",
    "cycle_count",
    "finest_admitting_partition",
    "group_weight_count",
    "ordered_set_partitions",
    "permutation_checks",
    "permutation_identity_by_sigma",
    "permutation_identity_lhs",
    "permutation_weight",
    "phi_checks",
    "phi_polynomiality",
    "phi_sum",
    "random_distinct_rationals",
    "repeated_limit_values",
    "set_partitions",
    "size_vectors",
]
