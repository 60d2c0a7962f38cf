"""Regular bipartite graphs: matching counts, d(i), finite differences, sampling.

Graphs are stored as n x n biadjacency matrices (rows = one side). Matching
counts come from a row-by-row dynamic program over the set of used columns.
All sign decisions on Delta^k d(i) are exact: with

    A_j = (m_j / mbar_j) * ((v - 1) / r)^j,

Delta^k d(i) >= 0 exactly when prod_{l in L+} A_{i+l}^C(k,l) >= prod_{l in L-} A_{i+l}^C(k,l),
a comparison of rationals. Floating point only appears in display values.
"""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Iterator

from .report import render

SAMPLER_VERSION = "configuration-model-rejection/2"


class GraphFormatError(ValueError):
    """Malformed graph input; carries a 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class BipartiteGraph:
    """r-regular bipartite graph on 2n vertices as a tuple of row column-sets."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(frozenset(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n == 0:
            raise GraphFormatError("empty graph")
        for r in rows:
            if any(not 0 <= c < n for c in r):
                raise GraphFormatError(f"column index out of range 0..{n - 1}")
        deg = {len(r) for r in rows}
        cols = [0] * n
        for r in rows:
            for c in r:
                cols[c] += 1
        if len(deg) != 1 or set(cols) != deg:
            raise GraphFormatError(f"graph is not regular (row sums {sorted(deg)}, column sums {sorted(set(cols))})")
        if next(iter(deg)) < 2:
            raise GraphFormatError("regularity r >= 2 is required")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def v(self) -> int:
        return 2 * self.n

    @property
    def r(self) -> int:
        return len(self.rows[0])

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, c) for i, row in enumerate(self.rows) for c in sorted(row)]

    @classmethod
    def from_matrix(cls, matrix) -> "BipartiteGraph":
        return cls(tuple(frozenset(c for c, x in enumerate(row) if x) for row in matrix))

    def matrix(self) -> list[list[int]]:
        return [[int(c in row) for c in range(self.n)] for row in self.rows]

    def to_text(self) -> str:
        return "\n".join("".join(str(x) for x in row) for row in self.matrix()) + "\n"

    def permuted(self, row_perm, col_perm) -> "BipartiteGraph":
        """Relabel: new row i is old row row_perm[i]; old column c becomes col_perm[c]."""
        return BipartiteGraph(tuple(frozenset(col_perm[c] for c in self.rows[row_perm[i]]) for i in range(self.n)))


def parse_text(text: str) -> BipartiteGraph:
    """n lines of n characters in {0,1}; blank lines and '#' comments are skipped."""
    rows: list[list[int]] = []
    width = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line != line.lstrip():
            raise GraphFormatError("leading whitespace in matrix row", ln, 1)
        for col, ch in enumerate(line, start=1):
            if ch not in "01":
                raise GraphFormatError(f"unexpected character {ch!r} (expected 0 or 1)", ln, col)
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise GraphFormatError(f"row has {len(line)} entries, expected {width}", ln, min(len(line), width) + 1)
        rows.append([int(ch) for ch in line])
    if not rows:
        raise GraphFormatError("no matrix rows found")
    if len(rows) != width:
        raise GraphFormatError(f"matrix is {len(rows)}x{width}, expected square")
    return BipartiteGraph.from_matrix(rows)


def parse_json(text: str) -> BipartiteGraph:
    """{"n": n, "adjacency": [[columns of row 0], ...]}."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "adjacency" not in data:
        raise GraphFormatError('expected an object with an "adjacency" list')
    adj = data["adjacency"]
    n = data.get("n", len(adj))
    if not isinstance(adj, list) or len(adj) != n or not all(isinstance(r, list) for r in adj):
        raise GraphFormatError(f'"adjacency" must be a list of {n} lists')
    for i, row in enumerate(adj):
        if any(not isinstance(c, int) for c in row) or len(set(row)) != len(row):
            raise GraphFormatError(f"row {i}: columns must be distinct integers")
    return BipartiteGraph(tuple(frozenset(r) for r in adj))


def load_graph(path: str) -> BipartiteGraph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json") or text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_text(text)


# -- matching counts ----------------------------------------------------------

def _row_masks(g: BipartiteGraph) -> list[list[int]]:
    return [[1 << c for c in sorted(row)] for row in g.rows]


def _dp_step(states: dict, bits: list[int], cap: int) -> dict:
    """Extend the used-column DP by one row.

    ``states`` maps a column mask to the number of partial matchings using
    exactly those columns; the matching size is the popcount of the mask.
    """
    out = dict(states)
    for mask, count in states.items():
        if mask.bit_count() >= cap:
            continue
        for b in bits:
            if not mask & b:
                nm = mask | b
                out[nm] = out.get(nm, 0) + count
    return out


def _collect(states: dict, cap: int) -> list[int]:
    total = [0] * (cap + 1)
    for mask, count in states.items():
        total[mask.bit_count()] += count
    return total


def matching_vector(g: BipartiteGraph, max_size: int | None = None) -> list[int]:
    """m_0 .. m_cap (cap = n unless max_size is given)."""
    cap = g.n if max_size is None else min(max_size, g.n)
    states = {0: 1}
    for bits in _row_masks(g):
        states = _dp_step(states, bits, cap)
    return _collect(states, cap)


def brute_force_matching_vector(g: BipartiteGraph) -> list[int]:
    """Count matchings by walking edge subsets in index order, keeping only disjoint ones."""
    edges = g.edges
    if len(edges) > 20:
        raise ValueError("brute force is limited to graphs with at most 20 edges")
    counts = [0] * (g.n + 1)

    def rec(start: int, rows: int, cols: int, size: int):
        counts[size] += 1
        for e in range(start, len(edges)):
            a, b = edges[e]
            if rows >> a & 1 or cols >> b & 1:
                continue
            rec(e + 1, rows | 1 << a, cols | 1 << b, size + 1)

    rec(0, 0, 0, 0)
    return counts


def complete_bipartite_matchings(n: int, i: int) -> int:
    return comb(n, i) ** 2 * factorial(i) if 0 <= i <= n else 0


def complete_graph_matchings(v: int, i: int) -> int:
    """mbar_i = v! / ((v-2i)! i! 2^i); zero when 2i > v."""
    if i < 0 or 2 * i > v:
        return 0
    return factorial(v) // (factorial(v - 2 * i) * factorial(i) * 2**i)


# -- d(i) and finite differences ----------------------------------------------

def ratio_a(m: list[int], v: int, r: int, j: int) -> Fraction:
    """A_j = (m_j / mbar_j) ((v-1)/r)^j, so d(j) = ln A_j."""
    return Fraction(m[j] * (v - 1) ** j, complete_graph_matchings(v, j) * r**j)


def exact_delta_sign(a: list, i: int, k: int) -> int:
    """Sign of sum_l (-1)^(k-l) C(k,l) ln A_{i+l}, decided by comparing products."""
    plus = Fraction(1)
    minus = Fraction(1)
    for l in range(k + 1):
        p = a[i + l] ** comb(k, l)
        if (k - l) % 2 == 0:
            plus *= p
        else:
            minus *= p
    return (plus > minus) - (plus < minus)


def alpha0_value(a: list, i: int, k: int) -> Fraction:
    """e^x - e^y with e^x, e^y the L+ / L- products (empty product = 1)."""
    ex = Fraction(1)
    ey = Fraction(1)
    for l in range(k + 1):
        p = a[i + l] ** comb(k, l)
        if (k - l) % 2 == 0:
            ex *= p
        else:
            ey *= p
    return ex - ey


@dataclass
class DTable:
    n: int
    r: int
    m: list
    a: list
    top: int
    signs: dict = field(default_factory=dict)

    @property
    def v(self) -> int:
        return 2 * self.n

    def d(self, i: int) -> float:
        """Display value of d(i); verdicts never use it."""
        return math.log(self.a[i].numerator) - math.log(self.a[i].denominator)

    def delta(self, k: int, i: int) -> float:
        return sum((-1) ** (k - l) * comb(k, l) * self.d(i + l) for l in range(k + 1))

    def sign(self, k: int, i: int) -> int:
        key = (k, i)
        if key not in self.signs:
            if i + k > self.top:
                raise IndexError(f"Delta^{k} d({i}) is outside the meaningful range (top index {self.top})")
            self.signs[key] = exact_delta_sign(self.a, i, k)
        return self.signs[key]

    def cells(self):
        for k in range(self.top + 1):
            for i in range(self.top - k + 1):
                yield k, i


def d_table_from_vector(m: list, n: int, r: int) -> DTable:
    """Truncate at the last index with m_i > 0."""
    top = max(i for i, x in enumerate(m) if x > 0)
    if any(x == 0 for x in m[: top + 1]):
        raise ValueError("matching vector has an interior zero")
    v = 2 * n
    a = [ratio_a(m, v, r, j) for j in range(top + 1)]
    return DTable(n, r, list(m), a, top)


def d_table(g: BipartiteGraph) -> DTable:
    return d_table_from_vector(matching_vector(g), g.n, g.r)


@dataclass
class PositivityVerdict:
    satisfies: bool
    first_violation: tuple | None
    cells_checked: int

    def to_text(self) -> str:
        if self.satisfies:
            return "satisfies graph positivity"
        k, i = self.first_violation
        return f"violates graph positivity: Delta^{k} d({i}) < 0"


def positivity_from_table(t: DTable) -> PositivityVerdict:
    count = 0
    for k, i in t.cells():
        count += 1
        if t.sign(k, i) < 0:
            return PositivityVerdict(False, (k, i), count)
    return PositivityVerdict(True, None, count)


def positivity_check(g: BipartiteGraph) -> PositivityVerdict:
    return positivity_from_table(d_table(g))


# -- enumeration --------------------------------------------------------------

def _enumerate_rows(n: int, r: int, first_row=None) -> Iterator[tuple]:
    """Yield (rows, dp_states) with the used-column DP carried along the search."""
    choices = list(combinations(range(n), r))
    cap = n

    def rec(depth, col_left, rows, states):
        if depth == n:
            yield tuple(rows), states
            return
        remaining = n - depth - 1
        opts = [first_row] if depth == 0 and first_row is not None else choices
        for row in opts:
            if any(col_left[c] == 0 for c in row):
                continue
            new_left = list(col_left)
            for c in row:
                new_left[c] -= 1
            if any(x > remaining for x in new_left):
                continue
            nxt = _dp_step(states, [1 << c for c in row], cap)
            rows.append(frozenset(row))
            yield from rec(depth + 1, new_left, rows, nxt)
            rows.pop()

    yield from rec(0, [r] * n, [], {0: 1})


def enumerate_regular_bipartite(n: int, r: int, *, canonical_first_row: bool = False) -> Iterator[BipartiteGraph]:
    """All labeled r-regular n x n biadjacency matrices, in lexicographic row order.

    With ``canonical_first_row`` the first row is fixed to {0..r-1}. Column
    relabelings act transitively on first rows, so the labeled total is C(n, r)
    times the restricted count, and isomorphism-invariant verdicts are unchanged.
    """
    if not 1 <= r <= n:
        raise ValueError("need 1 <= r <= n")
    first = tuple(range(r)) if canonical_first_row else None
    for rows, _ in _enumerate_rows(n, r, first):
        yield BipartiteGraph(rows)


def enumerate_with_matchings(n: int, r: int, *, canonical_first_row: bool = False) -> Iterator[tuple]:
    """(rows, m-vector) pairs; the DP is shared along the backtracking path."""
    first = tuple(range(r)) if canonical_first_row else None
    for rows, states in _enumerate_rows(n, r, first):
        yield rows, _collect(states, n)


@dataclass
class EnumerationSummary:
    n: int
    r: int
    graphs: int
    labeled_total: int
    distinct_vectors: int
    violations: int
    first_violation: tuple | None
    canonical_first_row: bool


def enumeration_positivity(n: int, r: int, *, canonical_first_row: bool = False) -> EnumerationSummary:
    """Positivity over every enumerated graph; verdicts are memoized by m-vector."""
    verdicts: dict = {}
    graphs = violations = 0
    first = None
    for rows, m in enumerate_with_matchings(n, r, canonical_first_row=canonical_first_row):
        graphs += 1
        key = tuple(m)
        if key not in verdicts:
            verdicts[key] = positivity_from_table(d_table_from_vector(m, n, r))
        verdict = verdicts[key]
        if not verdict.satisfies:
            violations += 1
            if first is None:
                first = (rows, verdict.first_violation)
    labeled = graphs * comb(n, r) if canonical_first_row else graphs
    return EnumerationSummary(n, r, graphs, labeled, len(verdicts), violations, first, canonical_first_row)


# -- sampling -----------------------------------------------------------------

def sample_regular_bipartite(n: int, r: int, rng: random.Random | int, *, max_tries: int = 100_000) -> BipartiteGraph:
    """Configuration model: pair row stubs with a random permutation of column stubs;
    restart on any repeated edge. Conditioned on simplicity this is uniform over
    labeled simple r-regular bipartite graphs. For r > n/2 the (n-r)-regular
    complement is sampled instead; complementing is a bijection, so uniformity
    is kept and rejection rates near the complete graph stay reasonable.
    """
    if not 2 <= r <= n:
        raise ValueError("need 2 <= r <= n")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    if 2 * r > n:
        full = frozenset(range(n))
        return BipartiteGraph(tuple(full - row for row in _configuration_rows(n, n - r, rng, max_tries)))
    return BipartiteGraph(_configuration_rows(n, r, rng, max_tries))


def _configuration_rows(n: int, r: int, rng: random.Random, max_tries: int) -> tuple:
    if r == 0:
        return tuple(frozenset() for _ in range(n))
    left = [i for i in range(n) for _ in range(r)]
    right = [c for c in range(n) for _ in range(r)]
    for _ in range(max_tries):
        rng.shuffle(right)
        rows = [set() for _ in range(n)]
        ok = True
        for a, b in zip(left, right):
            if b in rows[a]:
                ok = False
                break
            rows[a].add(b)
        if ok:
            return tuple(frozenset(x) for x in rows)
    raise RuntimeError(f"configuration model rejected {max_tries} pairings for n={n}, r={r}")


def sample_rng(seed: int, index: int) -> random.Random:
    """Independent stream per sample, so results do not depend on worker count."""
    return random.Random(f"{seed}:{index}")


@dataclass
class SampleOutcome:
    index: int
    m: list
    nonneg: bool
    alpha0: Fraction


def _sample_one(args) -> SampleOutcome:
    n, r, i, k, seed, index = args
    g = sample_regular_bipartite(n, r, sample_rng(seed, index))
    m = matching_vector(g, max_size=i + k)
    a = [ratio_a(m, 2 * n, r, j) for j in range(i + k + 1)]
    return SampleOutcome(index, m, exact_delta_sign(a, i, k) >= 0, alpha0_value(a, i, k))


@dataclass
class WeakPositivityStats:
    n: int
    r: int
    i: int
    k: int
    samples: int
    seed: int
    nonneg_count: int
    alpha_hat: Fraction
    beta_hat: Fraction
    bound: Fraction | None
    sampler_version: str = SAMPLER_VERSION

    @property
    def fraction_nonneg(self) -> Fraction:
        return Fraction(self.nonneg_count, self.samples)

    def row(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "i": self.i,
            "k": self.k,
            "samples": self.samples,
            "seed": self.seed,
            "nonneg_count": self.nonneg_count,
            "fraction_nonneg": render(self.fraction_nonneg),
            "alpha_hat": render(self.alpha_hat),
            "beta_hat": render(self.beta_hat),
            "bound": render(self.bound) if self.bound is not None else "n/a",
            "alpha_hat_decimal": f"{float(self.alpha_hat):.12g}",
            "beta_hat_decimal": f"{float(self.beta_hat):.12g}",
            "bound_decimal": f"{float(self.bound):.12g}" if self.bound is not None else "n/a",
            "sampler_version": self.sampler_version,
        }


STATS_CSV_HEADER = (
    "n", "r", "i", "k", "samples", "seed", "nonneg_count", "fraction_nonneg",
    "alpha_hat", "beta_hat", "bound", "alpha_hat_decimal", "beta_hat_decimal",
    "bound_decimal", "sampler_version",
)


def weak_positivity_stats(n: int, r: int, i: int, k: int, samples: int, seed: int, *, threads: int = 1) -> WeakPositivityStats:
    """Empirical Prob(Delta^k d(i) >= 0), alpha_hat, beta_hat (population variance)
    and the second-moment bound beta_hat / alpha_hat^2 when alpha_hat > 0.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if i + k > n:
        raise ValueError("need i + k <= n")
    jobs = [(n, r, i, k, seed, s) for s in range(samples)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            outcomes = list(ex.map(_sample_one, jobs, chunksize=max(1, samples // (4 * threads))))
    else:
        outcomes = [_sample_one(j) for j in jobs]
    vals = [o.alpha0 for o in outcomes]
    mean = sum(vals, Fraction(0)) / samples
    var = sum(((x - mean) ** 2 for x in vals), Fraction(0)) / samples
    bound = var / mean**2 if mean > 0 else None
    return WeakPositivityStats(n, r, i, k, samples, seed, sum(o.nonneg for o in outcomes), mean, var, bound)


def violation_search(n: int, r: int, samples: int, seed: int) -> tuple[int, list]:
    """Sample graphs and report those violating positivity (found/not-found search)."""
    found = []
    for s in range(samples):
        g = sample_regular_bipartite(n, r, sample_rng(seed, s))
        verdict = positivity_check(g)
        if not verdict.satisfies:
            found.append((s, verdict.first_violation, g.to_text()))
    return samples, found


__all__ = [
    "BipartiteGraph",
    "DTable",
    "EnumerationSummary",
    "GraphFormatError",
    "PositivityVerdict",
    "SAMPLER_VERSION",
    "STATS_CSV_HEADER",
    "WeakPositivityStats",
    "alpha0_value",
    "brute_force_matching_vector",
    "complete_bipartite_matchings",
    "complete_graph_matchings",
    "d_table",
    "d_table_from_vector",
    "enumerate_regular_bipartite",
    "enumerate_with_matchings",
    "enumeration_positivity",
    "exact_delta_sign",
    "load_graph",
    "matching_vector",
    "parse_json",
    "parse_text",
    "positivity_check",
    "positivity_from_table",
    "ratio_a",
    "sample_regular_bipartite",
    "sample_rng",
    "violation_search",
    "weak_positivity_stats",
]
