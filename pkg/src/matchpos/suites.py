"""Verification suites: each turns a parameter envelope into a Report."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .positivity import (
    alpha0_checks,
    cancellation_check,
    ln_f_coefficient,
    ln_f_second_closed_form,
    ln_f_top_coefficient,
    second_identity_check,
)
from .perturbation import (
    Perturbation,
    perturbation_invariance,
    solution_checks,
    solve_xx,
    verify_degree_property,
    verify_perturbed_log_expansion,
)
from .report import Check, Report, merge
from .stirling import (
    alternating_stirling2,
    permutation_checks,
    phi_checks,
    phi_polynomiality,
    random_distinct_rationals,
    repeated_limit_values,
)
from .wanless import arbitrary_u_sequence, verify_a_polynomiality, verify_pernici_identities

SUITES = ("pernici", "second-identity", "alpha", "stirling", "permutation", "awesome")


@dataclass
class SuiteConfig:
    """Parameter envelope. Defaults keep ``verify all`` at desk scale."""

    r: list = field(default_factory=lambda: [2, 3, 4])
    hmax: int = 5
    kmax: int = 5
    imax: int = 4
    jmax: int | None = None
    gmax: int = 5
    smax: int = 6
    long: bool = False
    seed: int = 0

    @classmethod
    def long_envelope(cls, seed: int = 0) -> "SuiteConfig":
        return cls(r=[2, 3, 4, 5], hmax=8, kmax=7, imax=10, jmax=None, gmax=6, smax=10, long=True, seed=seed)

    def parameters(self) -> dict:
        d = asdict(self)
        d["r"] = [Fraction(x) for x in self.r]
        return d

    def j_window(self, h_max: int):
        if self.jmax is None:
            return None
        lo = h_max + 1
        if self.jmax - lo + 1 < h_max + 4:
            raise ValueError(f"--jmax {self.jmax} leaves fewer than {h_max + 4} j-nodes above h={h_max}")
        return range(lo, self.jmax + 1)


def pernici_suite(cfg: SuiteConfig) -> Report:
    rep = Report("pernici", cfg.parameters())
    for r in cfg.r:
        rep.extend(verify_pernici_identities(r, cfg.hmax, cfg.j_window(cfg.hmax)))
        rep.extend(verify_a_polynomiality(r, cfg.hmax))
    h_arb = min(cfg.hmax, 4)
    for k in range(5):
        seed = cfg.seed * 100 + k
        rep.seeds.append(seed)
        u = arbitrary_u_sequence(h_arb + 1, seed=seed)
        rep.extend(verify_pernici_identities(u, h_arb, cfg.j_window(h_arb)))
    return rep


def second_identity_suite(cfg: SuiteConfig) -> Report:
    rep = Report("second-identity", cfg.parameters())
    for r in cfg.r:
        for k in range(2, cfg.kmax + 1):
            for i in range(cfg.imax + 1):
                rep.checks.append(second_identity_check(r, k, i))
        got = ln_f_coefficient(r, 2)
        want = ln_f_second_closed_form(r)
        rep.checks.append(Check("ln_f_second_coefficient", {"r": Fraction(r)}, want, got, got == want and got(1) == 0))
        for h in range(1, cfg.kmax):
            lead = ln_f_coefficient(r, h).coefficient(h + 1)
            want = ln_f_top_coefficient(r, h)
            rep.checks.append(Check("ln_f_top_coefficient", {"r": Fraction(r), "h": h}, want, lead, lead == want))
    return rep


def alpha_suite(cfg: SuiteConfig) -> Report:
    rep = Report("alpha", cfg.parameters())
    for r in cfg.r:
        for k in range(0, cfg.kmax + 1):
            for i in range(cfg.imax + 1):
                rep.extend(alpha0_checks(i, k, r))
        for k in range(2, cfg.kmax + 1):
            for i in range(3):
                for d in range(1, k):
                    rep.extend(cancellation_check(i, k, r, d))
    return rep


def stirling_suite(cfg: SuiteConfig) -> Report:
    rep = Report("stirling", cfg.parameters())
    checks, seeds = phi_checks(cfg.gmax, samples=5, seed=cfg.seed)
    rep.extend(checks)
    rep.seeds.extend(seeds)
    rng = random.Random(f"poly:{cfg.seed}")
    for g, w in [(3, 1), (4, 1), (4, 2)]:
        c = random_distinct_rationals(g - 1, rng)
        nodes = [Fraction(101 + t) for t in range(2 * w + 3)]
        ok, bad = phi_polynomiality(g, w, c, nodes)
        rep.checks.append(Check("phi_sum_polynomial_in_c", {"g": g, "w": w}, [], bad, ok))
    for g, w, base in [(3, 1, [2, 5, 9]), (4, 2, [1, 2, 3, 9])]:
        vals = repeated_limit_values(g, w, base)
        rep.checks.append(Check("phi_sum_repeated_limit", {"g": g, "w": w, "base": base}, [0] * len(vals), vals, all(v == 0 for v in vals)))
    for m in range(1, 13):
        want = 1 if m == 1 else 0
        got = alternating_stirling2(m)
        rep.checks.append(Check("alternating_stirling2", {"m": m}, want, got, got == want))
    return rep


def permutation_suite(cfg: SuiteConfig) -> Report:
    rep = Report("permutation", cfg.parameters())
    rep.extend(permutation_checks(7))
    return rep


def awesome_perturbations() -> list[Perturbation]:
    return [Perturbation(((4, 1),)), Perturbation(((4, 1), (5, 2)))]


def awesome_suite(cfg: SuiteConfig) -> Report:
    rep = Report("awesome", cfg.parameters())
    rep.seeds.append(cfg.seed)
    for pert in awesome_perturbations():
        sol = solve_xx(pert, cfg.smax, r=1, seed=cfg.seed)
        rep.extend(verify_degree_property(sol))
        rep.extend(solution_checks(sol))
    weak = solve_xx(Perturbation(((2, 1), (3, Fraction(1, 2))), z_min=2), min(cfg.smax, 6), r=1, seed=cfg.seed)
    rep.extend(verify_degree_property(weak))
    h = min(cfg.hmax, 4)
    perts = [Perturbation(((4, Fraction(1, 3)),)), Perturbation(((4, 1), (5, 2)))]
    for r in [x for x in cfg.r if x in (2, 3)] or cfg.r[:1]:
        for p in perts:
            rep.extend(verify_perturbed_log_expansion(r, p, h))
        rep.checks.append(perturbation_invariance(r, perts, h))
    return rep


RUNNERS = {
    "pernici": pernici_suite,
    "second-identity": second_identity_suite,
    "alpha": alpha_suite,
    "stirling": stirling_suite,
    "permutation": permutation_suite,
    "awesome": awesome_suite,
}


def _run_named(args) -> Report:
    name, cfg = args
    return RUNNERS[name](cfg)


def run_suite(name: str, cfg: SuiteConfig, threads: int = 1) -> Report:
    if name != "all":
        if name not in RUNNERS:
            raise KeyError(name)
        return RUNNERS[name](cfg).finish()
    t0 = time.perf_counter()
    jobs = [(n, cfg) for n in SUITES]
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as ex:
            reports = list(ex.map(_run_named, jobs))
    else:
        reports = [_run_named(j) for j in jobs]
    for sub in reports:
        for c in sub.checks:
            c.params = {"suite": sub.suite, **c.params}
    out = merge("all", reports, cfg.parameters())
    out._t0 = t0
    return out.finish()


__all__ = ["RUNNERS", "SUITES", "SuiteConfig", "awesome_perturbations", "run_suite"]
