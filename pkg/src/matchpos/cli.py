"""Command-line entry point.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage or
input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__
from .algebra import ConsistencyError
from .graphs import (
    SAMPLER_VERSION,
    STATS_CSV_HEADER,
    GraphFormatError,
    brute_force_matching_vector,
    d_table,
    enumeration_positivity,
    load_graph,
    matching_vector,
    positivity_from_table,
    sample_regular_bipartite,
    sample_rng,
    violation_search,
    weak_positivity_stats,
)
from .report import Check, Report
from .suites import SUITES, SuiteConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _add_output(p: argparse.ArgumentParser, default_format: str = "json") -> None:
    p.add_argument("--out", help="write the report to this path instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=default_format)
    p.add_argument("--no-timestamp", action="store_true", help="omit timestamp and wall time (byte-stable output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matchpos", description="Exact checks for matching expansions of regular bipartite graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run an identity suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--r", type=_int_list, help="comma-separated r values")
    v.add_argument("--hmax", type=int)
    v.add_argument("--kmax", type=int)
    v.add_argument("--imax", type=int)
    v.add_argument("--jmax", type=int)
    v.add_argument("--gmax", type=int)
    v.add_argument("--smax", type=int)
    v.add_argument("--long", action="store_true", help="use the extended parameter envelope")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_output(v)

    g = sub.add_parser("graph", help="concrete graph tools")
    gsub = g.add_subparsers(dest="graph_command", required=True)

    gc = gsub.add_parser("check", help="graph positivity of one graph file")
    gc.add_argument("file")
    _add_output(gc)

    ge = gsub.add_parser("enumerate", help="exhaustive positivity over labeled r-regular graphs")
    ge.add_argument("--n", type=int, required=True)
    ge.add_argument("--r", type=int, required=True)
    ge.add_argument("--canonical", action="store_true", help="fix the first row (C(n,r)-fold reduction)")
    _add_output(ge)

    gs = gsub.add_parser("sample", help="draw graphs from the configuration model")
    gs.add_argument("--n", type=int, required=True)
    gs.add_argument("--r", type=int, required=True)
    gs.add_argument("--seed", type=int, default=0)
    gs.add_argument("--samples", type=int, default=1)
    gs.add_argument("--search", action="store_true", help="check positivity of every sample and list violations")
    _add_output(gs)

    gt = gsub.add_parser("stats", help="weak-positivity statistics")
    gt.add_argument("--n", type=_int_list, required=True)
    gt.add_argument("--r", type=int, required=True)
    gt.add_argument("--i", type=int, required=True)
    gt.add_argument("--k", type=int, required=True)
    gt.add_argument("--samples", type=int, default=500)
    gt.add_argument("--seed", type=int, default=0)
    gt.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    _add_output(gt, default_format="csv")
    return parser


def _config(args) -> SuiteConfig:
    cfg = SuiteConfig.long_envelope(args.seed) if args.long else SuiteConfig(seed=args.seed)
    for name in ("r", "hmax", "kmax", "imax", "jmax", "gmax", "smax"):
        val = getattr(args, name)
        if val is not None:
            setattr(cfg, name, val)
    if any(r < 2 for r in cfg.r):
        raise UsageError("r must be at least 2")
    if cfg.hmax < 1 or cfg.kmax < 2 or cfg.imax < 0 or cfg.gmax < 2 or cfg.smax < 2:
        raise UsageError("need hmax >= 1, kmax >= 2, imax >= 0, gmax >= 2, smax >= 2")
    cfg.j_window(cfg.hmax)
    return cfg


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(rep: Report, args) -> None:
    text = rep.to_csv() if args.format == "csv" else rep.to_json(timestamp=not args.no_timestamp)
    _emit(text, args.out)


def _summary(rep: Report) -> None:
    stream = sys.stderr
    print(f"{rep.suite}: {len(rep.checks) - len(rep.failures)}/{len(rep.checks)} checks passed", file=stream)
    for c in rep.failures[:20]:
        print(f"  FAIL {c.name} {json.dumps(c.to_dict()['params'], sort_keys=True)}", file=stream)


def cmd_verify(args) -> int:
    cfg = _config(args)
    rep = run_suite(args.suite, cfg, threads=max(1, args.threads))
    _summary(rep)
    _emit_report(rep, args)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_graph_check(args) -> int:
    g = load_graph(args.file)
    table = d_table(g)
    verdict = positivity_from_table(table)
    rep = Report("graph-check", {"file": os.path.basename(args.file), "n": g.n, "r": g.r})
    rep.checks.append(Check("graph_positivity", {"n": g.n, "r": g.r}, True, verdict.satisfies, verdict.satisfies))
    if len(g.edges) <= 20:
        bf = brute_force_matching_vector(g)
        rep.checks.append(Check("matching_vector_brute_force", {"n": g.n, "r": g.r}, bf, table.m, bf == table.m))
    rep.notes.append(f"m = {table.m}")
    rep.notes.append(verdict.to_text())
    rep.finish()
    print(verdict.to_text())
    print(f"m = {table.m}", file=sys.stderr)
    if args.out:
        _emit_report(rep, args)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_graph_enumerate(args) -> int:
    if not 2 <= args.r <= args.n:
        raise UsageError("need 2 <= r <= n")
    s = enumeration_positivity(args.n, args.r, canonical_first_row=args.canonical)
    rep = Report("graph-enumerate", {"n": args.n, "r": args.r, "canonical_first_row": args.canonical})
    rep.checks.append(
        Check("enumerated_positivity", {"n": args.n, "r": args.r}, 0, s.violations, s.violations == 0 or 2 * args.n >= 14)
    )
    rep.notes.append(f"graphs enumerated: {s.graphs}; labeled total: {s.labeled_total}; distinct matching vectors: {s.distinct_vectors}")
    rep.finish()
    status = "all satisfying" if s.violations == 0 else f"{s.violations} violating"
    print(f"{s.labeled_total} graphs, {status}")
    if args.out:
        _emit_report(rep, args)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_graph_sample(args) -> int:
    if not 2 <= args.r <= args.n or args.samples < 1:
        raise UsageError("need 2 <= r <= n and samples >= 1")
    rep = Report("graph-sample", {"n": args.n, "r": args.r, "samples": args.samples, "sampler": SAMPLER_VERSION})
    rep.seeds.append(args.seed)
    if args.search:
        total, found = violation_search(args.n, args.r, args.samples, args.seed)
        rep.notes.append(f"searched {total} samples, {len(found)} violating")
        for idx, cell, text in found:
            rep.notes.append(f"sample {idx} violates at (k, i) = {cell}:\n{text}")
        print(f"{len(found)} of {total} sampled graphs violate graph positivity")
    else:
        for s in range(args.samples):
            g = sample_regular_bipartite(args.n, args.r, sample_rng(args.seed, s))
            m = matching_vector(g)
            rep.notes.append(g.to_text())
            if args.out is None:
                print(f"# sample {s}, m = {m}")
                print(g.to_text(), end="")
    rep.finish()
    if args.out:
        _emit_report(rep, args)
    return EXIT_OK


def cmd_graph_stats(args) -> int:
    if args.samples < 1:
        raise UsageError("samples must be at least 1")
    rows = []
    for n in args.n:
        if not 2 <= args.r <= n or args.i < 0 or args.k < 0 or args.i + args.k > n:
            raise UsageError(f"need 2 <= r <= n and 0 <= i, k with i + k <= n (n={n})")
        rows.append(weak_positivity_stats(n, args.r, args.i, args.k, args.samples, args.seed, threads=max(1, args.threads)).row())
    if args.format == "json":
        text = json.dumps({"tool_version": __version__, "sampler_version": SAMPLER_VERSION, "rows": rows}, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=STATS_CSV_HEADER, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow(row)
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "verify":
            return cmd_verify(args)
        handler = {
            "check": cmd_graph_check,
            "enumerate": cmd_graph_enumerate,
            "sample": cmd_graph_sample,
            "stats": cmd_graph_stats,
        }[args.graph_command]
        return handler(args)
    except GraphFormatError as exc:
        print(f"error: {getattr(args, 'file', '')}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
