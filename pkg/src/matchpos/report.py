"""Check records and machine-readable reports.

Exact values are serialized as strings: Fractions as ``"num/den"``,
polynomials and series in their canonical text form. Never floats.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any

from . import __version__

REPORT_SCHEMA_VERSION = 1
CHECK_CSV_HEADER = ("suite", "name", "params", "expected", "got", "passed")


def render(value: Any) -> Any:
    """JSON-safe rendering that never loses exactness."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    if hasattr(value, "to_text"):
        return value.to_text()
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class Check:
    name: str
    params: dict
    expected: Any
    got: Any
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": render(self.params),
            "expected": render(self.expected),
            "got": render(self.got),
            "pass": bool(self.passed),
        }

    def sort_key(self) -> tuple:
        return (self.name, json.dumps(render(self.params), sort_keys=True))


@dataclass
class Report:
    suite: str
    parameters: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    wall_time: float | None = None
    timestamp: str | None = None
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    def finish(self) -> "Report":
        self.wall_time = time.perf_counter() - self._t0
        self.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return self

    def to_dict(self, *, timestamp: bool = True) -> dict:
        checks = sorted(self.checks, key=Check.sort_key)
        out = {
            "schema_version": REPORT_SCHEMA_VERSION,
            "tool_version": __version__,
            "suite": self.suite,
            "parameters": render(self.parameters),
            "seeds": sorted(set(self.seeds)),
            "summary": {
                "checks": len(checks),
                "passed": sum(c.passed for c in checks),
                "failed": sum(not c.passed for c in checks),
                "pass": self.passed,
            },
            "notes": list(self.notes),
            "checks": [c.to_dict() for c in checks],
        }
        if timestamp:
            out["timestamp"] = self.timestamp
            out["wall_time_seconds"] = None if self.wall_time is None else round(self.wall_time, 3)
        return out

    def to_json(self, *, timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(timestamp=timestamp), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CHECK_CSV_HEADER)
        for c in sorted(self.checks, key=Check.sort_key):
            d = c.to_dict()
            w.writerow(
                [
                    self.suite,
                    d["name"],
                    json.dumps(d["params"], sort_keys=True),
                    json.dumps(d["expected"]),
                    json.dumps(d["got"]),
                    "true" if c.passed else "false",
                ]
            )
        return buf.getvalue()


def merge(suite: str, reports: list[Report], parameters: dict | None = None) -> Report:
    out = Report(suite, parameters or {})
    out._t0 = min((r._t0 for r in reports), default=out._t0)
    for r in reports:
        out.checks.extend(r.checks)
        out.seeds.extend(r.seeds)
        out.notes.extend(r.notes)
    return out
