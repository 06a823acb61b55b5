"""Check records and reports, with deterministic JSON and a short text rendering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

__all__ = ["CheckRecord", "VerifyReport", "merge_reports", "to_json_value"]

VERDICTS = ("pass", "fail", "error")


def to_json_value(x):
    """Floats to JSON-safe values: non-finite ones become strings."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, dict):
        return {str(k): to_json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_json_value(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return to_json_value(x.item())
    return str(x)


@dataclass(frozen=True)
class CheckRecord:
    id: str
    inputs: dict
    lhs: float | None
    rhs: float | None
    slack: float | None
    tolerance: float | None
    verdict: str
    asserted: bool = True
    note: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}")

    def to_dict(self) -> dict:
        return to_json_value(
            {
                "id": self.id,
                "inputs": self.inputs,
                "lhs": self.lhs,
                "rhs": self.rhs,
                "slack": self.slack,
                "tolerance": self.tolerance,
                "verdict": self.verdict,
                "asserted": self.asserted,
                "note": self.note,
            }
        )


@dataclass(frozen=True)
class VerifyReport:
    suite: str
    checks: tuple[CheckRecord, ...] = field(default_factory=tuple)

    @property
    def summary(self) -> dict:
        """Verdict counts over asserted checks, plus the number of report-only records."""
        out = {v: 0 for v in VERDICTS}
        for c in self.checks:
            if c.asserted:
                out[c.verdict] += 1
        out["report_only"] = sum(1 for c in self.checks if not c.asserted)
        return out

    @property
    def passed(self) -> bool:
        return all(c.verdict == "pass" for c in self.checks if c.asserted)

    def records(self, id_prefix: str = "") -> list[CheckRecord]:
        return [c for c in self.checks if c.id.startswith(id_prefix)]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "checks": [c.to_dict() for c in self.checks], "summary": self.summary}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_text(self) -> str:
        lines = [f"suite {self.suite}"]
        for c in self.checks:
            tag = c.verdict.upper() if c.asserted else f"({c.verdict})"
            lhs = "-" if c.lhs is None else f"{c.lhs:.6g}"
            rhs = "-" if c.rhs is None else f"{c.rhs:.6g}"
            extra = f"  {c.note}" if c.note else ""
            lines.append(f"  {tag:7s} {c.id}: lhs={lhs} rhs={rhs}{extra}")
        s = self.summary
        lines.append(
            f"summary: {s['pass']} pass, {s['fail']} fail, {s['error']} error, {s['report_only']} report-only"
        )
        return "\n".join(lines) + "\n"


def merge_reports(name: str, reports) -> VerifyReport:
    checks = []
    for r in reports:
        checks.extend(r.checks)
    return VerifyReport(name, tuple(checks))
