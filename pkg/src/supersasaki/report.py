"""Run reports: one document per command invocation, rendered either as
plain text or as a single JSON object.

Every report carries the convention ledger (which side odd derivatives
act from, the two-form sign dictionary, the monomial order of canonical
output), so a reader can interpret printed expressions without consulting
the source.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .geometry import OMEGA_DICTIONARY_NOTE
from .grassmann import ODD_DERIVATIVE_NOTE
from .symexpr import MONOMIAL_ORDER_NOTE

CONVENTION_LEDGER: tuple[str, ...] = (
    ODD_DERIVATIVE_NOTE,
    OMEGA_DICTIONARY_NOTE,
    MONOMIAL_ORDER_NOTE,
)


@dataclass(frozen=True)
class ResultRow:
    name: str
    status: str  # "pass" | "fail" | "info"
    residual: str = ""


@dataclass
class RunReport:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    values: dict[str, object] = field(default_factory=dict)
    rows: list[ResultRow] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    elapsed: float | None = None

    def add(self, name: str, ok: bool, residual: str = "") -> None:
        self.rows.append(ResultRow(name, "pass" if ok else "fail", residual))

    def info(self, name: str, residual: str = "") -> None:
        self.rows.append(ResultRow(name, "info", residual))

    @property
    def all_pass(self) -> bool:
        return all(r.status != "fail" for r in self.rows)


def render_text(report: RunReport, with_timing: bool = False) -> str:
    lines: list[str] = [f"== {report.command} =="]
    for key in report.inputs:
        lines.append(f"input {key}: {report.inputs[key]}")
    for key, value in report.values.items():
        if isinstance(value, list):
            lines.append(f"{key}:")
            for item in value:
                lines.append(f"  {item}")
        else:
            lines.append(f"{key}: {value}")
    for row in report.rows:
        if row.status == "info":
            lines.append(f"[info] {row.name}" + (f": {row.residual}" if row.residual else ""))
        else:
            tail = "" if row.status == "pass" or not row.residual else f" | residual: {row.residual}"
            lines.append(f"[{row.status.upper()}] {row.name}{tail}")
    for note in report.notes:
        lines.append(f"note: {note}")
    lines.append("conventions:")
    for conv in CONVENTION_LEDGER:
        lines.append(f"  - {conv}")
    checks = [r for r in report.rows if r.status != "info"]
    if checks:
        passed = sum(1 for r in checks if r.status == "pass")
        lines.append(f"summary: {passed}/{len(checks)} checks pass")
    if with_timing and report.elapsed is not None:
        lines.append(f"elapsed: {report.elapsed:.3f}s")
    return "\n".join(lines)


def render_structured(report: RunReport, with_timing: bool = False) -> str:
    doc: dict[str, object] = {
        "command": report.command,
        "inputs": dict(report.inputs),
        "values": {
            k: v if isinstance(v, (list, str, int, float, bool)) else str(v)
            for k, v in report.values.items()
        },
        "results": [
            {"name": r.name, "status": r.status, "residual": r.residual}
            for r in report.rows
        ],
        "notes": list(report.notes),
        "conventions": list(CONVENTION_LEDGER),
    }
    if with_timing and report.elapsed is not None:
        doc["elapsed_seconds"] = round(report.elapsed, 3)
    return json.dumps(doc, indent=2, sort_keys=True)
