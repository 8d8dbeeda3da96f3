"""Report structure shared by the service endpoints and the CLI.

Rows carry the exact value as a lossless rational string next to the numeric
value; a report renders either as an aligned table or as deterministic JSON
(fixed key order, no locale-dependent formatting), so identical inputs yield
byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Coeff, DiagonalElement


def exact_str(value: Coeff) -> str:
    """Lossless text form of an exact scalar."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def diag_str(d: DiagonalElement) -> str:
    """Lossless text form of a diagonal element, e.g. ``8*V(v0)``."""
    if d.is_zero():
        return "0"
    return " + ".join(f"{exact_str(c)}*V({v})" for v, c in sorted(d.coeffs.items()))


@dataclass
class ReportRow:
    label: str
    exact: str | None
    numeric: float | None
    verified: bool


@dataclass
class Report:
    command: str
    rows: list[ReportRow] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def add(
        self,
        label: str,
        exact: str | None = None,
        numeric: float | None = None,
        verified: bool = True,
    ) -> None:
        self.rows.append(ReportRow(label, exact, numeric, verified))

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)

    @property
    def all_verified(self) -> bool:
        return all(r.verified for r in self.rows)

    def exit_code(self) -> int:
        return 0 if self.all_verified else 1

    def to_payload(self) -> dict:
        return {
            "command": self.command,
            "rows": [
                {
                    "label": r.label,
                    "exact": r.exact,
                    "numeric": r.numeric,
                    "verified": r.verified,
                }
                for r in self.rows
            ],
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_payload(), indent=2)

    def to_table(self) -> str:
        headers = ("label", "exact", "numeric", "verified")
        body = [
            (
                r.label,
                "-" if r.exact is None else r.exact,
                "-" if r.numeric is None else repr(r.numeric),
                "ok" if r.verified else "FAIL",
            )
            for r in self.rows
        ]
        widths = [
            max(len(headers[i]), *(len(row[i]) for row in body)) if body else len(headers[i])
            for i in range(4)
        ]
        lines = [f"# {self.command}"]
        lines.append("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)))
        lines.append("  ".join("-" * w for w in widths))
        for row in body:
            lines.append("  ".join(row[i].ljust(widths[i]) for i in range(4)))
        for w in self.warnings:
            lines.append(f"warning: {w}")
        lines.append("result: " + ("verified" if self.all_verified else "FAILED"))
        return "\n".join(lines)


def payload_exit_code(payload: dict) -> int:
    """Exit code for a report payload (e.g. one fetched from a server)."""
    return 0 if all(r.get("verified") for r in payload.get("rows", [])) else 1


def render_payload(payload: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(payload, indent=2)
    report = Report(command=payload.get("command", ""))
    for r in payload.get("rows", []):
        report.add(r["label"], r["exact"], r["numeric"], r["verified"])
    for w in payload.get("warnings", []):
        report.warn(w)
    return report.to_table()
