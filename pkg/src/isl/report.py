"""Residual records, per-identity aggregation and report emission."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable

import numpy as np

PASS = "PASS"
FAIL = "FAIL"
GATED = "GATED"
INFO = "INFO"


def _identity_key(identity: str):
    # "1.6.iv" < "1.6.v" < "2.6.i" < "10.1"; numeric chunks compare as numbers
    parts = []
    for chunk in identity.replace("-", ".").split("."):
        parts.append((0, int(chunk), "") if chunk.isdigit() else (1, 0, chunk))
    return parts


@dataclass
class Record:
    """One residual for one identity at one point.

    ``status`` is PASS/FAIL for asserted checks, GATED when the hypothesis of
    the identity does not hold at the point, INFO for reported quantities
    that carry no pass/fail meaning.
    """

    identity: str
    residual: float
    tol: float
    status: str
    point: int | None = None
    gate: str = ""
    note: str = ""

    @property
    def failed(self) -> bool:
        return self.status == FAIL


@dataclass
class ResidualReport:
    records: list[Record] = field(default_factory=list)

    # -- building ---------------------------------------------------------
    def check(self, identity: str, residual, tol: float, point: int | None = None, note: str = "") -> Record:
        """Record an asserted residual; non-finite residuals fail."""
        value = float(residual)
        ok = math.isfinite(value) and value <= tol
        rec = Record(identity, value if math.isfinite(value) else float("inf"), float(tol), PASS if ok else FAIL, point, "", note)
        self.records.append(rec)
        return rec

    def gated(self, identity: str, gate: str, point: int | None = None, residual: float = 0.0,
              tol: float = 0.0, note: str = "") -> Record:
        value = float(residual)
        rec = Record(identity, value if math.isfinite(value) else 0.0, float(tol), GATED, point, gate, note)
        self.records.append(rec)
        return rec

    def info(self, identity: str, value, point: int | None = None, note: str = "") -> Record:
        value = float(value)
        rec = Record(identity, value if math.isfinite(value) else 0.0, 0.0, INFO, point, "", note)
        self.records.append(rec)
        return rec

    def extend(self, other: "ResidualReport | Iterable[Record]") -> "ResidualReport":
        recs = other.records if isinstance(other, ResidualReport) else list(other)
        self.records.extend(recs)
        return self

    def with_point(self, point: int | None) -> "ResidualReport":
        """Stamp every record that has no point index with ``point``."""
        for rec in self.records:
            if rec.point is None:
                rec.point = point
        return self

    # -- queries ----------------------------------------------------------
    def identities(self) -> list[str]:
        return sorted({r.identity for r in self.records}, key=_identity_key)

    def select(self, identity: str) -> list[Record]:
        return [r for r in self.records if r.identity == identity]

    def max_residual(self, identity: str) -> float:
        recs = [r for r in self.select(identity) if r.status in (PASS, FAIL)]
        if not recs:
            recs = self.select(identity)
        if not recs:
            raise KeyError(identity)
        return max(r.residual for r in recs)

    def status(self, identity: str) -> str:
        return _aggregate_status(self.select(identity))

    @property
    def passed(self) -> bool:
        return not any(r.failed for r in self.records)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def failures(self) -> list[Record]:
        return [r for r in self.records if r.failed]

    def sorted_records(self) -> list[Record]:
        return sorted(self.records, key=lambda r: (_identity_key(r.identity), -1 if r.point is None else r.point))

    def summary(self) -> list[dict]:
        """One aggregated row per identity, sorted by identity id."""
        rows = []
        for ident in self.identities():
            recs = self.select(ident)
            status = _aggregate_status(recs)
            asserted = [r for r in recs if r.status in (PASS, FAIL)]
            pool = asserted or recs
            worst = max(pool, key=lambda r: (r.residual, -(r.point or 0)))
            gates = sorted({r.gate for r in recs if r.gate})
            rows.append({
                "identity": ident,
                "status": status,
                "max_residual": worst.residual,
                "tol": max(r.tol for r in pool),
                "worst_point": worst.point,
                "points": len(recs),
                "gated": sum(r.status == GATED for r in recs),
                "gate": "; ".join(gates),
            })
        return rows


def _aggregate_status(recs: list[Record]) -> str:
    if not recs:
        return INFO
    statuses = {r.status for r in recs}
    if FAIL in statuses:
        return FAIL
    if PASS in statuses:
        return PASS
    if GATED in statuses:
        return GATED
    return INFO


# -- emission -------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.3e}"


def to_text(report: ResidualReport) -> str:
    rows = report.summary()
    header = ("identity", "status", "max residual", "tol", "worst pt", "points", "gate")
    table = [header]
    for row in rows:
        table.append((
            row["identity"], row["status"], _fmt(row["max_residual"]), _fmt(row["tol"]),
            "-" if row["worst_point"] is None else str(row["worst_point"]),
            str(row["points"]), row["gate"],
        ))
    widths = [max(len(r[i]) for r in table) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in table]
    lines.insert(1, "  ".join("-" * w for w in widths))
    n_fail = sum(r["status"] == FAIL for r in rows)
    n_gated = sum(r["status"] == GATED for r in rows)
    lines.append("")
    lines.append(f"{len(rows)} identities, {n_fail} FAIL, {n_gated} GATED -> {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def to_json(report: ResidualReport, scenario: dict | None = None) -> str:
    payload = {
        "scenario": _jsonable(scenario or {}),
        "records": [_jsonable(asdict(r)) for r in report.sorted_records()],
        "summary": {
            "identities": _jsonable(report.summary()),
            "passed": report.passed,
            "exit_code": report.exit_code,
            "n_records": len(report.records),
            "n_fail": len(report.failures()),
        },
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def to_csv(report: ResidualReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["identity", "point", "residual", "tol", "status", "gate", "note"])
    for r in report.sorted_records():
        writer.writerow([r.identity, "" if r.point is None else r.point, repr(float(r.residual)),
                         repr(float(r.tol)), r.status, r.gate, r.note])
    return buf.getvalue()


def records_from_json(text: str) -> list[Record]:
    data = json.loads(text)
    return [Record(**{k: (v if v is not None or k == "point" else float("nan")) for k, v in rec.items()})
            for rec in data["records"]]


def emit_report(report: ResidualReport, fmt: str = "text", path: str | None = None,
                scenario: dict | None = None) -> str:
    """Render ``report`` as text, json or csv; write it to ``path`` if given."""
    if fmt == "text":
        out = to_text(report)
    elif fmt == "json":
        out = to_json(report, scenario)
    elif fmt == "csv":
        out = to_csv(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
    return out
