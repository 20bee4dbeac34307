"""Compliance checks: field coverage against the expectation matrix and the
Article 15(1) disclosure checklist.

Verdict decision table (pure function of observed x expected):

    expected | present_complete | present_partial | absent
    ---------+------------------+-----------------+----------------
    Y        | meets            | falls_short     | falls_short
    N        | exceeds          | exceeds         | meets
    N*       | exceeds          | exceeds         | not_applicable
    Y^g      | exceeds          | exceeds         | not_applicable
    NA       | exceeds          | exceeds         | not_applicable
    -        | not_applicable for every observation (status unknown,
               excluded from verdict statistics)

N* and Y^g map to not_applicable rather than falls_short because "not in
this DDP" is a different failure mode from "not collected"; the report
note carries the distinction. Output is labeled as potential
non-compliance indicators, never as legal judgment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Optional, Sequence

from .errors import ConfigurationError
from .model import (
    CATEGORIES,
    ActivityRecord,
    DdpSnapshot,
    Platform,
    category,
)
from .reliability import DurationResult, duration

MATRIX_SCHEMA_VERSION = "1"
REPORT_SCHEMA_VERSION = "1"

STATUSES = ("Y", "N", "N*", "Y^g", "NA", "-")
VERDICTS = ("meets", "exceeds", "falls_short", "not_applicable")
DEFAULT_FIELD_THRESHOLD = 0.95

STATUS_NOTES = {
    "N*": "details are found in the app but not in the GDPR dump",
    "Y^g": "available only in aggregate bundle (google DDP), not in this one",
    "NA": "feature not applicable on this platform",
    "-": "expectation unknown; excluded from verdict statistics",
}

# Article 15(1) clause -> disclosure kind in DdpSnapshot.disclosure_texts
CLAUSES = {
    "purpose_15_1_a": "purpose",
    "recipients_15_1_c": "recipients",
    "retention_15_1_d": "retention",
    "source_15_1_g": "source",
    "automated_15_1_h": "automated_decisions",
}


@dataclass(frozen=True)
class ExpectationMatrix:
    """Machine-readable shared-information table: per category x platform
    status plus the minimum expected fields per category."""

    cells: Mapping[tuple[str, str], str]
    min_fields: Mapping[str, tuple[str, ...]]
    captured_at: str = ""

    def __post_init__(self) -> None:
        for (cat_id, platform), status in self.cells.items():
            category(cat_id)
            Platform.parse(platform)
            if status not in STATUSES:
                raise ConfigurationError(
                    f"unknown status {status!r} for ({cat_id}, {platform})"
                )

    def status(self, cat_id: str, platform: Platform) -> str:
        try:
            return self.cells[(cat_id, platform.value)]
        except KeyError:
            raise ConfigurationError(
                f"matrix has no cell for ({cat_id}, {platform.value})"
            ) from None

    def covers(self, platform: Platform) -> bool:
        return any(p == platform.value for _c, p in self.cells)


def load_matrix(source) -> ExpectationMatrix:
    """Load a matrix document; min_fields default to the canonical registry
    unless the document overrides them."""
    if isinstance(source, Mapping):
        doc = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if doc.get("schema_version") != MATRIX_SCHEMA_VERSION:
        raise ConfigurationError(
            f"unsupported matrix schema_version: {doc.get('schema_version')!r}"
        )
    cells = {
        (cat_id, platform): status
        for cat_id, row in doc["statuses"].items()
        for platform, status in row.items()
    }
    min_fields = {cat.id: cat.min_fields for cat in CATEGORIES.values()}
    for cat_id, fields_ in doc.get("min_fields", {}).items():
        min_fields[cat_id] = tuple(fields_)
    return ExpectationMatrix(
        cells=cells, min_fields=min_fields, captured_at=doc.get("captured_at", "")
    )


def default_matrix() -> ExpectationMatrix:
    text = (
        resources.files("ddpaudit.data")
        .joinpath("expectation_matrix.json")
        .read_text("utf-8")
    )
    return load_matrix(json.loads(text))


# ----------------------------------------------------------------- coverage

@dataclass(frozen=True)
class CategoryCoverage:
    category_id: str
    observed: str  # present_complete | present_partial | absent
    expected: str  # matrix status token
    verdict: str
    record_count: int
    missing_fields: tuple[str, ...] = ()
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "category": self.category_id,
            "observed": self.observed,
            "expected": self.expected,
            "verdict": self.verdict,
            "record_count": self.record_count,
            "missing_fields": list(self.missing_fields),
            "note": self.note,
        }


@dataclass(frozen=True)
class CoverageReport:
    platform: Platform
    rows: tuple[CategoryCoverage, ...]
    field_threshold: float = DEFAULT_FIELD_THRESHOLD

    def row(self, cat_id: str) -> CategoryCoverage:
        for r in self.rows:
            if r.category_id == cat_id:
                return r
        raise KeyError(cat_id)

    def to_dict(self) -> dict:
        return {
            "platform": self.platform.value,
            "field_threshold": self.field_threshold,
            "rows": [r.to_dict() for r in self.rows],
        }


def _field_populated(record: ActivityRecord, field_name: str) -> bool:
    if field_name == "timestamp":
        return record.timestamp is not None
    if field_name == "context_id":
        return bool(record.context_id)
    return bool(record.attributes.get(field_name, ""))


def _verdict(observed: str, expected: str) -> tuple[str, str]:
    if expected == "-":
        return "not_applicable", STATUS_NOTES["-"]
    if expected == "Y":
        if observed == "present_complete":
            return "meets", ""
        return "falls_short", "expected but " + (
            "incomplete" if observed == "present_partial" else "missing"
        )
    if observed == "absent":
        if expected == "N":
            return "meets", ""
        return "not_applicable", STATUS_NOTES[expected]
    return "exceeds", "present although not expected in this DDP"


def coverage(
    ddp: DdpSnapshot,
    matrix: ExpectationMatrix,
    *,
    field_threshold: float = DEFAULT_FIELD_THRESHOLD,
) -> CoverageReport:
    """Evaluate all categories of the snapshot against the matrix.

    present_complete needs at least one record with every minimum field
    populated in >= field_threshold of the category's records; the default
    0.95 tolerates the sparse nulls real exports contain (deleted authors
    and the like) without masking systematic omissions.
    """
    if not matrix.covers(ddp.platform):
        raise ConfigurationError(f"matrix does not cover platform {ddp.platform.value}")
    rows = []
    covered = [
        cat for cat in CATEGORIES.values()
        if (cat.id, ddp.platform.value) in matrix.cells
    ]
    for cat in covered:
        records = ddp.records_for(cat)
        min_fields = matrix.min_fields.get(cat.id, ())
        if not records:
            observed = "absent"
            missing: tuple[str, ...] = ()
        else:
            missing = tuple(
                f
                for f in min_fields
                if sum(_field_populated(r, f) for r in records) / len(records)
                < field_threshold
            )
            observed = "present_complete" if not missing else "present_partial"
        expected = matrix.status(cat.id, ddp.platform)
        verdict, note = _verdict(observed, expected)
        rows.append(
            CategoryCoverage(
                category_id=cat.id,
                observed=observed,
                expected=expected,
                verdict=verdict,
                record_count=len(records),
                missing_fields=missing,
                note=note,
            )
        )
    return CoverageReport(ddp.platform, tuple(rows), field_threshold)


# --------------------------------------------------------------- disclosure

@dataclass(frozen=True)
class DisclosureFinding:
    clause: str
    scope: str  # "all" or a category id
    status: str  # "disclosed" | "absent"
    evidence: Optional[str] = None

    def __post_init__(self) -> None:
        if self.status == "disclosed" and not self.evidence:
            raise ConfigurationError("a disclosed finding requires evidence")

    def to_dict(self) -> dict:
        return {
            "clause": self.clause,
            "scope": self.scope,
            "status": self.status,
            "evidence": self.evidence,
        }


def disclosure_audit(ddp: DdpSnapshot) -> list[DisclosureFinding]:
    """One finding per Article 15(1) clause: disclosed iff the DDP carried
    a nonempty text blob for that disclosure kind."""
    findings = []
    for clause, kind in CLAUSES.items():
        text = (ddp.disclosure_texts or {}).get(kind)
        if text:
            excerpt = " ".join(text.split())
            if len(excerpt) > 200:
                excerpt = excerpt[:197] + "..."
            findings.append(DisclosureFinding(clause, "all", "disclosed", excerpt))
        else:
            findings.append(DisclosureFinding(clause, "all", "absent"))
    return findings


def retention_window_check(
    ddp: DdpSnapshot, category_id: str, expected_days: float, slack_days: float
) -> str:
    """Compare a category's observed duration against an expected retention
    window: within / shorter / longer / unknown."""
    if expected_days <= 0:
        raise ConfigurationError("expected_days must be positive")
    result: DurationResult = duration(ddp, category_id)
    if result.status != "ok":
        return "unknown"
    if result.days < expected_days - slack_days:
        return "shorter"
    if result.days > expected_days + slack_days:
        return "longer"
    return "within"


# ------------------------------------------------------------------ report

@dataclass(frozen=True)
class ReportDocument:
    markdown: str
    data: dict


def render_report(
    coverage_report: Optional[CoverageReport],
    findings: Sequence[DisclosureFinding] = (),
    reliability: Optional[Mapping] = None,
    *,
    assumptions: Optional[Mapping] = None,
    generated_at: str = "",
) -> ReportDocument:
    """Deterministic human-readable report plus machine JSON.

    Section order is fixed; rerunning on identical inputs yields identical
    bytes apart from the caller-supplied generated_at stamp.
    """
    lines = ["# DDP audit report", ""]
    data: dict = {"schema_version": REPORT_SCHEMA_VERSION, "generated_at": generated_at}
    if generated_at:
        lines += [f"Generated: {generated_at}", ""]
    lines += [
        "Findings are potential non-compliance indicators, not legal judgment.",
        "",
    ]

    lines.append("## Category coverage")
    lines.append("")
    if coverage_report is None:
        lines += ["no data", ""]
        data["coverage"] = None
    else:
        data["coverage"] = coverage_report.to_dict()
        lines.append(f"Platform: {coverage_report.platform.value}")
        lines.append("")
        lines.append("| category | expected | observed | verdict | missing fields | note |")
        lines.append("|---|---|---|---|---|---|")
        for row in coverage_report.rows:
            lines.append(
                "| {} | {} | {} | {} | {} | {} |".format(
                    row.category_id,
                    row.expected,
                    row.observed,
                    row.verdict,
                    ", ".join(row.missing_fields) or "-",
                    row.note or "-",
                )
            )
        lines.append("")

    lines.append("## Article 15(1) disclosures")
    lines.append("")
    data["disclosure"] = [f.to_dict() for f in findings]
    if not findings:
        lines += ["no data", ""]
    else:
        for finding in findings:
            detail = f" ({finding.evidence})" if finding.evidence else ""
            lines.append(f"- {finding.clause}: {finding.status}{detail}")
        lines.append("")

    lines.append("## Reliability")
    lines.append("")
    data["reliability"] = dict(reliability) if reliability else None
    if not reliability:
        lines += ["no data", ""]
    else:
        for section in sorted(reliability):
            lines.append(f"- {section}: see machine report")
        lines.append("")

    lines.append("## Assumptions")
    lines.append("")
    data["assumptions"] = dict(assumptions) if assumptions else {}
    if not assumptions:
        lines += ["none recorded", ""]
    else:
        for key in sorted(assumptions):
            lines.append(f"- {key}: {assumptions[key]}")
        lines.append("")

    return ReportDocument(markdown="\n".join(lines), data=data)
