"""Reliability metrics: completeness, correctness (Jaccard aspects),
intra-user snapshot retention, and inter-user duration statistics.

Matching is greedy nearest-timestamp on equal context keys, each DDP
record consumable once, with deterministic tie-breaking, so audits are
reproducible and every unmatched event can be inspected.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Mapping, Optional, Sequence

from .errors import ConfigurationError
from .har import EventKind, SessionEvent, SessionLog
from .model import ActivityRecord, DdpSnapshot, category
from .simulate import KIND_CATEGORY

CONTEXT_KEYS = ("content_id", "author_id", "query")
DATE_GRANULARITIES = ("second", "minute", "day")


@dataclass(frozen=True)
class MatchConfig:
    """How log events are matched to DDP records.

    The default 5 s tolerance reflects the clock noise observed on
    platforms that report near-exact timestamps; Instagram-style exports
    need up to a minute. The date aspect defaults to calendar days (UTC).
    """

    timestamp_tolerance_seconds: int = 5
    context_key: str = "content_id"
    date_granularity: str = "day"

    def __post_init__(self) -> None:
        if self.timestamp_tolerance_seconds < 0:
            raise ConfigurationError("timestamp tolerance must be >= 0")
        if self.context_key not in CONTEXT_KEYS:
            raise ConfigurationError(f"unknown context_key: {self.context_key!r}")
        if self.date_granularity not in DATE_GRANULARITIES:
            raise ConfigurationError(
                f"unknown date_granularity: {self.date_granularity!r}"
            )


INSTAGRAM_PROFILE = MatchConfig(timestamp_tolerance_seconds=60, context_key="author_id")


def record_context_key(record: ActivityRecord, cfg: MatchConfig) -> str:
    if cfg.context_key == "author_id":
        return record.attributes.get("author_name", "")
    return record.context_id


def date_key(ts: int, granularity: str) -> str:
    if granularity == "second":
        return str(ts)
    dt = datetime.fromtimestamp(ts, tz=timezone.utc)
    if granularity == "minute":
        return dt.strftime("%Y-%m-%dT%H:%M")
    return dt.strftime("%Y-%m-%d")


def _kind_records(ddp: DdpSnapshot, kind: EventKind) -> tuple[ActivityRecord, ...]:
    return ddp.records_for(category(KIND_CATEGORY[kind]))


def _check_platforms(log: SessionLog, ddp: DdpSnapshot) -> None:
    if log.platform is not ddp.platform:
        raise ConfigurationError(
            f"platform mismatch: log {log.platform.value} vs ddp {ddp.platform.value}"
        )


# ------------------------------------------------------------ completeness

@dataclass(frozen=True)
class CompletenessResult:
    status: str  # "ok" | "undefined"
    fraction: Optional[float]
    matched: int
    total: int
    unmatched: tuple[SessionEvent, ...]
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "fraction": self.fraction,
            "matched": self.matched,
            "total": self.total,
            "unmatched": [
                {"kind": e.kind.value, "timestamp": e.timestamp, "content_id": e.content_id}
                for e in self.unmatched
            ],
            "note": self.note,
        }


def completeness(
    log: SessionLog, ddp: DdpSnapshot, cfg: MatchConfig, kind: EventKind
) -> CompletenessResult:
    """Fraction of ground-truth events present in the DDP.

    Each log event matches at most one record: greedy nearest-timestamp
    within tolerance among records with an equal context key; ties go to
    the earliest record, then lexicographic context id.
    """
    _check_platforms(log, ddp)
    events = log.events_of(kind)
    if not events:
        return CompletenessResult("undefined", None, 0, 0, (), "empty session log")

    by_key: dict[str, list[tuple[int, int]]] = {}
    for idx, rec in enumerate(_kind_records(ddp, kind)):
        if rec.timestamp is None:
            continue
        by_key.setdefault(record_context_key(rec, cfg), []).append((rec.timestamp, idx))
    for candidates in by_key.values():
        candidates.sort()

    consumed: set[int] = set()
    matched = 0
    unmatched = []
    for event in sorted(events, key=lambda e: (e.timestamp, e.content_id)):
        best = None
        for ts, idx in by_key.get(event.content_id, ()):
            if idx in consumed:
                continue
            dist = abs(ts - event.timestamp)
            if dist > cfg.timestamp_tolerance_seconds:
                continue
            key = (dist, ts, idx)
            if best is None or key < best:
                best = key
        if best is None:
            unmatched.append(event)
        else:
            consumed.add(best[2])
            matched += 1
    return CompletenessResult(
        "ok", matched / len(events), matched, len(events), tuple(unmatched)
    )


# -------------------------------------------------------------- correctness

@dataclass(frozen=True)
class JaccardScores:
    date: float
    context: float
    overall: float

    def to_dict(self) -> dict:
        return {"date": self.date, "context": self.context, "overall": self.overall}


def _jaccard(a: set, b: set) -> float:
    if not a and not b:
        return 1.0  # vacuous agreement, by documented convention
    union = a | b
    return len(a & b) / len(union)


def correctness(
    log: SessionLog, ddp: DdpSnapshot, cfg: MatchConfig, kind: EventKind
) -> JaccardScores:
    """Jaccard similarity of date keys, context keys, and (date, context)
    pairs between ground truth and DDP. Sets, not multisets: re-watches of
    the same content collapse to one element."""
    _check_platforms(log, ddp)
    events = log.events_of(kind)
    records = _kind_records(ddp, kind)

    log_dates = {date_key(e.timestamp, cfg.date_granularity) for e in events}
    log_contexts = {e.content_id for e in events}
    log_pairs = {
        (date_key(e.timestamp, cfg.date_granularity), e.content_id) for e in events
    }

    ddp_dates = set()
    ddp_contexts = set()
    ddp_pairs = set()
    for rec in records:
        ctx = record_context_key(rec, cfg)
        if ctx:
            ddp_contexts.add(ctx)
        if rec.timestamp is not None:
            day = date_key(rec.timestamp, cfg.date_granularity)
            ddp_dates.add(day)
            if ctx:
                ddp_pairs.add((day, ctx))

    return JaccardScores(
        date=_jaccard(log_dates, ddp_dates),
        context=_jaccard(log_contexts, ddp_contexts),
        overall=_jaccard(log_pairs, ddp_pairs),
    )


# ---------------------------------------------------------------- retention

@dataclass(frozen=True)
class RetentionReport:
    status: str  # "ok" | "undefined"
    date: Optional[float]
    context: Optional[float]
    overall: Optional[float]
    missing: tuple[ActivityRecord, ...]
    compared_window: Optional[tuple[int, int]]
    note: str = ""

    def to_dict(self) -> dict:
        from .model import record_to_dict

        return {
            "status": self.status,
            "date": self.date,
            "context": self.context,
            "overall": self.overall,
            "missing": [record_to_dict(r) for r in self.missing],
            "compared_window": list(self.compared_window) if self.compared_window else None,
            "note": self.note,
        }


def intra_consistency(
    earlier: DdpSnapshot, later: DdpSnapshot, cfg: MatchConfig, kind: EventKind
) -> RetentionReport:
    """How much of an earlier snapshot survives in a later one.

    Compared inside the window covered by BOTH snapshots for the category,
    so retention-window drift is not mistaken for data loss. Ratios are
    |retained| / |earlier records in window| per aspect.
    """
    if earlier.platform is not later.platform:
        raise ConfigurationError("snapshots come from different platforms")
    if earlier.account_alias != later.account_alias:
        raise ConfigurationError("snapshots come from different accounts")

    def stamped(snapshot):
        return [r for r in _kind_records(snapshot, kind) if r.timestamp is not None]

    earlier_records = stamped(earlier)
    later_records = stamped(later)
    if not earlier_records or not later_records:
        return RetentionReport(
            "undefined", None, None, None, (), None, "a snapshot has no timestamped records"
        )
    window = (
        max(min(r.timestamp for r in earlier_records), min(r.timestamp for r in later_records)),
        min(max(r.timestamp for r in earlier_records), max(r.timestamp for r in later_records)),
    )
    if window[0] > window[1]:
        return RetentionReport(
            "undefined", None, None, None, (), None,
            "snapshots cover disjoint time windows",
        )

    def in_window(records):
        return [r for r in records if window[0] <= r.timestamp <= window[1]]

    def aspects(records):
        dates = set()
        contexts = set()
        pairs = set()
        for rec in records:
            day = date_key(rec.timestamp, cfg.date_granularity)
            ctx = record_context_key(rec, cfg)
            dates.add(day)
            if ctx:
                contexts.add(ctx)
                pairs.add((day, ctx))
        return dates, contexts, pairs

    earlier_in = in_window(earlier_records)
    e_dates, e_contexts, e_pairs = aspects(earlier_in)
    l_dates, l_contexts, l_pairs = aspects(in_window(later_records))

    def ratio(kept: set, base: set) -> Optional[float]:
        if not base:
            return None
        return len(kept & base) / len(base)

    missing = tuple(
        rec
        for rec in earlier_in
        if (date_key(rec.timestamp, cfg.date_granularity), record_context_key(rec, cfg))
        not in l_pairs
    )
    return RetentionReport(
        "ok",
        date=ratio(l_dates, e_dates),
        context=ratio(l_contexts, e_contexts),
        overall=ratio(l_pairs, e_pairs),
        missing=missing,
        compared_window=window,
    )


# ---------------------------------------------------------------- durations

@dataclass(frozen=True)
class DurationResult:
    status: str  # "ok" | "undefined"
    days: Optional[float]
    note: str = ""


def duration(snapshot: DdpSnapshot, category_id: str) -> DurationResult:
    """Time difference between the earliest and the latest entries of a
    category, in float days. A single record spans 0.0 days."""
    stamps = [
        r.timestamp
        for r in snapshot.records_for(category(category_id))
        if r.timestamp is not None
    ]
    if not stamps:
        return DurationResult("undefined", None, "no timestamped records")
    return DurationResult("ok", (max(stamps) - min(stamps)) / 86400.0)


def account_age_days(snapshot: DdpSnapshot) -> Optional[float]:
    """Account age proxy: request time minus account creation (earliest
    account_details timestamp), falling back to the earliest record."""
    details = [
        r.timestamp
        for r in snapshot.records_for(category("account_details"))
        if r.timestamp is not None
    ]
    if details:
        return (snapshot.request_time - min(details)) / 86400.0
    stamps = [r.timestamp for r in snapshot.records if r.timestamp is not None]
    if not stamps:
        return None
    return (snapshot.request_time - min(stamps)) / 86400.0


@dataclass(frozen=True)
class DurationStats:
    status: str  # "ok" | "undefined"
    durations: Mapping[str, float] = field(default_factory=dict)
    cdf_points: tuple[tuple[float, float], ...] = ()
    clusters: tuple[tuple[float, int], ...] = ()
    grouping: Optional[str] = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "grouping": self.grouping,
            "durations": dict(self.durations),
            "cdf_points": [list(p) for p in self.cdf_points],
            "clusters": [{"center_days": c, "member_count": n} for c, n in self.clusters],
            "note": self.note,
        }


def _ecdf(values: Sequence[float]) -> tuple[tuple[float, float], ...]:
    ordered = sorted(values)
    n = len(ordered)
    points = []
    for i, v in enumerate(ordered):
        if i + 1 < n and ordered[i + 1] == v:
            continue  # one point per distinct duration
        points.append((v, (i + 1) / n))
    return tuple(points)


def gap_clusters(values: Sequence[float]) -> tuple[tuple[float, int], ...]:
    """1-D clustering by gaps: split sorted durations where a consecutive
    gap exceeds max(2 days, 10% of total range); centers are medians.
    Parameter-light on purpose, so cluster output stays explainable.

    Fewer than two values yield no clusters at all: a lone duration is a
    data point, not a cluster."""
    ordered = sorted(values)
    if len(ordered) < 2:
        return ()
    threshold = max(2.0, 0.10 * (ordered[-1] - ordered[0]))
    groups: list[list[float]] = [[ordered[0]]]
    for prev, cur in zip(ordered, ordered[1:]):
        if cur - prev > threshold:
            groups.append([cur])
        else:
            groups[-1].append(cur)
    return tuple((statistics.median(g), len(g)) for g in groups)


def cohort_stats(
    snapshots: Sequence[DdpSnapshot],
    category_id: str,
    *,
    grouping: Optional[str] = None,
    min_account_age_days: Optional[float] = None,
) -> DurationStats:
    """Per-user durations for one category, as an empirical CDF with
    detected clusters. Users without a defined duration, or younger than
    the account-age filter, are excluded."""
    durations: dict[str, float] = {}
    for snapshot in snapshots:
        if min_account_age_days is not None:
            age = account_age_days(snapshot)
            if age is None or age < min_account_age_days:
                continue
        result = duration(snapshot, category_id)
        if result.status == "ok":
            durations[snapshot.account_alias] = result.days
    if not durations:
        return DurationStats(
            "undefined", grouping=grouping, note="no snapshot passed the filters"
        )
    values = list(durations.values())
    return DurationStats(
        "ok",
        durations=durations,
        cdf_points=_ecdf(values),
        clusters=gap_clusters(values),
        grouping=grouping,
    )


def grouped_cohort_stats(
    snapshots: Sequence[DdpSnapshot],
    category_id: str,
    labels: Mapping[str, str],
    *,
    min_account_age_days: Optional[float] = None,
) -> dict[str, DurationStats]:
    """One DurationStats per label; snapshots without a label are skipped."""
    groups: dict[str, list[DdpSnapshot]] = {}
    for snapshot in snapshots:
        label = labels.get(snapshot.account_alias)
        if label is not None:
            groups.setdefault(label, []).append(snapshot)
    return {
        label: cohort_stats(
            members,
            category_id,
            grouping=label,
            min_account_age_days=min_account_age_days,
        )
        for label, members in sorted(groups.items())
    }
