"""Synthetic (session log, DDP snapshot) pairs with precisely injected
defects, and synthetic user cohorts.

The simulator exists to validate the audit metrics: every injected defect
is recorded in an InjectedTruth so metric recovery can be checked against
exact ground truth. Outputs use the same canonical shapes as real inputs,
so downstream code cannot tell fixtures from real data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigurationError
from .har import EventKind, EventOrigin, SessionEvent, SessionLog
from .model import ActivityRecord, DdpSnapshot, FileEntry, Platform, category

KIND_CATEGORY = {
    EventKind.WATCH: "watch",
    EventKind.LIKE: "like",
    EventKind.SEARCH: "search",
}

_BASE_START = 1733011200  # 2024-12-01T00:00:00Z


@dataclass(frozen=True)
class DefectSpec:
    """Defects applied to the DDP side, composed in fixed order:
    truncate -> drop -> relabel -> jitter -> reorder."""

    drop_rate: float = 0.0
    jitter_seconds: int = 0
    truncate_window_days: Optional[float] = None
    relabel_rate: float = 0.0
    reorder: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("drop_rate", "relabel_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"{name} must be in [0, 1], got {value}")
        if self.jitter_seconds < 0:
            raise ConfigurationError("jitter_seconds must be >= 0")
        if self.truncate_window_days is not None and self.truncate_window_days <= 0:
            raise ConfigurationError("truncate_window_days must be positive")


@dataclass(frozen=True)
class SessionShape:
    """Controls how the underlying session is laid out in time.

    day_span spreads events round-robin over consecutive days;
    boundary_fraction pushes that share of events to just before midnight
    (so small jitter can flip their calendar day); rewatch_fraction makes
    that share of events repeat an earlier content id.
    """

    start: int = _BASE_START
    day_span: int = 1
    boundary_fraction: float = 0.0
    rewatch_fraction: float = 0.0

    def __post_init__(self) -> None:
        if self.day_span < 1:
            raise ConfigurationError("day_span must be >= 1")
        for name in ("boundary_fraction", "rewatch_fraction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class InjectedTruth:
    """Exact record of what was done to the DDP side, keyed by event index."""

    n_events: int
    truncated: tuple[int, ...]
    dropped: tuple[int, ...]
    relabeled: dict[int, str] = field(default_factory=dict)
    jitter: dict[int, int] = field(default_factory=dict)
    seed: int = 0

    @property
    def realized_drop_fraction(self) -> float:
        return len(self.dropped) / self.n_events

    @property
    def expected_completeness(self) -> float:
        """Completeness an auditor should recover when its match tolerance
        covers the injected jitter and nothing was truncated or relabeled."""
        return (self.n_events - len(self.dropped)) / self.n_events

    def to_dict(self) -> dict:
        return {
            "n_events": self.n_events,
            "truncated": list(self.truncated),
            "dropped": list(self.dropped),
            "relabeled": {str(k): v for k, v in self.relabeled.items()},
            "jitter": {str(k): v for k, v in self.jitter.items()},
            "seed": self.seed,
        }


def _generate_events(
    n_events: int, kind: EventKind, shape: SessionShape, rng: random.Random
) -> list[SessionEvent]:
    events = []
    n_boundary = round(shape.boundary_fraction * n_events)
    n_rewatch = round(shape.rewatch_fraction * n_events)
    ids = [f"vid_{i:05d}" for i in range(n_events)]
    # rewatches reuse an id from an earlier day, deterministically chosen
    rewatch_at = set(rng.sample(range(shape.day_span, n_events), min(n_rewatch, max(0, n_events - shape.day_span)))) if n_rewatch else set()
    boundary_at = set(rng.sample(range(n_events), n_boundary)) if n_boundary else set()

    for i in range(n_events):
        day = i % shape.day_span
        if i in boundary_at:
            offset = 86400 - rng.randint(5, 90)
        else:
            offset = rng.randint(2 * 3600, 20 * 3600)
        ts = shape.start + day * 86400 + offset
        if i in rewatch_at:
            content_id = ids[rng.randrange(0, i - shape.day_span + 1)]
        else:
            content_id = ids[i]
        duration = rng.randint(15, 60) if kind is EventKind.WATCH else None
        events.append(
            SessionEvent(
                kind=kind,
                timestamp=ts,
                content_id=content_id,
                watch_duration=duration,
                origin=EventOrigin.SYNTHETIC,
            )
        )
    return events


def synth_pair(
    n_events: int,
    defects: DefectSpec,
    platform: Platform = Platform.TIKTOK,
    *,
    kind: EventKind = EventKind.WATCH,
    shape: SessionShape = SessionShape(),
    account_alias: str = "synthetic",
) -> tuple[SessionLog, DdpSnapshot, InjectedTruth]:
    """Build a matched (log, snapshot) pair plus the exact defect ledger.

    With an all-zero DefectSpec the snapshot contains exactly the log's
    events. The realized drop count is round(drop_rate * n_events); the
    truth reports realized counts, never nominal rates.
    """
    if n_events < 1:
        raise ConfigurationError("n_events must be >= 1")
    rng = random.Random(defects.seed)
    events = _generate_events(n_events, kind, shape, rng)

    order = sorted(range(n_events), key=lambda i: events[i].timestamp)
    request_time = max(e.timestamp for e in events) + 60

    surviving = list(range(n_events))
    truncated: list[int] = []
    if defects.truncate_window_days is not None:
        cutoff = request_time - round(defects.truncate_window_days * 86400)
        truncated = [i for i in surviving if events[i].timestamp < cutoff]
        surviving = [i for i in surviving if events[i].timestamp >= cutoff]

    n_drop = min(round(defects.drop_rate * n_events), len(surviving))
    dropped = sorted(rng.sample(surviving, n_drop)) if n_drop else []
    surviving = [i for i in surviving if i not in set(dropped)]

    n_relabel = min(round(defects.relabel_rate * n_events), len(surviving))
    relabel_at = sorted(rng.sample(surviving, n_relabel)) if n_relabel else []
    relabeled = {i: f"relabel_{i:05d}" for i in relabel_at}

    jitter: dict[int, int] = {}
    if defects.jitter_seconds:
        for i in surviving:
            jitter[i] = rng.randint(-defects.jitter_seconds, defects.jitter_seconds)

    source_file = f"synthetic/{KIND_CATEGORY[kind]}.json"
    cat = category(KIND_CATEGORY[kind])
    records = []
    for i in surviving:
        ev = events[i]
        ts = max(1, ev.timestamp + jitter.get(i, 0))
        records.append(
            ActivityRecord(
                platform=platform,
                category=cat,
                timestamp=ts,
                context_id=relabeled.get(i, ev.content_id),
                attributes={},
                source_file=source_file,
            )
        )
    if defects.reorder:
        rng.shuffle(records)  # snapshot construction re-sorts; proves normalization

    log = SessionLog(
        platform=platform,
        session_id=f"synth-{defects.seed}",
        events=tuple(events[i] for i in order),
        capture_window=(events[order[0]].timestamp, events[order[-1]].timestamp),
    )
    snapshot = DdpSnapshot(
        platform=platform,
        account_alias=account_alias,
        request_time=request_time,
        records=tuple(records),
        file_manifest=(FileEntry(source_file, 0, "json"),),
    )
    truth = InjectedTruth(
        n_events=n_events,
        truncated=tuple(truncated),
        dropped=tuple(dropped),
        relabeled=relabeled,
        jitter=jitter,
        seed=defects.seed,
    )
    return log, snapshot, truth


# ----------------------------------------------------------------- cohort

@dataclass(frozen=True)
class CohortSpec:
    """Synthetic user cohort whose per-user history durations are drawn
    from a mixture of (center_days, weight, spread_days) modes."""

    n_users: int
    duration_modes: tuple[tuple[float, float, float], ...]
    category: str = "watch"
    country_labels: tuple[str, ...] = ()
    seed: int = 0
    account_age_days: Optional[float] = None

    def __post_init__(self) -> None:
        if self.n_users < 1:
            raise ConfigurationError("n_users must be >= 1")
        if not self.duration_modes:
            raise ConfigurationError("duration_modes must be nonempty")
        total = sum(w for _c, w, _s in self.duration_modes)
        if abs(total - 1.0) > 1e-9:
            raise ConfigurationError(f"mode weights must sum to 1, got {total}")
        for center, _w, spread in self.duration_modes:
            if center <= 0:
                raise ConfigurationError("mode centers must be positive")
            if spread < 0:
                raise ConfigurationError("mode spreads must be >= 0")
        category(self.category)


_COHORT_REQUEST_TIME = 1734696000  # 2024-12-20T12:00:00Z


def synth_cohort(spec: CohortSpec) -> list[DdpSnapshot]:
    """One snapshot per user; earliest/latest records realize the drawn
    duration exactly. An account_details record carries the account age
    signal (creation time) used by cohort filters."""
    rng = random.Random(spec.seed)
    cat = category(spec.category)
    source_file = f"synthetic/{spec.category}.json"
    weights = [w for _c, w, _s in spec.duration_modes]
    snapshots = []
    for u in range(spec.n_users):
        center, _w, spread = rng.choices(spec.duration_modes, weights=weights, k=1)[0]
        duration_days = center + rng.uniform(-spread, spread)
        duration_seconds = max(0, round(duration_days * 86400))
        latest = _COHORT_REQUEST_TIME - 3600
        earliest = latest - duration_seconds
        stamps = [earliest, latest]
        for _ in range(3):  # interior records; endpoints already pin the duration
            if duration_seconds > 1:
                stamps.append(earliest + rng.randint(1, duration_seconds - 1))
        records = [
            ActivityRecord(
                platform=Platform.TIKTOK,
                category=cat,
                timestamp=ts,
                context_id=f"user{u:03d}_item{k:02d}",
                source_file=source_file,
            )
            for k, ts in enumerate(sorted(stamps))
        ]
        age_days = spec.account_age_days if spec.account_age_days is not None else duration_days + 30
        created = _COHORT_REQUEST_TIME - round(age_days * 86400)
        records.append(
            ActivityRecord(
                platform=Platform.TIKTOK,
                category=category("account_details"),
                timestamp=max(1, created),
                context_id="",
                attributes={"username": f"user_{u:03d}"},
                source_file=source_file,
            )
        )
        snapshots.append(
            DdpSnapshot(
                platform=Platform.TIKTOK,
                account_alias=f"user_{u:03d}",
                request_time=_COHORT_REQUEST_TIME,
                records=tuple(records),
                file_manifest=(FileEntry(source_file, 0, "json"),),
            )
        )
    return snapshots


def cohort_labels(spec: CohortSpec) -> dict[str, str]:
    """Deterministic alias -> country label assignment (round-robin)."""
    if not spec.country_labels:
        return {}
    return {
        f"user_{u:03d}": spec.country_labels[u % len(spec.country_labels)]
        for u in range(spec.n_users)
    }


def retention_pair(
    n_records: int,
    removal_fraction: float,
    *,
    ad_fraction_of_removed: float = 0.0,
    seed: int = 0,
    platform: Platform = Platform.TIKTOK,
    category_id: str = "watch",
) -> tuple[DdpSnapshot, DdpSnapshot]:
    """Two snapshots of one account where the later one lost an exact
    fraction of the earlier entries.

    Records carry unique (day, context) pairs; the first and last records
    always survive, so both snapshots cover the same window and the
    retention ratio equals 1 - removal_fraction exactly. A share of the
    removed entries is flagged is_ad to mimic ad-entry churn.
    """
    if n_records < 3:
        raise ConfigurationError("n_records must be >= 3")
    if not 0.0 <= removal_fraction <= 1.0 or not 0.0 <= ad_fraction_of_removed <= 1.0:
        raise ConfigurationError("fractions must be in [0, 1]")
    rng = random.Random(seed)
    cat = category(category_id)
    source_file = f"synthetic/{category_id}.json"
    start = _BASE_START - 40 * 86400

    n_remove = round(removal_fraction * n_records)
    removable = list(range(1, n_records - 1))  # endpoints pin the window
    removed = set(rng.sample(removable, min(n_remove, len(removable))))
    ad_marked = set(
        sorted(removed)[: round(ad_fraction_of_removed * len(removed))]
    )
    ad_marked |= {i for i in range(0, n_records, 10) if i not in removed and i > 0}

    def build(indexes, request_time):
        records = tuple(
            ActivityRecord(
                platform=platform,
                category=cat,
                timestamp=start + i * 86400 + 43200,  # one record per day
                context_id=f"item_{i:05d}",
                attributes={"is_ad": "true"} if i in ad_marked else {},
                source_file=source_file,
            )
            for i in indexes
        )
        return DdpSnapshot(
            platform=platform,
            account_alias="retention-fixture",
            request_time=request_time,
            records=records,
            file_manifest=(FileEntry(source_file, 0, "json"),),
        )

    last_ts = start + (n_records - 1) * 86400 + 43200
    earlier = build(range(n_records), last_ts + 3600)
    later = build(
        [i for i in range(n_records) if i not in removed],
        last_ts + 7 * 86400,
    )
    return earlier, later
