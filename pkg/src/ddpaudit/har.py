"""Ground-truth session logs extracted from HTTP Archive (HAR) captures.

HAR files log every browser request; declarative extraction rules turn the
entries that correspond to user actions (watching, liking, searching) into
a SessionLog that DDP snapshots are judged against.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from importlib import resources
from typing import Mapping, Optional, Sequence

from .errors import ConfigurationError, HarError
from .model import Platform, dump_json

RULES_SCHEMA_VERSION = "1"
SESSION_SCHEMA_VERSION = "1"
DEFAULT_DEDUP_WINDOW_SECONDS = 1


class EventKind(str, Enum):
    WATCH = "watch"
    LIKE = "like"
    SEARCH = "search"

    @classmethod
    def parse(cls, value: str) -> "EventKind":
        try:
            return cls(value)
        except ValueError:
            raise ConfigurationError(f"unknown event kind: {value!r}") from None


class EventOrigin(str, Enum):
    HAR = "har"
    SYNTHETIC = "synthetic"


@dataclass(frozen=True)
class SessionEvent:
    kind: EventKind
    timestamp: int
    content_id: str
    watch_duration: Optional[int] = None
    origin: EventOrigin = EventOrigin.HAR

    def __post_init__(self) -> None:
        if self.watch_duration is not None and not 1 <= self.watch_duration <= 86400:
            raise ConfigurationError(
                f"watch_duration out of range [1, 86400]: {self.watch_duration}"
            )


@dataclass(frozen=True)
class SessionLog:
    """Ground-truth event sequence. Events are sorted by timestamp
    (re-watches of the same content are allowed) and all lie inside
    capture_window."""

    platform: Platform
    session_id: str
    events: tuple[SessionEvent, ...]
    capture_window: tuple[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "events",
            tuple(sorted(self.events, key=lambda e: (e.timestamp, e.kind.value, e.content_id))),
        )
        start, end = self.capture_window
        for ev in self.events:
            if not start <= ev.timestamp <= end:
                raise ConfigurationError(
                    f"event at {ev.timestamp} outside capture_window {self.capture_window}"
                )

    def events_of(self, kind: EventKind) -> tuple[SessionEvent, ...]:
        return tuple(e for e in self.events if e.kind is kind)


@dataclass(frozen=True)
class HarExtractionRule:
    kind: EventKind
    url_pattern: str
    id_capture: str
    timestamp_source: str = "request_started"
    _compiled: re.Pattern = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.timestamp_source not in ("request_started", "response_received"):
            raise ConfigurationError(
                f"unknown timestamp_source: {self.timestamp_source!r}"
            )
        try:
            compiled = re.compile(self.url_pattern)
        except re.error as exc:
            raise ConfigurationError(f"url_pattern does not compile: {exc}") from exc
        object.__setattr__(self, "_compiled", compiled)

    def match(self, url: str) -> Optional[re.Match]:
        return self._compiled.search(url)


def load_rules(source) -> list[HarExtractionRule]:
    """Load extraction rules from a JSON document (path or parsed dict)."""
    if isinstance(source, (dict,)):
        doc = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if doc.get("schema_version") != RULES_SCHEMA_VERSION:
        raise ConfigurationError(
            f"unsupported HAR rules schema_version: {doc.get('schema_version')!r}"
        )
    return [
        HarExtractionRule(
            kind=EventKind.parse(row["kind"]),
            url_pattern=row["url_pattern"],
            id_capture=row["id_capture"],
            timestamp_source=row.get("timestamp_source", "request_started"),
        )
        for row in doc["rules"]
    ]


def default_rules(platform: Platform) -> list[HarExtractionRule]:
    text = (
        resources.files("ddpaudit.data")
        .joinpath(f"har_rules/{platform.value}.json")
        .read_text("utf-8")
    )
    return load_rules(json.loads(text))


def _entry_epoch_seconds(entry: Mapping, source: str) -> int:
    started = entry["startedDateTime"]
    dt = datetime.fromisoformat(started.replace("Z", "+00:00"))
    seconds = int(dt.timestamp())
    if source == "response_received":
        seconds += int(round(entry.get("time", 0) / 1000.0))
    return seconds


def _extract_id(rule: HarExtractionRule, match: re.Match, entry: Mapping) -> Optional[str]:
    if rule.id_capture.startswith("body."):
        text = (entry.get("response", {}).get("content", {}) or {}).get("text")
        if not text:
            return None
        try:
            node = json.loads(text)
        except (json.JSONDecodeError, TypeError):
            return None
        for part in rule.id_capture.split(".")[1:]:
            if isinstance(node, Mapping) and part in node:
                node = node[part]
            else:
                return None
        return str(node) if node not in (None, "") else None
    got = match.groupdict().get(rule.id_capture)
    return got or None


def parse_har(
    path,
    rules: Sequence[HarExtractionRule],
    platform: Platform,
    *,
    session_id: Optional[str] = None,
    dedup_window_seconds: int = DEFAULT_DEDUP_WINDOW_SECONDS,
) -> tuple[SessionLog, list[str]]:
    """Extract a SessionLog from one HAR file.

    Every entry matching a rule yields one event; duplicate events with
    the same kind and content id within the dedup window (request retries)
    collapse to one. Response bodies are never retained past extraction.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise HarError(f"{path}: not valid JSON: {exc}") from exc
    entries = doc.get("log", {}).get("entries")
    if not isinstance(entries, list):
        raise HarError(f"{path}: not a HAR document (log.entries missing)")

    warnings: list[str] = []
    events: list[SessionEvent] = []
    entry_times: list[int] = []
    for i, entry in enumerate(entries):
        try:
            started = _entry_epoch_seconds(entry, "request_started")
        except (KeyError, ValueError):
            warnings.append(f"entry {i}: unparseable startedDateTime, skipped")
            continue
        entry_times.append(started)
        url = entry.get("request", {}).get("url", "")
        for rule in rules:
            match = rule.match(url)
            if not match:
                continue
            content_id = _extract_id(rule, match, entry)
            if content_id is None:
                warnings.append(
                    f"entry {i}: rule for {rule.kind.value} matched but id extraction failed"
                )
                continue
            events.append(
                SessionEvent(
                    kind=rule.kind,
                    timestamp=_entry_epoch_seconds(entry, rule.timestamp_source),
                    content_id=content_id,
                    origin=EventOrigin.HAR,
                )
            )
            break

    if not events:
        warnings.append("no HAR entries matched any extraction rule")

    events.sort(key=lambda e: (e.timestamp, e.kind.value, e.content_id))
    deduped: list[SessionEvent] = []
    last_kept: dict[tuple[EventKind, str], int] = {}
    for ev in events:
        key = (ev.kind, ev.content_id)
        prev = last_kept.get(key)
        if prev is not None and ev.timestamp - prev <= dedup_window_seconds:
            continue
        last_kept[key] = ev.timestamp
        deduped.append(ev)

    all_times = entry_times + [e.timestamp for e in deduped]
    if all_times:
        window = (min(all_times), max(all_times))
    else:
        window = (0, 0)
    log = SessionLog(
        platform=platform,
        session_id=session_id or "har-session",
        events=tuple(deduped),
        capture_window=window,
    )
    return log, warnings


# -- session log io ------------------------------------------------------

def session_log_to_dict(log: SessionLog) -> dict:
    return {
        "schema_version": SESSION_SCHEMA_VERSION,
        "session": {
            "platform": log.platform.value,
            "session_id": log.session_id,
            "capture_window": list(log.capture_window),
        },
        "events": [
            {
                "kind": e.kind.value,
                "timestamp": e.timestamp,
                "content_id": e.content_id,
                "watch_duration": e.watch_duration,
                "origin": e.origin.value,
            }
            for e in log.events
        ],
    }


def session_log_from_dict(data: Mapping) -> SessionLog:
    if data.get("schema_version") != SESSION_SCHEMA_VERSION:
        raise ConfigurationError(
            f"unsupported session log schema_version: {data.get('schema_version')!r}"
        )
    session = data["session"]
    return SessionLog(
        platform=Platform.parse(session["platform"]),
        session_id=session["session_id"],
        events=tuple(
            SessionEvent(
                kind=EventKind.parse(e["kind"]),
                timestamp=e["timestamp"],
                content_id=e["content_id"],
                watch_duration=e.get("watch_duration"),
                origin=EventOrigin(e.get("origin", "har")),
            )
            for e in data["events"]
        ),
        capture_window=tuple(session["capture_window"]),
    )


def save_session_log(log: SessionLog, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(session_log_to_dict(log)))


def load_session_log(path) -> SessionLog:
    with open(path, "r", encoding="utf-8") as fh:
        return session_log_from_dict(json.load(fh))
