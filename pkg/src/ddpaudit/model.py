"""Canonical data model: platforms, data categories, activity records, and
DDP snapshots.

Every other module consumes these types. All of them are immutable after
construction; operations return new values, so instances can be shared
freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ConfigurationError

RAW_PREFIX = "raw."

DISCLOSURE_KINDS = ("purpose", "recipients", "retention", "source", "automated_decisions")

FILE_FORMATS = ("json", "csv", "txt", "html")

EXPORT_SCHEMA_VERSION = "1"


class Platform(str, Enum):
    TIKTOK = "tiktok"
    INSTAGRAM = "instagram"
    YOUTUBE = "youtube"
    GENERIC = "generic"

    @classmethod
    def parse(cls, value: str) -> "Platform":
        try:
            return cls(value)
        except ValueError:
            raise ConfigurationError(f"unknown platform: {value!r}") from None


class CategoryGroup(str, Enum):
    USAGE = "usage"
    CONTENT = "content"
    PERSONAL = "personal"
    ADVERTISEMENTS = "advertisements"
    MISCELLANEOUS = "miscellaneous"


@dataclass(frozen=True)
class DataCategory:
    """One row of the shared-information table.

    The set of categories is closed: instances come from the shipped
    registry, never from runtime input.
    """

    id: str
    group: CategoryGroup
    min_fields: tuple[str, ...]
    attribute_keys: tuple[str, ...]

    @property
    def requires_timestamp(self) -> bool:
        return "timestamp" in self.min_fields

    @property
    def requires_context_id(self) -> bool:
        return "context_id" in self.min_fields

    def __str__(self) -> str:  # pragma: no cover - repr sugar
        return self.id


def _load_registry() -> dict[str, DataCategory]:
    raw = json.loads(
        resources.files("ddpaudit.data").joinpath("categories.json").read_text("utf-8")
    )
    registry: dict[str, DataCategory] = {}
    for row in raw["categories"]:
        cat = DataCategory(
            id=row["id"],
            group=CategoryGroup(row["group"]),
            min_fields=tuple(row["min_fields"]),
            attribute_keys=tuple(row["attributes"]),
        )
        registry[cat.id] = cat
    return registry


CATEGORIES: dict[str, DataCategory] = _load_registry()


def category(category_id: str) -> DataCategory:
    """Look up a category by id; unknown ids are a configuration error."""
    try:
        return CATEGORIES[category_id]
    except KeyError:
        raise ConfigurationError(f"unknown data category: {category_id!r}") from None


def _valid_attribute_key(cat: DataCategory, key: str) -> bool:
    return key in cat.attribute_keys or key.startswith(RAW_PREFIX)


@dataclass(frozen=True)
class ActivityRecord:
    """One normalized user-activity event, the atom of every audit.

    ``timestamp`` is UTC epoch seconds. ``context_id`` carries the
    per-category key (content URL/id, author id, or query term).
    ``attributes`` keys must be registered for the category or carry the
    ``raw.`` prefix; parsers namespace unknown source keys themselves.
    """

    platform: Platform
    category: DataCategory
    timestamp: Optional[int]
    context_id: str
    attributes: Mapping[str, str] = field(default_factory=dict)
    source_file: str = ""

    def __post_init__(self) -> None:
        if self.timestamp is not None and self.timestamp <= 0:
            raise ConfigurationError(
                f"timestamp must be strictly positive, got {self.timestamp}"
            )
        for key in self.attributes:
            if not _valid_attribute_key(self.category, key):
                raise ConfigurationError(
                    f"attribute {key!r} is not registered for category "
                    f"{self.category.id!r} (use the {RAW_PREFIX} prefix for raw keys)"
                )

    def problems(self) -> list[str]:
        """Soft-invariant violations, reported as warnings by builders.

        A record may legally miss its context id or timestamp when the
        source manifest declared the field absent; the gap is data for the
        compliance checker, not a hard error.
        """
        out = []
        if self.category.requires_context_id and not self.context_id:
            out.append(f"{self.category.id}: empty context_id")
        if self.category.requires_timestamp and self.timestamp is None:
            out.append(f"{self.category.id}: missing timestamp")
        return out

    def sort_key(self) -> tuple:
        ts = self.timestamp if self.timestamp is not None else -1
        return (self.category.id, ts, self.context_id)


@dataclass(frozen=True)
class FileEntry:
    path: str
    size_bytes: int
    format: str

    def __post_init__(self) -> None:
        if self.format not in FILE_FORMATS:
            raise ConfigurationError(f"unknown file format tag: {self.format!r}")


@dataclass(frozen=True)
class DdpSnapshot:
    """One parsed DDP: platform, request time, records, raw-file manifest.

    Records are kept sorted by (category, timestamp, context_id); sorting
    is stable and re-established on construction, so it survives every
    operation that builds a new snapshot.
    """

    platform: Platform
    account_alias: str
    request_time: int
    records: tuple[ActivityRecord, ...]
    file_manifest: tuple[FileEntry, ...] = ()
    disclosure_texts: Mapping[str, Optional[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "records", tuple(sorted(self.records, key=ActivityRecord.sort_key))
        )
        known = {entry.path for entry in self.file_manifest}
        for rec in self.records:
            if rec.source_file and rec.source_file not in known:
                raise ConfigurationError(
                    f"record source_file {rec.source_file!r} missing from file_manifest"
                )
        for kind in self.disclosure_texts:
            if kind not in DISCLOSURE_KINDS:
                raise ConfigurationError(f"unknown disclosure kind: {kind!r}")

    def records_for(self, cat: DataCategory) -> tuple[ActivityRecord, ...]:
        return tuple(r for r in self.records if r.category.id == cat.id)

    def categories_present(self) -> set[str]:
        return {r.category.id for r in self.records}

    def warnings(self) -> list[str]:
        """Non-fatal oddities: future-dated records and soft field gaps."""
        out = []
        stamps = [r.timestamp for r in self.records if r.timestamp is not None]
        if stamps and self.request_time < max(stamps):
            out.append(
                "snapshot contains records dated after request_time "
                f"(max record ts {max(stamps)} > {self.request_time})"
            )
        seen: set[str] = set()
        for rec in self.records:
            for problem in rec.problems():
                if problem not in seen:
                    seen.add(problem)
                    out.append(problem)
        return out


def merge_categories(
    snapshot: DdpSnapshot,
    component_ids: Sequence[str | DataCategory],
    target_id: str | DataCategory,
) -> DdpSnapshot:
    """Relabel records of the component categories to the target category.

    Used to assemble combined histories, e.g. a browsing history defined
    as ads viewed plus posts viewed plus videos watched. Record count is
    preserved; attribute keys foreign to the target category move under
    the ``raw.`` prefix so the result still validates.
    """
    if not component_ids:
        raise ConfigurationError("merge_categories requires at least one component id")
    components = {category(c.id if isinstance(c, DataCategory) else c).id for c in component_ids}
    target = category(target_id.id if isinstance(target_id, DataCategory) else target_id)

    merged = []
    for rec in snapshot.records:
        if rec.category.id in components and rec.category.id != target.id:
            attrs = {
                (k if _valid_attribute_key(target, k) else RAW_PREFIX + k): v
                for k, v in rec.attributes.items()
            }
            merged.append(replace(rec, category=target, attributes=attrs))
        else:
            merged.append(rec)
    return replace(snapshot, records=tuple(merged))


# -- canonical export ----------------------------------------------------

def record_to_dict(rec: ActivityRecord) -> dict:
    return {
        "platform": rec.platform.value,
        "category": rec.category.id,
        "timestamp": rec.timestamp,
        "context_id": rec.context_id,
        "attributes": dict(rec.attributes),
        "source_file": rec.source_file,
    }


def record_from_dict(data: Mapping) -> ActivityRecord:
    return ActivityRecord(
        platform=Platform.parse(data["platform"]),
        category=category(data["category"]),
        timestamp=data.get("timestamp"),
        context_id=data.get("context_id", ""),
        attributes=dict(data.get("attributes", {})),
        source_file=data.get("source_file", ""),
    )


def snapshot_to_dict(snapshot: DdpSnapshot) -> dict:
    """Canonical export document: the contract consumed by the dashboard."""
    return {
        "schema_version": EXPORT_SCHEMA_VERSION,
        "snapshot": {
            "platform": snapshot.platform.value,
            "account_alias": snapshot.account_alias,
            "request_time": snapshot.request_time,
            "file_manifest": [
                {"path": e.path, "size_bytes": e.size_bytes, "format": e.format}
                for e in snapshot.file_manifest
            ],
            "disclosure_texts": {
                kind: snapshot.disclosure_texts.get(kind) for kind in DISCLOSURE_KINDS
            },
        },
        "records": [record_to_dict(r) for r in snapshot.records],
    }


def snapshot_from_dict(data: Mapping) -> DdpSnapshot:
    version = data.get("schema_version")
    if version != EXPORT_SCHEMA_VERSION:
        raise ConfigurationError(
            f"unsupported canonical export schema_version: {version!r}"
        )
    snap = data["snapshot"]
    return DdpSnapshot(
        platform=Platform.parse(snap["platform"]),
        account_alias=snap["account_alias"],
        request_time=snap["request_time"],
        records=tuple(record_from_dict(r) for r in data["records"]),
        file_manifest=tuple(
            FileEntry(e["path"], e["size_bytes"], e["format"])
            for e in snap.get("file_manifest", [])
        ),
        disclosure_texts={
            k: v for k, v in snap.get("disclosure_texts", {}).items() if v is not None
        },
    )


def dump_json(obj: object) -> str:
    """Serialize export documents deterministically (keys keep insertion order)."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def save_snapshot(snapshot: DdpSnapshot, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(snapshot_to_dict(snapshot)))


def load_snapshot(path) -> DdpSnapshot:
    with open(path, "r", encoding="utf-8") as fh:
        return snapshot_from_dict(json.load(fh))


def iter_categories() -> Iterable[DataCategory]:
    return CATEGORIES.values()
