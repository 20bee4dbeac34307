"""Declarative parser manifests.

A manifest tells the parser which files inside a DDP tree belong to which
data category and how raw fields map onto the canonical record shape.
Manifests are data, not code: platform layouts drift, so the shipped ones
are user-overridable and carry their own version and timezone assumptions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Mapping, Optional, Union

from ..errors import ConfigurationError
from ..model import FILE_FORMATS, DataCategory, Platform, category

MANIFEST_SCHEMA_VERSION = "1"

ABSENT = "absent"

# Mapping value forms:
#   "absent"                          field intentionally not in this source
#   "dotted.path"                     value at path inside the raw row
#   {"path": p, "strip_prefix": s}    value at p with a leading literal removed
#   {"const": v}                      fixed value for every row
#   {"exists": p}                     "true"/"false" by presence of path p
FieldMapping = Union[str, Mapping[str, str]]


@dataclass(frozen=True)
class ManifestEntry:
    glob: str
    format: str
    category: DataCategory
    fields: Mapping[str, FieldMapping]
    record_path: str = ""
    record_selector: str = ""
    timestamp_format: str = "epoch"
    timezone: str = "UTC"
    where: Optional[Mapping[str, Any]] = None

    def __post_init__(self) -> None:
        if self.format not in FILE_FORMATS:
            raise ConfigurationError(f"entry {self.glob!r}: unknown format {self.format!r}")
        if self.format == "html" and not self.record_selector:
            raise ConfigurationError(
                f"entry {self.glob!r}: html entries need a record_selector"
            )
        missing = [
            f for f in self.category.min_fields
            if f not in self.fields
        ]
        if missing:
            raise ConfigurationError(
                f"entry {self.glob!r}: mapping must cover minimum fields of "
                f"{self.category.id!r} or declare them absent; missing {missing}"
            )
        for target in self.fields:
            if target in ("context_id", "timestamp"):
                continue
            if target not in self.category.attribute_keys:
                raise ConfigurationError(
                    f"entry {self.glob!r}: {target!r} is not a registered attribute "
                    f"of category {self.category.id!r}"
                )


@dataclass(frozen=True)
class ParserManifest:
    platform: Platform
    signatures: tuple[str, ...]
    entries: tuple[ManifestEntry, ...]
    disclosures: Mapping[str, str] = field(default_factory=dict)
    version: str = MANIFEST_SCHEMA_VERSION


def _entry_from_dict(row: Mapping, default_tz: str) -> ManifestEntry:
    return ManifestEntry(
        glob=row["glob"],
        format=row["format"],
        category=category(row["category"]),
        fields=dict(row.get("fields", {})),
        record_path=row.get("record_path", ""),
        record_selector=row.get("record_selector", ""),
        timestamp_format=row.get("timestamp_format", "epoch"),
        timezone=row.get("timezone", default_tz),
        where=row.get("where"),
    )


def load_manifest(source) -> ParserManifest:
    """Load a manifest from a JSON document (path or parsed dict)."""
    if isinstance(source, Mapping):
        doc = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if doc.get("schema_version") != MANIFEST_SCHEMA_VERSION:
        raise ConfigurationError(
            f"unsupported manifest schema_version: {doc.get('schema_version')!r}"
        )
    default_tz = doc.get("timezone", "UTC")
    return ParserManifest(
        platform=Platform.parse(doc["platform"]),
        signatures=tuple(doc.get("signatures", [])),
        entries=tuple(_entry_from_dict(row, default_tz) for row in doc["entries"]),
        disclosures=dict(doc.get("disclosures", {})),
        version=doc["schema_version"],
    )


def default_manifest(platform: Platform) -> ParserManifest:
    if platform is Platform.GENERIC:
        raise ConfigurationError("no default manifest for the generic platform")
    text = (
        resources.files("ddpaudit.data")
        .joinpath(f"manifests/{platform.value}.json")
        .read_text("utf-8")
    )
    return load_manifest(json.loads(text))


def known_manifests() -> list[ParserManifest]:
    return [
        default_manifest(p)
        for p in (Platform.TIKTOK, Platform.INSTAGRAM, Platform.YOUTUBE)
    ]
