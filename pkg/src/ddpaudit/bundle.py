"""Dashboard export bundles: canonical records plus precomputed aggregates
and transparency metadata, in one versioned JSON document the local-first
viewer can load without any other input."""

from __future__ import annotations

import json
from collections import Counter
from importlib import resources
from typing import Mapping, Optional

from .errors import ConfigurationError
from .model import DdpSnapshot, snapshot_to_dict
from .reliability import date_key

BUNDLE_SCHEMA_VERSION = "1"
PLACEHOLDER = "explanation unavailable"


def load_knowledge_base(source=None) -> dict:
    if source is None:
        doc = json.loads(
            resources.files("ddpaudit.data")
            .joinpath("knowledge_base.json")
            .read_text("utf-8")
        )
    elif isinstance(source, Mapping):
        doc = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if doc.get("schema_version") != "1":
        raise ConfigurationError(
            f"unsupported knowledge base schema_version: {doc.get('schema_version')!r}"
        )
    return doc


def _top(counter: Counter, limit: int = 10) -> list[list]:
    ranked = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))[:limit]
    return [[key, count] for key, count in ranked]


def _category_aggregates(records) -> dict:
    contexts = Counter(r.context_id for r in records if r.context_id)
    authors = Counter(
        r.attributes["author_name"] for r in records if r.attributes.get("author_name")
    )
    per_day: Counter = Counter()
    per_hour = [0] * 24
    for rec in records:
        if rec.timestamp is None:
            per_day["unknown"] += 1
        else:
            per_day[date_key(rec.timestamp, "day")] += 1
            per_hour[(rec.timestamp % 86400) // 3600] += 1
    return {
        "total": len(records),
        "top_contexts": _top(contexts),
        "top_authors": _top(authors),
        "per_day": {day: per_day[day] for day in sorted(per_day)},
        "per_hour": per_hour,
    }


def build_bundle(
    snapshot: DdpSnapshot,
    *,
    knowledge_base: Optional[Mapping] = None,
    reports: Optional[Mapping] = None,
    generated_at: str = "",
) -> tuple[dict, list[str]]:
    """Assemble the ExportBundle document plus warnings.

    Aggregates are derived purely from the records (the dashboard
    recomputes them for filtered windows); transparency entries come from
    the curated knowledge base, with explicit placeholders when a present
    category has no entry.
    """
    kb = load_knowledge_base(knowledge_base)
    platform_kb = kb.get("entries", {}).get(snapshot.platform.value, {})
    warnings: list[str] = []

    categories_present = sorted(snapshot.categories_present())
    by_category = {
        cat_id: [r for r in snapshot.records if r.category.id == cat_id]
        for cat_id in categories_present
    }

    aggregates = {
        "categories": {
            cat_id: _category_aggregates(records)
            for cat_id, records in by_category.items()
        }
    }
    device_counts = Counter(
        r.attributes["device_model"]
        for r in by_category.get("login_history", [])
        if r.attributes.get("device_model")
    )
    total_devices = sum(device_counts.values())
    aggregates["device_share"] = {
        "counts": dict(sorted(device_counts.items())),
        "share": {
            model: count / total_devices
            for model, count in sorted(device_counts.items())
        },
    }
    search_days = {
        day: count
        for day, count in aggregates["categories"]
        .get("search", {"per_day": {}})["per_day"]
        .items()
        if day != "unknown"
    }
    aggregates["searches_per_day"] = {
        "per_day": search_days,
        "mean_per_active_day": (
            sum(search_days.values()) / len(search_days) if search_days else 0.0
        ),
    }

    transparency = {}
    for cat_id in categories_present:
        entry = platform_kb.get(cat_id)
        if entry is None:
            warnings.append(
                f"no knowledge base entry for {snapshot.platform.value}/{cat_id}; "
                "placeholders emitted"
            )
            transparency[cat_id] = {
                "explanations": {},
                "purpose": PLACEHOLDER,
                "retention": PLACEHOLDER,
                "access": PLACEHOLDER,
            }
        else:
            transparency[cat_id] = {
                "explanations": dict(entry.get("explanations", {})),
                "purpose": entry.get("purpose", PLACEHOLDER),
                "retention": entry.get("retention", PLACEHOLDER),
                "access": entry.get("access", PLACEHOLDER),
            }

    export = snapshot_to_dict(snapshot)
    document = {
        "schema_version": BUNDLE_SCHEMA_VERSION,
        "generated_at": generated_at,
        "snapshot": export["snapshot"],
        "records": export["records"],
        "aggregates": aggregates,
        "transparency": transparency,
        "reports": dict(reports) if reports else None,
        "warnings": warnings,
    }
    return document, warnings
