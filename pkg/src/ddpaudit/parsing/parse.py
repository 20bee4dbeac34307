"""Manifest-driven parsing of DDP trees (or zip archives) into snapshots."""

from __future__ import annotations

import csv
import fnmatch
import io
import json
import shutil
import tempfile
import zipfile
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any, Mapping, Optional

from ..errors import ConfigurationError, NotADdpError
from ..model import ActivityRecord, DdpSnapshot, FileEntry, RAW_PREFIX
from .detect import tree_files
from .html_tables import parse_html_tables
from .manifest import ABSENT, ManifestEntry, ParserManifest

_EXT_FORMAT = {".json": "json", ".csv": "csv", ".txt": "txt", ".html": "html", ".htm": "html"}


@dataclass(frozen=True)
class ParseIssue:
    level: str  # "warning" | "error"
    path: str
    message: str

    def __str__(self) -> str:
        return f"[{self.level}] {self.path}: {self.message}"


@dataclass(frozen=True)
class ParseResult:
    snapshot: DdpSnapshot
    issues: tuple[ParseIssue, ...]
    entry_counts: tuple[int, ...]  # records parsed per manifest entry

    @property
    def errors(self) -> tuple[ParseIssue, ...]:
        return tuple(i for i in self.issues if i.level == "error")

    @property
    def warnings(self) -> tuple[ParseIssue, ...]:
        return tuple(i for i in self.issues if i.level == "warning")


def _tz_from_assumption(tz: str) -> timezone:
    if tz.upper() == "UTC":
        return timezone.utc
    sign = 1 if tz.startswith("+") else -1
    hours, _, minutes = tz[1:].partition(":")
    return timezone(sign * timedelta(hours=int(hours), minutes=int(minutes or 0)))


def parse_timestamp(value, fmt: str, tz: str) -> tuple[Optional[int], Optional[str]]:
    """Normalize a raw timestamp to UTC epoch seconds.

    Naive formats get the manifest's timezone assumption attached. Returns
    (epoch_seconds, original_string); the original is kept only when the
    source value was a string carrying its own notation.
    """
    if value is None or value == "":
        return None, None
    if fmt == "epoch":
        return int(value), None
    if fmt == "epoch_ms":
        return int(value) // 1000, None
    text = str(value)
    if fmt == "iso8601":
        dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    else:
        dt = datetime.strptime(text, fmt)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=_tz_from_assumption(tz))
    return int(dt.timestamp()), text


def _walk(node: Any, path: str) -> Any:
    if path == "":
        return node
    for part in path.split("."):
        if isinstance(node, Mapping) and part in node:
            node = node[part]
        elif isinstance(node, list) and part.isdigit() and int(part) < len(node):
            node = node[int(part)]
        else:
            return None
    return node


def _stringify(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _rows_from_json(doc: Any, record_path: str) -> Optional[list]:
    node = _walk(doc, record_path)
    if node is None:
        return None
    if isinstance(node, list):
        return node
    if isinstance(node, Mapping):
        return [node]
    return None


def _rows_from_txt(text: str) -> list[dict[str, str]]:
    # Blocks of "Key: value" lines separated by blank lines.
    rows = []
    for chunk in text.split("\n\n"):
        row: dict[str, str] = {}
        for line in chunk.splitlines():
            key, sep, value = line.partition(":")
            if sep and key.strip():
                row[key.strip()] = value.strip()
        if row:
            rows.append(row)
    return rows


def _where_allows(where: Optional[Mapping], row: Any) -> bool:
    if not where:
        return True
    value = _walk(row, where["path"])
    if "equals" in where:
        return value is not None and _stringify(value) == where["equals"]
    if where.get("exists"):
        return value is not None
    return value is not None


def _resolve(mapping, row: Any) -> tuple[Any, list[str]]:
    """Evaluate one field mapping against a raw row.

    Returns (value, consumed top-level path segments)."""
    if isinstance(mapping, str):
        if mapping == ABSENT:
            return None, []
        return _walk(row, mapping), [mapping.split(".")[0]]
    if "const" in mapping:
        return mapping["const"], []
    if "exists" in mapping:
        return (
            "true" if _walk(row, mapping["exists"]) is not None else "false",
            [mapping["exists"].split(".")[0]],
        )
    value = _walk(row, mapping["path"])
    consumed = [mapping["path"].split(".")[0]]
    prefix = mapping.get("strip_prefix")
    if prefix and isinstance(value, str) and value.startswith(prefix):
        value = value[len(prefix):]
    return value, consumed


def _map_row(
    entry: ManifestEntry, row: Any, platform, source_file: str
) -> tuple[Optional[ActivityRecord], list[str]]:
    problems: list[str] = []
    consumed: set[str] = set()
    context_id = ""
    timestamp = None
    attributes: dict[str, str] = {}

    for target, mapping in entry.fields.items():
        value, used = _resolve(mapping, row)
        consumed.update(used)
        if target == "timestamp":
            if value is None:
                continue
            try:
                timestamp, original = parse_timestamp(
                    value, entry.timestamp_format, entry.timezone
                )
            except (ValueError, OverflowError) as exc:
                problems.append(f"unparseable timestamp {value!r}: {exc}")
                continue
            if timestamp is not None and timestamp <= 0:
                problems.append(f"non-positive timestamp {value!r} dropped")
                timestamp = None
            elif original is not None:
                attributes[RAW_PREFIX + "timestamp_original"] = original
        elif target == "context_id":
            context_id = _stringify(value) if value is not None else ""
        else:
            if value is not None:
                attributes[target] = _stringify(value)

    # unknown top-level scalar keys survive under the reserved raw. prefix
    if isinstance(row, Mapping):
        for key, value in row.items():
            if key in consumed or isinstance(value, (Mapping, list)):
                continue
            if value is not None:
                attributes.setdefault(RAW_PREFIX + key, _stringify(value))

    record = ActivityRecord(
        platform=platform,
        category=entry.category,
        timestamp=timestamp,
        context_id=context_id,
        attributes=attributes,
        source_file=source_file,
    )
    return record, problems


def _load_rows(entry: ManifestEntry, path: Path) -> tuple[Optional[list], list[str]]:
    warnings: list[str] = []
    if entry.format == "json":
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        rows = _rows_from_json(doc, entry.record_path)
        if rows is None:
            warnings.append(f"record_path {entry.record_path!r} missing, zero records")
            rows = []
        return rows, warnings
    text = path.read_text("utf-8")
    if entry.format == "csv":
        return list(csv.DictReader(io.StringIO(text))), warnings
    if entry.format == "txt":
        return _rows_from_txt(text), warnings
    rows, html_warnings = parse_html_tables(text, entry.record_selector)
    return rows, warnings + html_warnings


@contextmanager
def materialize_tree(path):
    """Yield a directory for path, extracting .zip archives to a temp tree
    (removed afterwards). A single wrapping directory inside the archive is
    stepped into."""
    path = Path(path)
    if path.is_file() and path.suffix == ".zip":
        tmp = Path(tempfile.mkdtemp(prefix="ddp-"))
        try:
            with zipfile.ZipFile(path) as zf:
                zf.extractall(tmp)
            children = list(tmp.iterdir())
            if len(children) == 1 and children[0].is_dir():
                yield children[0]
            else:
                yield tmp
        finally:
            shutil.rmtree(tmp, ignore_errors=True)
    else:
        yield path


def parse_ddp(
    root,
    manifest: ParserManifest,
    account_alias: str,
    *,
    request_time: Optional[int] = None,
) -> ParseResult:
    """Parse a DDP directory tree or .zip into a canonical snapshot.

    Every file matched by a manifest entry contributes records; malformed
    files become per-file errors and parsing continues. A tree matching
    nothing at all is not a DDP.
    """
    with materialize_tree(root) as tree:
        return _parse_tree(tree, manifest, account_alias, request_time)


def _parse_tree(
    root: Path,
    manifest: ParserManifest,
    account_alias: str,
    request_time: Optional[int],
) -> ParseResult:
    files = tree_files(root)
    issues: list[ParseIssue] = []
    records: list[ActivityRecord] = []
    entry_counts = [0] * len(manifest.entries)
    matched: set[str] = set()
    disclosure_texts: dict[str, str] = {}

    for i, entry in enumerate(manifest.entries):
        for rel in files:
            if not fnmatch.fnmatch(rel, entry.glob):
                continue
            matched.add(rel)
            try:
                rows, row_warnings = _load_rows(entry, root / rel)
            except (json.JSONDecodeError, UnicodeDecodeError, csv.Error) as exc:
                issues.append(ParseIssue("error", rel, f"malformed {entry.format}: {exc}"))
                continue
            for message in row_warnings:
                issues.append(ParseIssue("warning", rel, message))
            for row in rows:
                if not _where_allows(entry.where, row):
                    continue
                try:
                    record, problems = _map_row(entry, row, manifest.platform, rel)
                except ConfigurationError as exc:
                    issues.append(ParseIssue("error", rel, str(exc)))
                    continue
                for message in problems:
                    issues.append(ParseIssue("warning", rel, message))
                records.append(record)
                entry_counts[i] += 1

    for kind, pattern in manifest.disclosures.items():
        for rel in files:
            if fnmatch.fnmatch(rel, pattern):
                matched.add(rel)
                text = (root / rel).read_text("utf-8").strip()
                if text:
                    disclosure_texts[kind] = text

    if not matched:
        raise NotADdpError(f"{root}: no file matched any manifest entry; not a DDP")

    unmatched = [rel for rel in files if rel not in matched]
    if unmatched:
        issues.append(
            ParseIssue(
                "warning",
                "<tree>",
                "files not covered by the manifest: " + ", ".join(unmatched),
            )
        )

    manifest_entries = tuple(
        FileEntry(
            path=rel,
            size_bytes=(root / rel).stat().st_size,
            format=_EXT_FORMAT.get(Path(rel).suffix.lower(), "txt"),
        )
        for rel in files
    )
    stamps = [r.timestamp for r in records if r.timestamp is not None]
    if request_time is None:
        request_time = max(stamps) if stamps else 0

    snapshot = DdpSnapshot(
        platform=manifest.platform,
        account_alias=account_alias,
        request_time=request_time,
        records=tuple(records),
        file_manifest=manifest_entries,
        disclosure_texts=disclosure_texts,
    )
    for message in snapshot.warnings():
        issues.append(ParseIssue("warning", "<snapshot>", message))
    return ParseResult(snapshot, tuple(issues), tuple(entry_counts))
