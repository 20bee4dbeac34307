"""Rule-based PII removal from raw DDP trees.

Scrubbing never happens in place: the input tree is copied to the output
directory with rule-listed files dropped and rule-listed keys replaced by
a redaction token. Files the rules do not touch are copied byte-identical.
The token keeps scrubbed files syntactically valid so reliability audits
still run on scrubbed donations.

Selector forms in key_paths:
    "a[].b.c"      JSON path; [] iterates a list, the last segment is the
                   scalar to replace (a non-scalar target is replaced as a
                   whole subtree, with a warning)
    "kv:Key Name"  'Key: value' line in TXT block files
"""

from __future__ import annotations

import json
import shutil
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

from .errors import ConfigurationError
from .model import Platform

RULES_SCHEMA_VERSION = "1"
DEFAULT_TOKEN = "__REDACTED__"


@dataclass(frozen=True)
class ScrubRuleset:
    platform: Platform
    key_paths: tuple[str, ...] = ()
    file_globs: tuple[str, ...] = ()
    redaction_token: str = DEFAULT_TOKEN
    # canonical attribute names checked/redacted when exports are written
    attribute_keys: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.redaction_token:
            raise ConfigurationError("redaction_token must be nonempty")
        for selector in self.key_paths:
            if selector.startswith("kv:"):
                if not selector[3:].strip():
                    raise ConfigurationError(f"empty kv selector: {selector!r}")
            elif not selector or selector.endswith("."):
                raise ConfigurationError(f"malformed selector: {selector!r}")


def load_ruleset(source) -> ScrubRuleset:
    if isinstance(source, Mapping):
        doc = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    if doc.get("schema_version") != RULES_SCHEMA_VERSION:
        raise ConfigurationError(
            f"unsupported scrub ruleset schema_version: {doc.get('schema_version')!r}"
        )
    return ScrubRuleset(
        platform=Platform.parse(doc["platform"]),
        key_paths=tuple(doc.get("key_paths", [])),
        file_globs=tuple(doc.get("file_globs", [])),
        redaction_token=doc.get("redaction_token", DEFAULT_TOKEN),
        attribute_keys=tuple(doc.get("attribute_keys", [])),
    )


def default_ruleset(platform: Platform) -> ScrubRuleset:
    if platform is Platform.GENERIC:
        return ScrubRuleset(platform=Platform.GENERIC)
    text = (
        resources.files("ddpaudit.data")
        .joinpath(f"scrub_rules/{platform.value}.json")
        .read_text("utf-8")
    )
    return load_ruleset(json.loads(text))


@dataclass(frozen=True)
class ScrubReport:
    removed_files: tuple[str, ...]
    redacted_keys: Mapping[str, int]  # selector -> values replaced
    records_before: Mapping[str, int]  # category -> record count
    records_after: Mapping[str, int]
    unmatched_rules: tuple[str, ...]
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "removed_files": {
                "count": len(self.removed_files),
                "paths": list(self.removed_files),
            },
            "redacted_keys": dict(self.redacted_keys),
            "records_before": dict(self.records_before),
            "records_after": dict(self.records_after),
            "unmatched_rules": list(self.unmatched_rules),
            "warnings": list(self.warnings),
        }


def _redact_json(node, segments: list[str], token: str, trail: str) -> tuple[int, list[str]]:
    """Replace the value at the selector path, counting replacements."""
    count = 0
    warnings: list[str] = []
    head = segments[0]
    iterate = head.endswith("[]")
    key = head[:-2] if iterate else head
    if not isinstance(node, Mapping) or key not in node:
        return 0, []
    target = node[key]
    if iterate:
        if not isinstance(target, list):
            return 0, []
        for item in target:
            got, warn = _redact_json(item, segments[1:], token, trail + key + "[].") \
                if len(segments) > 1 else (0, [])
            count += got
            warnings += warn
        return count, warnings
    if len(segments) > 1:
        return _redact_json(target, segments[1:], token, trail + key + ".")
    if isinstance(target, (Mapping, list)):
        node[key] = token  # structural redaction
        return 1, [f"selector targeted a non-scalar at {trail}{key}; subtree replaced"]
    if target != token:
        node[key] = token
        count = 1
    return count, warnings


def _redact_txt(text: str, keys: list[str], token: str) -> tuple[str, dict[str, int]]:
    counts = {k: 0 for k in keys}
    out_lines = []
    for line in text.splitlines():
        key, sep, value = line.partition(":")
        stripped = key.strip()
        if sep and stripped in counts and value.strip() not in ("", token):
            out_lines.append(f"{key}: {token}")
            counts[stripped] += 1
        else:
            out_lines.append(line)
    suffix = "\n" if text.endswith("\n") else ""
    return "\n".join(out_lines) + suffix, counts


def _category_counts(root: Path) -> dict[str, int]:
    """Best-effort per-category record counts via the default manifest."""
    from .parsing import default_manifest, detect_platform, parse_ddp

    try:
        platform = detect_platform(root)
        if platform is Platform.GENERIC:
            return {}
        result = parse_ddp(root, default_manifest(platform), "scrub-count")
    except Exception:
        return {}
    counts: dict[str, int] = {}
    for rec in result.snapshot.records:
        counts[rec.category.id] = counts.get(rec.category.id, 0) + 1
    return counts


def scrub(root, rules: ScrubRuleset, out_dir) -> ScrubReport:
    """Produce a scrubbed copy of the tree under out_dir.

    Idempotent: scrubbing an already-scrubbed tree changes nothing.
    """
    import fnmatch

    root = Path(root)
    out_dir = Path(out_dir)
    if out_dir.exists() and any(out_dir.iterdir()):
        raise ConfigurationError(f"output directory {out_dir} is not empty")
    out_dir.mkdir(parents=True, exist_ok=True)

    from .parsing.detect import tree_files

    files = tree_files(root)
    records_before = _category_counts(root)

    removed: list[str] = []
    warnings: list[str] = []
    json_selectors = [s for s in rules.key_paths if not s.startswith("kv:")]
    kv_keys = [s[3:] for s in rules.key_paths if s.startswith("kv:")]
    selector_counts: dict[str, int] = {s: 0 for s in rules.key_paths}
    glob_matches: dict[str, int] = {g: 0 for g in rules.file_globs}

    for rel in files:
        hit = [g for g in rules.file_globs if fnmatch.fnmatch(rel, g)]
        if hit:
            removed.append(rel)
            for g in hit:
                glob_matches[g] += 1
            continue
        src = root / rel
        dst = out_dir / rel
        dst.parent.mkdir(parents=True, exist_ok=True)
        suffix = Path(rel).suffix.lower()
        if suffix == ".json" and json_selectors:
            try:
                doc = json.loads(src.read_text("utf-8"))
            except json.JSONDecodeError:
                warnings.append(f"{rel}: malformed JSON copied verbatim")
                shutil.copyfile(src, dst)
                continue
            changed = 0
            for selector in json_selectors:
                got, warn = _redact_json(doc, selector.split("."), rules.redaction_token, "")
                selector_counts[selector] += got
                changed += got
                warnings += [f"{rel}: {w}" for w in warn]
            if changed:
                dst.write_text(
                    json.dumps(doc, indent=2, ensure_ascii=False) + "\n", "utf-8"
                )
            else:
                shutil.copyfile(src, dst)
        elif suffix == ".txt" and kv_keys:
            text = src.read_text("utf-8")
            new_text, counts = _redact_txt(text, kv_keys, rules.redaction_token)
            for key, n in counts.items():
                selector_counts["kv:" + key] += n
            if new_text != text:
                dst.write_text(new_text, "utf-8")
            else:
                shutil.copyfile(src, dst)
        else:
            shutil.copyfile(src, dst)

    unmatched = tuple(
        sorted(
            [s for s, n in selector_counts.items() if n == 0]
            + [g for g, n in glob_matches.items() if n == 0]
        )
    )
    return ScrubReport(
        removed_files=tuple(removed),
        redacted_keys=selector_counts,
        records_before=records_before,
        records_after=_category_counts(out_dir),
        unmatched_rules=unmatched,
        warnings=tuple(warnings),
    )


def find_unredacted(root, rules: ScrubRuleset) -> list[tuple[str, str]]:
    """Post-scrub check: (file, selector) pairs still carrying a non-token
    value for any rule-listed key anywhere under root."""
    from .parsing.detect import tree_files

    root = Path(root)
    json_selectors = [s for s in rules.key_paths if not s.startswith("kv:")]
    kv_keys = [s[3:] for s in rules.key_paths if s.startswith("kv:")]
    offenders: list[tuple[str, str]] = []
    for rel in tree_files(root):
        src = root / rel
        suffix = Path(rel).suffix.lower()
        if suffix == ".json" and json_selectors:
            try:
                doc = json.loads(src.read_text("utf-8"))
            except json.JSONDecodeError:
                continue
            for selector in json_selectors:
                if _selector_has_raw_value(doc, selector.split("."), rules.redaction_token):
                    offenders.append((rel, selector))
        elif suffix == ".txt" and kv_keys:
            for line in src.read_text("utf-8").splitlines():
                key, sep, value = line.partition(":")
                if sep and key.strip() in kv_keys and value.strip() not in ("", rules.redaction_token):
                    offenders.append((rel, "kv:" + key.strip()))
    return offenders


def _selector_has_raw_value(node, segments: list[str], token: str) -> bool:
    head = segments[0]
    iterate = head.endswith("[]")
    key = head[:-2] if iterate else head
    if not isinstance(node, Mapping) or key not in node:
        return False
    target = node[key]
    if iterate:
        if not isinstance(target, list):
            return False
        return any(
            _selector_has_raw_value(item, segments[1:], token) for item in target
        ) if len(segments) > 1 else False
    if len(segments) > 1:
        return _selector_has_raw_value(target, segments[1:], token)
    return target != token


def redact_export_attributes(document: dict, rules: ScrubRuleset) -> int:
    """Write barrier for CLI outputs: replace rule-listed canonical
    attribute values inside a canonical export document, in place."""
    if not rules.attribute_keys:
        return 0
    count = 0
    for record in document.get("records", []):
        attrs = record.get("attributes", {})
        for key in rules.attribute_keys:
            value = attrs.get(key)
            if value and value != rules.redaction_token:
                attrs[key] = rules.redaction_token
                count += 1
    return count
