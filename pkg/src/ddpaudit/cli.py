"""Single command-line entry point wiring the toolkit together.

Exit codes: 0 success, 1 audit found indicators (still a valid run),
2 input/parse failure, 3 configuration error. Every subcommand is
deterministic for identical inputs and flags; the only wall-clock value
in any output is the generated_at stamp.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import __version__
from .bundle import build_bundle, load_knowledge_base
from .compliance import (
    coverage,
    default_matrix,
    disclosure_audit,
    load_matrix,
    render_report,
)
from .errors import ConfigurationError, DdpError
from .har import (
    EventKind,
    load_session_log,
    session_log_to_dict,
)
from .model import (
    Platform,
    dump_json,
    load_snapshot,
    snapshot_from_dict,
    snapshot_to_dict,
)
from .parsing import (
    default_manifest,
    detect_platform,
    load_manifest,
    materialize_tree,
    parse_ddp,
)
from .reliability import (
    MatchConfig,
    cohort_stats,
    completeness,
    correctness,
    duration,
    grouped_cohort_stats,
    intra_consistency,
)
from .scrub import (
    default_ruleset,
    find_unredacted,
    load_ruleset,
    redact_export_attributes,
    scrub,
)
from .simulate import (
    KIND_CATEGORY,
    CohortSpec,
    DefectSpec,
    SessionShape,
    cohort_labels,
    synth_cohort,
    synth_pair,
)

EXIT_OK = 0
EXIT_INDICATORS = 1
EXIT_INPUT = 2
EXIT_CONFIG = 3

_SCHEMAS = """\
Accepted file schema versions:
  canonical export     1   (parse/export-dashboard/audit inputs)
  session log          1   (ground truth)
  parser manifest      1   (--manifest)
  HAR extraction rules 1
  expectation matrix   1   (--matrix)
  scrub ruleset        1   (--rules)
  knowledge base       1   (--knowledge-base)
  export bundle        1   (dashboard input)
"""


def _err(message: str) -> None:
    click.echo(message, err=True)


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _fail(code: int, message: str) -> None:
    _err(f"error: {message}")
    sys.exit(code)


def _guarded(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigurationError as exc:
        _fail(EXIT_CONFIG, str(exc))
    except DdpError as exc:
        _fail(EXIT_INPUT, str(exc))
    except (OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_INPUT, str(exc))


@click.group(epilog=_SCHEMAS)
@click.version_option(__version__)
def main() -> None:
    """Parse social-media data download packages, audit their reliability
    and GDPR Article 15 disclosure coverage, and export dashboard bundles.

    All processing is local; no subcommand performs network access."""


# ---------------------------------------------------------------- parse

@main.command("parse")
@click.argument("ddp_path", type=click.Path(exists=True))
@click.option("--platform", "platform_id",
              type=click.Choice([p.value for p in Platform if p is not Platform.GENERIC]),
              help="Skip detection and use this platform's manifest.")
@click.option("--manifest", "manifest_path", type=click.Path(exists=True),
              help="Override the shipped manifest with a custom one.")
@click.option("--alias", default="anon", show_default=True,
              help="Pseudonym written into the export; never a real username.")
@click.option("--request-time", type=int, default=None,
              help="UTC epoch seconds of the data request (default: newest record).")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Export file [default: <platform>_export.json].")
@click.option("--allow-pii", is_flag=True,
              help="Skip the scrub-ruleset write barrier on the export.")
def cmd_parse(ddp_path, platform_id, manifest_path, alias, request_time, out_path, allow_pii):
    """Parse a DDP tree or .zip into a canonical export JSON."""

    def body():
        with materialize_tree(ddp_path) as tree:
            if manifest_path:
                manifest = load_manifest(manifest_path)
            elif platform_id:
                manifest = default_manifest(Platform.parse(platform_id))
            else:
                detected = detect_platform(tree)
                if detected is Platform.GENERIC:
                    raise DdpError(f"{ddp_path}: not a DDP (no manifest signature matched)")
                manifest = default_manifest(detected)
            result = parse_ddp(tree, manifest, alias, request_time=request_time)

        document = snapshot_to_dict(result.snapshot)
        if not allow_pii:
            redacted = redact_export_attributes(
                document, default_ruleset(result.snapshot.platform)
            )
            if redacted:
                _err(f"write barrier: {redacted} attribute value(s) redacted "
                     "(use --allow-pii to keep them)")
        target = Path(out_path or f"{manifest.platform.value}_export.json")
        _write(target, dump_json(document))

        for issue in result.issues:
            _err(str(issue))
        _err(f"wrote {target} ({len(result.snapshot.records)} records)")
        return EXIT_INPUT if result.errors else EXIT_OK

    sys.exit(_guarded(body))


# ----------------------------------------------------- audit-reliability

@main.command("audit-reliability")
@click.option("--log", "log_path", type=click.Path(exists=True), required=True,
              help="Ground-truth session log JSON.")
@click.option("--ddp", "ddp_path", type=click.Path(exists=True), required=True,
              help="Canonical export JSON to audit.")
@click.option("--later", "later_path", type=click.Path(exists=True), default=None,
              help="A later snapshot of the same account: adds the retention section.")
@click.option("--kind", type=click.Choice([k.value for k in EventKind]),
              default="watch", show_default=True)
@click.option("--tolerance", type=int, default=5, show_default=True,
              help="Timestamp match tolerance in seconds.")
@click.option("--context-key", type=click.Choice(["content_id", "author_id", "query"]),
              default="content_id", show_default=True)
@click.option("--granularity", type=click.Choice(["second", "minute", "day"]),
              default="day", show_default=True, help="Date-aspect key granularity.")
@click.option("--out", "out_dir", type=click.Path(), default=".", show_default=True)
@click.option("--figures/--no-figures", default=True, show_default=True,
              help="Render metric figures next to the JSON report.")
def cmd_audit_reliability(log_path, ddp_path, later_path, kind, tolerance,
                          context_key, granularity, out_dir, figures):
    """Audit completeness, correctness, and snapshot retention."""

    def body():
        log = load_session_log(Path(log_path))
        snapshot = load_snapshot(Path(ddp_path))
        cfg = MatchConfig(
            timestamp_tolerance_seconds=tolerance,
            context_key=context_key,
            date_granularity=granularity,
        )
        event_kind = EventKind.parse(kind)
        comp = completeness(log, snapshot, cfg, event_kind)
        jac = correctness(log, snapshot, cfg, event_kind)
        cat_id = KIND_CATEGORY[event_kind]
        dur = duration(snapshot, cat_id)

        sections = {
            "completeness": comp.to_dict(),
            "jaccard": jac.to_dict(),
            "retention": None,
            "durations": {
                "category": cat_id,
                "status": dur.status,
                "days": dur.days,
            },
            "config": {
                "kind": kind,
                "timestamp_tolerance_seconds": tolerance,
                "context_key": context_key,
                "date_granularity": granularity,
            },
        }
        indicators = (comp.fraction is not None and comp.fraction < 1.0) or any(
            v < 1.0 for v in (jac.date, jac.context, jac.overall)
        )
        if later_path:
            later = load_snapshot(Path(later_path))
            retention = intra_consistency(snapshot, later, cfg, event_kind)
            sections["retention"] = retention.to_dict()
            if retention.overall is not None and retention.overall < 1.0:
                indicators = True

        out = Path(out_dir)
        _write(out / "reliability_report.json", dump_json(sections))
        if figures:
            from .figures import save_metrics_figure

            save_metrics_figure(sections, out / "reliability_metrics.png")
        _err(f"wrote {out / 'reliability_report.json'}")
        return EXIT_INDICATORS if indicators else EXIT_OK

    sys.exit(_guarded(body))


# ------------------------------------------------------ audit-compliance

@main.command("audit-compliance")
@click.option("--ddp", "ddp_path", type=click.Path(exists=True), required=True,
              help="Canonical export JSON to audit.")
@click.option("--matrix", "matrix_path", type=click.Path(exists=True), default=None,
              help="Custom expectation matrix (default: shipped Dec-2024 table).")
@click.option("--reliability", "reliability_path", type=click.Path(exists=True),
              default=None, help="Embed an existing reliability report.")
@click.option("--format", "formats", type=click.Choice(["md", "json", "both"]),
              default="both", show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default=".", show_default=True)
def cmd_audit_compliance(ddp_path, matrix_path, reliability_path, formats, out_dir):
    """Audit expectation-matrix coverage and Article 15(1) disclosures."""

    def body():
        snapshot = load_snapshot(Path(ddp_path))
        matrix = load_matrix(matrix_path) if matrix_path else default_matrix()
        report = coverage(snapshot, matrix)
        findings = disclosure_audit(snapshot)
        reliability_sections = None
        if reliability_path:
            with open(reliability_path, "r", encoding="utf-8") as fh:
                reliability_sections = json.load(fh)
        assumptions = {
            "field_population_threshold": report.field_threshold,
            "matrix_captured_at": matrix.captured_at,
            "timezone_normalization": "all timestamps normalized to UTC epoch seconds "
            "using per-manifest timezone assumptions",
        }
        document = render_report(
            report,
            findings,
            reliability_sections,
            assumptions=assumptions,
            generated_at=_now(),
        )
        out = Path(out_dir)
        if formats in ("md", "both"):
            _write(out / "compliance_report.md", document.markdown + "\n")
        if formats in ("json", "both"):
            _write(out / "compliance_report.json", dump_json(document.data))
        _err(f"wrote compliance report to {out}")
        indicators = any(r.verdict == "falls_short" for r in report.rows) or any(
            f.status == "absent" for f in findings
        )
        return EXIT_INDICATORS if indicators else EXIT_OK

    sys.exit(_guarded(body))


# ----------------------------------------------------------------- cohort

@main.command("cohort")
@click.argument("exports_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--category", "category_id", default="watch", show_default=True)
@click.option("--group-by", "labels_path", type=click.Path(exists=True), default=None,
              help="JSON file mapping account alias -> group label (e.g. country).")
@click.option("--min-age-days", type=float, default=None,
              help="Keep only accounts at least this old.")
@click.option("--out", "out_dir", type=click.Path(), default=".", show_default=True)
@click.option("--figures/--no-figures", default=True, show_default=True)
def cmd_cohort(exports_dir, category_id, labels_path, min_age_days, out_dir, figures):
    """Inter-user duration statistics over a directory of exports."""

    def body():
        paths = sorted(Path(exports_dir).glob("*.json"))
        if not paths:
            raise DdpError(f"{exports_dir}: no export JSON files found")
        snapshots = [load_snapshot(p) for p in paths]
        overall = cohort_stats(
            snapshots, category_id, min_account_age_days=min_age_days
        )
        stats_by_label = {"all": overall}
        if labels_path:
            with open(labels_path, "r", encoding="utf-8") as fh:
                labels = json.load(fh)
            stats_by_label.update(
                grouped_cohort_stats(
                    snapshots, category_id, labels, min_account_age_days=min_age_days
                )
            )

        out = Path(out_dir)
        document = {
            "schema_version": "1",
            "category": category_id,
            "min_account_age_days": min_age_days,
            "groups": {label: s.to_dict() for label, s in sorted(stats_by_label.items())},
        }
        _write(out / "durations.json", dump_json(document))

        lines = ["group,duration_days,cumulative_fraction"]
        for label in sorted(stats_by_label):
            for days, fraction in stats_by_label[label].cdf_points:
                lines.append(f"{label},{days},{fraction}")
        _write(out / "cdf_points.csv", "\n".join(lines) + "\n")

        if figures:
            from .figures import save_cdf_figure

            save_cdf_figure(stats_by_label, out / "duration_cdf.png")
        _err(f"wrote cohort stats for {len(snapshots)} exports to {out}")
        return EXIT_OK

    sys.exit(_guarded(body))


# ------------------------------------------------------------------ scrub

@main.command("scrub")
@click.argument("ddp_path", type=click.Path(exists=True))
@click.option("--out", "out_dir", type=click.Path(), required=True,
              help="Directory for the scrubbed copy (must be empty).")
@click.option("--rules", "rules_path", type=click.Path(exists=True), default=None,
              help="Custom scrub ruleset (default: shipped per-platform rules).")
@click.option("--report", "report_path", type=click.Path(), default=None,
              help="Scrub report path [default: <out>.scrub_report.json].")
@click.option("--allow-unmatched-rules", is_flag=True,
              help="Do not fail when a rule matched nothing.")
def cmd_scrub(ddp_path, out_dir, rules_path, report_path, allow_unmatched_rules):
    """Remove rule-listed PII keys and files from a DDP copy."""

    def body():
        with materialize_tree(ddp_path) as tree:
            if rules_path:
                rules = load_ruleset(rules_path)
            else:
                rules = default_ruleset(detect_platform(tree))
            report = scrub(tree, rules, out_dir)
        target = Path(report_path or (str(Path(out_dir)) + ".scrub_report.json"))
        _write(target, dump_json(report.to_dict()))
        for warning in report.warnings:
            _err(warning)
        _err(f"scrubbed tree at {out_dir}; report at {target}")
        if report.unmatched_rules and not allow_unmatched_rules:
            _err(
                "rules matched nothing (possible drift): "
                + ", ".join(report.unmatched_rules)
            )
            return EXIT_CONFIG
        return EXIT_OK

    sys.exit(_guarded(body))


# ------------------------------------------------------- export-dashboard

@main.command("export-dashboard")
@click.option("--ddp", "ddp_path", type=click.Path(exists=True), required=True,
              help="Canonical export JSON.")
@click.option("--knowledge-base", "kb_path", type=click.Path(exists=True), default=None)
@click.option("--reliability", "reliability_path", type=click.Path(exists=True), default=None)
@click.option("--compliance", "compliance_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", type=click.Path(), default="bundle.json",
              show_default=True)
@click.option("--allow-pii", is_flag=True,
              help="Skip the scrub-ruleset write barrier on the bundle.")
def cmd_export_dashboard(ddp_path, kb_path, reliability_path, compliance_path,
                         out_path, allow_pii):
    """Build the ExportBundle consumed by the local dashboard."""

    def body():
        snapshot = load_snapshot(Path(ddp_path))
        kb = load_knowledge_base(kb_path) if kb_path else None
        reports = {}
        if reliability_path:
            with open(reliability_path, "r", encoding="utf-8") as fh:
                reports["reliability"] = json.load(fh)
        if compliance_path:
            with open(compliance_path, "r", encoding="utf-8") as fh:
                reports["compliance"] = json.load(fh)
        document, warnings = build_bundle(
            snapshot,
            knowledge_base=kb,
            reports=reports or None,
            generated_at=_now(),
        )
        if not allow_pii:
            redacted = redact_export_attributes(document, default_ruleset(snapshot.platform))
            if redacted:
                _err(f"write barrier: {redacted} attribute value(s) redacted")
        for warning in warnings:
            _err(warning)
        _write(Path(out_path), dump_json(document))
        _err(f"wrote {out_path}")
        return EXIT_OK

    sys.exit(_guarded(body))


# ------------------------------------------------------------------ synth

@main.command("synth")
@click.argument("spec_file", type=click.Path(exists=True))
@click.option("--out", "out_dir", type=click.Path(), default=".", show_default=True)
def cmd_synth(spec_file, out_dir):
    """Generate a fixture pair or cohort from a synthesis spec file."""

    def body():
        with open(spec_file, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
        out = Path(out_dir)
        kind = spec.get("kind")
        if kind == "pair":
            defects = DefectSpec(**spec.get("defects", {}))
            shape = SessionShape(**spec.get("shape", {}))
            log, snapshot, truth = synth_pair(
                spec["n_events"],
                defects,
                Platform.parse(spec.get("platform", "tiktok")),
                kind=EventKind.parse(spec.get("event_kind", "watch")),
                shape=shape,
            )
            _write(out / "session_log.json", dump_json(session_log_to_dict(log)))
            _write(out / "ddp_export.json", dump_json(snapshot_to_dict(snapshot)))
            _write(out / "injected_truth.json", dump_json(truth.to_dict()))
            _err(f"wrote pair ({spec['n_events']} events, "
                 f"{len(truth.dropped)} dropped) to {out}")
            return EXIT_OK
        if kind == "cohort":
            cohort_spec = CohortSpec(
                n_users=spec["spec"]["n_users"],
                duration_modes=tuple(tuple(m) for m in spec["spec"]["duration_modes"]),
                category=spec["spec"].get("category", "watch"),
                country_labels=tuple(spec["spec"].get("country_labels", [])),
                seed=spec["spec"].get("seed", 0),
                account_age_days=spec["spec"].get("account_age_days"),
            )
            snapshots = synth_cohort(cohort_spec)
            for snapshot in snapshots:
                _write(
                    out / "cohort" / f"{snapshot.account_alias}.json",
                    dump_json(snapshot_to_dict(snapshot)),
                )
            labels = cohort_labels(cohort_spec)
            if labels:
                _write(out / "labels.json", dump_json(labels))
            _err(f"wrote {len(snapshots)} cohort exports to {out / 'cohort'}")
            return EXIT_OK
        raise ConfigurationError(f"unknown synth kind: {kind!r} (want pair|cohort)")

    sys.exit(_guarded(body))


if __name__ == "__main__":
    main()
