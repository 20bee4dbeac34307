import json
import shutil
import zipfile
from pathlib import Path

import pytest
from click.testing import CliRunner

from ddpaudit.cli import main
from ddpaudit.model import load_snapshot, dump_json, snapshot_to_dict
from ddpaudit.har import save_session_log
from ddpaudit.simulate import DefectSpec, synth_pair


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args):
    return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)


class TestParseCommand:
    def test_fixture_zip_parses_to_valid_export(self, runner, ddp_trees, tmp_path):
        archive = tmp_path / "tiktok.zip"
        with zipfile.ZipFile(archive, "w") as zf:
            for path in sorted(ddp_trees["tiktok"].rglob("*")):
                if path.is_file():
                    zf.write(path, path.relative_to(ddp_trees["tiktok"]))
        out = tmp_path / "export.json"
        result = invoke(runner, ["parse", archive, "--alias", "zipped", "--out", out])
        assert result.exit_code == 0
        snap = load_snapshot(out)  # validates schema on load
        assert snap.account_alias == "zipped"
        assert len(snap.records) == 32

    def test_unknown_tree_exits_2_not_a_ddp(self, runner, tmp_path):
        (tmp_path / "random.txt").write_text("hello")
        out = tmp_path / "export.json"
        result = runner.invoke(main, ["parse", str(tmp_path), "--out", str(out)])
        assert result.exit_code == 2
        assert "not a DDP" in result.output

    def test_platform_override_on_ambiguous_tree(self, runner, tmp_path):
        (tmp_path / "Activity").mkdir()
        (tmp_path / "Activity/Video Browsing History.txt").write_text(
            "Date: 2024-12-01 10:00:00\nLink: https://t/1\n"
        )
        ig = tmp_path / "ads_information/ads_and_topics"
        ig.mkdir(parents=True)
        (ig / "videos_watched.json").write_text(
            '{"impressions_history_videos_watched": []}'
        )
        # ambiguous without override
        result = runner.invoke(main, ["parse", str(tmp_path), "--out", str(tmp_path / "x.json")])
        assert result.exit_code == 2
        # explicit platform resolves it
        out = tmp_path / "ig.json"
        result = invoke(
            runner, ["parse", tmp_path, "--platform", "instagram", "--out", out]
        )
        assert result.exit_code == 0
        assert load_snapshot(out).platform.value == "instagram"

    def test_write_barrier_redacts_pii_attributes(self, runner, ddp_trees, tmp_path):
        out = tmp_path / "ig.json"
        result = invoke(runner, ["parse", ddp_trees["instagram"], "--out", out])
        assert result.exit_code == 0
        document = json.loads(out.read_text())
        login = [r for r in document["records"] if r["category"] == "login_history"]
        assert all(r["attributes"]["ip"] == "__REDACTED__" for r in login)
        # …but --allow-pii keeps values for local-only workflows
        out2 = tmp_path / "ig_raw.json"
        invoke(runner, ["parse", ddp_trees["instagram"], "--out", out2, "--allow-pii"])
        document2 = json.loads(out2.read_text())
        login2 = [r for r in document2["records"] if r["category"] == "login_history"]
        assert any(r["attributes"]["ip"].startswith("203.") for r in login2)


@pytest.fixture
def pair_files(tmp_path):
    log, ddp, _truth = synth_pair(100, DefectSpec(seed=41))
    log_path = tmp_path / "log.json"
    ddp_path = tmp_path / "ddp.json"
    save_session_log(log, log_path)
    ddp_path.write_text(dump_json(snapshot_to_dict(ddp)))
    return log_path, ddp_path


class TestAuditReliability:
    def test_zero_defect_pair_reports_ones_and_exits_clean(self, runner, pair_files, tmp_path):
        log_path, ddp_path = pair_files
        out = tmp_path / "rel"
        result = invoke(runner, [
            "audit-reliability", "--log", log_path, "--ddp", ddp_path,
            "--out", out, "--no-figures",
        ])
        assert result.exit_code == 0
        report = json.loads((out / "reliability_report.json").read_text())
        assert report["completeness"]["fraction"] == 1.0
        assert report["jaccard"] == {"date": 1.0, "context": 1.0, "overall": 1.0}

    def test_indicators_exit_1(self, runner, tmp_path):
        log, ddp, _ = synth_pair(200, DefectSpec(drop_rate=0.05, seed=42))
        log_path = tmp_path / "log.json"
        ddp_path = tmp_path / "ddp.json"
        save_session_log(log, log_path)
        ddp_path.write_text(dump_json(snapshot_to_dict(ddp)))
        result = invoke(runner, [
            "audit-reliability", "--log", log_path, "--ddp", ddp_path,
            "--out", tmp_path / "rel", "--no-figures",
        ])
        assert result.exit_code == 1

    def test_two_snapshots_populate_retention(self, runner, tmp_path):
        from ddpaudit.simulate import retention_pair

        earlier, later = retention_pair(100, 0.06, seed=4)
        log, _, _ = synth_pair(10, DefectSpec(seed=4))
        paths = {}
        for name, snap in (("earlier", earlier), ("later", later)):
            p = tmp_path / f"{name}.json"
            p.write_text(dump_json(snapshot_to_dict(snap)))
            paths[name] = p
        log_path = tmp_path / "log.json"
        save_session_log(log, log_path)
        result = runner.invoke(main, [
            "audit-reliability", "--log", str(log_path), "--ddp", str(paths["earlier"]),
            "--later", str(paths["later"]), "--out", str(tmp_path / "rel"),
            "--no-figures",
        ])
        report = json.loads((tmp_path / "rel/reliability_report.json").read_text())
        assert report["retention"]["overall"] == 0.94

    def test_figures_rendered_when_enabled(self, runner, pair_files, tmp_path):
        log_path, ddp_path = pair_files
        out = tmp_path / "rel"
        invoke(runner, [
            "audit-reliability", "--log", log_path, "--ddp", ddp_path, "--out", out,
        ])
        png = out / "reliability_metrics.png"
        assert png.exists() and png.stat().st_size > 1000


class TestAuditCompliance:
    def test_fixture_exports_yield_five_absent_findings(self, runner, ddp_trees, tmp_path):
        for name in ("tiktok", "instagram", "youtube"):
            export = tmp_path / f"{name}.json"
            invoke(runner, ["parse", ddp_trees[name], "--out", export])
            out = tmp_path / name
            result = invoke(runner, ["audit-compliance", "--ddp", export, "--out", out])
            assert result.exit_code == 1  # absent disclosures are indicators
            report = json.loads((out / "compliance_report.json").read_text())
            statuses = [f["status"] for f in report["disclosure"]]
            assert statuses == ["absent"] * 5

    def test_injected_purpose_shows_disclosed(self, runner, ddp_trees, tmp_path):
        tree = tmp_path / "withpolicy"
        shutil.copytree(ddp_trees["tiktok"], tree)
        (tree / "Legal").mkdir()
        (tree / "Legal/Purpose Of Processing.txt").write_text("Ranking your feed.\n")
        export = tmp_path / "t.json"
        invoke(runner, ["parse", tree, "--out", export])
        out = tmp_path / "rep"
        invoke(runner, ["audit-compliance", "--ddp", export, "--out", out])
        report = json.loads((out / "compliance_report.json").read_text())
        by_clause = {f["clause"]: f["status"] for f in report["disclosure"]}
        assert by_clause["purpose_15_1_a"] == "disclosed"

    def test_custom_matrix_rows_used(self, runner, tmp_path):
        # generic-platform snapshot audited against a custom one-row matrix
        from ddpaudit.model import DdpSnapshot, Platform

        snap = DdpSnapshot(
            platform=Platform.GENERIC, account_alias="g", request_time=1,
            records=(), file_manifest=(),
        )
        export = tmp_path / "g.json"
        export.write_text(dump_json(snapshot_to_dict(snap)))
        matrix_path = tmp_path / "matrix.json"
        matrix_path.write_text(json.dumps({
            "schema_version": "1",
            "captured_at": "2025-01",
            "statuses": {"watch": {"generic": "N"}},
        }))
        out = tmp_path / "rep"
        result = runner.invoke(main, [
            "audit-compliance", "--ddp", str(export), "--matrix", str(matrix_path),
            "--out", str(out),
        ])
        report = json.loads((out / "compliance_report.json").read_text())
        rows = {r["category"]: r for r in report["coverage"]["rows"]}
        assert rows["watch"]["expected"] == "N"
        assert rows["watch"]["verdict"] == "meets"

    def test_markdown_only_format(self, runner, ddp_trees, tmp_path):
        export = tmp_path / "t.json"
        invoke(runner, ["parse", ddp_trees["tiktok"], "--out", export])
        out = tmp_path / "rep"
        invoke(runner, [
            "audit-compliance", "--ddp", export, "--out", out, "--format", "md",
        ])
        assert (out / "compliance_report.md").exists()
        assert not (out / "compliance_report.json").exists()


class TestCohortCommand:
    def test_bimodal_cohort_yields_two_clusters(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({
            "kind": "cohort",
            "spec": {
                "n_users": 40,
                "duration_modes": [[6.0, 0.5, 0.5], [13.0, 0.5, 0.5]],
                "seed": 21,
                "country_labels": ["DE", "FR"],
            },
        }))
        invoke(runner, ["synth", spec, "--out", tmp_path])
        out = tmp_path / "stats"
        result = invoke(runner, [
            "cohort", tmp_path / "cohort", "--group-by", tmp_path / "labels.json",
            "--out", out, "--no-figures",
        ])
        assert result.exit_code == 0
        document = json.loads((out / "durations.json").read_text())
        assert len(document["groups"]["all"]["clusters"]) == 2
        assert set(document["groups"]) == {"all", "DE", "FR"}
        csv_text = (out / "cdf_points.csv").read_text()
        assert csv_text.startswith("group,duration_days,cumulative_fraction\n")

    def test_single_export_one_duration_no_clusters(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({
            "kind": "cohort",
            "spec": {"n_users": 1, "duration_modes": [[10.0, 1.0, 0.0]], "seed": 3},
        }))
        invoke(runner, ["synth", spec, "--out", tmp_path])
        out = tmp_path / "stats"
        invoke(runner, ["cohort", tmp_path / "cohort", "--out", out, "--no-figures"])
        document = json.loads((out / "durations.json").read_text())
        group = document["groups"]["all"]
        assert len(group["durations"]) == 1
        assert group["clusters"] == []

    def test_cdf_figure_written(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({
            "kind": "cohort",
            "spec": {"n_users": 8, "duration_modes": [[10.0, 1.0, 1.0]], "seed": 5},
        }))
        invoke(runner, ["synth", spec, "--out", tmp_path])
        out = tmp_path / "stats"
        invoke(runner, ["cohort", tmp_path / "cohort", "--out", out])
        assert (out / "duration_cdf.png").stat().st_size > 1000


class TestScrubCommand:
    def test_default_rules_scrub_cleanly(self, runner, ddp_trees, tmp_path):
        result = invoke(runner, [
            "scrub", ddp_trees["instagram"], "--out", tmp_path / "scrubbed",
        ])
        assert result.exit_code == 0
        report = json.loads((tmp_path / "scrubbed.scrub_report.json").read_text())
        assert report["removed_files"]["count"] == 1
        assert report["unmatched_rules"] == []

    def test_unmatched_rule_exits_3_unless_allowed(self, runner, ddp_trees, tmp_path):
        rules = tmp_path / "rules.json"
        rules.write_text(json.dumps({
            "schema_version": "1",
            "platform": "instagram",
            "key_paths": ["ghost_section[].value"],
        }))
        result = runner.invoke(main, [
            "scrub", str(ddp_trees["instagram"]), "--out", str(tmp_path / "a"),
            "--rules", str(rules),
        ])
        assert result.exit_code == 3
        result = runner.invoke(main, [
            "scrub", str(ddp_trees["instagram"]), "--out", str(tmp_path / "b"),
            "--rules", str(rules), "--allow-unmatched-rules",
        ])
        assert result.exit_code == 0


class TestExportDashboard:
    def test_bundle_written_with_aggregates(self, runner, ddp_trees, tmp_path):
        export = tmp_path / "yt.json"
        invoke(runner, ["parse", ddp_trees["youtube"], "--out", export])
        bundle_path = tmp_path / "bundle.json"
        result = invoke(runner, [
            "export-dashboard", "--ddp", export, "--out", bundle_path,
        ])
        assert result.exit_code == 0
        bundle = json.loads(bundle_path.read_text())
        assert bundle["schema_version"] == "1"
        watch = bundle["aggregates"]["categories"]["watch"]
        assert watch["total"] == 6
        assert sum(watch["per_day"].values()) == 6

    def test_reports_embedded(self, runner, ddp_trees, tmp_path):
        export = tmp_path / "t.json"
        invoke(runner, ["parse", ddp_trees["tiktok"], "--out", export])
        rep_dir = tmp_path / "rep"
        invoke(runner, ["audit-compliance", "--ddp", export, "--out", rep_dir])
        bundle_path = tmp_path / "bundle.json"
        invoke(runner, [
            "export-dashboard", "--ddp", export,
            "--compliance", rep_dir / "compliance_report.json",
            "--out", bundle_path,
        ])
        bundle = json.loads(bundle_path.read_text())
        assert bundle["reports"]["compliance"]["coverage"]["platform"] == "tiktok"


class TestSynthCommand:
    def test_seeded_spec_reproducible(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({
            "kind": "pair",
            "n_events": 50,
            "defects": {"drop_rate": 0.1, "seed": 9},
        }))
        invoke(runner, ["synth", spec, "--out", tmp_path / "a"])
        invoke(runner, ["synth", spec, "--out", tmp_path / "b"])
        for name in ("session_log.json", "ddp_export.json", "injected_truth.json"):
            assert (tmp_path / "a" / name).read_bytes() == (
                tmp_path / "b" / name
            ).read_bytes()

    def test_half_percent_of_200_drops_exactly_one(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({
            "kind": "pair",
            "n_events": 200,
            "defects": {"drop_rate": 0.005, "seed": 11},
        }))
        invoke(runner, ["synth", spec, "--out", tmp_path])
        truth = json.loads((tmp_path / "injected_truth.json").read_text())
        assert len(truth["dropped"]) == 1

    def test_unknown_kind_is_config_error(self, runner, tmp_path):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"kind": "mystery"}))
        result = runner.invoke(main, ["synth", str(spec), "--out", str(tmp_path)])
        assert result.exit_code == 3
