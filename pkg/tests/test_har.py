import json

import pytest

from ddpaudit.errors import ConfigurationError, HarError
from ddpaudit.har import (
    EventKind,
    HarExtractionRule,
    default_rules,
    load_session_log,
    parse_har,
    save_session_log,
    session_log_from_dict,
    session_log_to_dict,
)
from ddpaudit.model import Platform


@pytest.fixture(scope="module")
def tiktok_rules():
    return default_rules(Platform.TIKTOK)


class TestParseHar:
    def test_browsing_session_counts(self, fixtures_dir, tiktok_rules):
        log, warnings = parse_har(
            fixtures_dir / "har/tiktok_browse.har", tiktok_rules, Platform.TIKTOK
        )
        assert len(log.events_of(EventKind.WATCH)) == 22
        assert len(log.events_of(EventKind.LIKE)) == 4
        assert warnings == []

    def test_zero_matching_entries_warns(self, tmp_path, tiktok_rules):
        doc = {
            "log": {
                "entries": [
                    {
                        "startedDateTime": "2024-12-19T10:00:00.000+00:00",
                        "time": 10,
                        "request": {"url": "https://cdn.example/app.css"},
                        "response": {},
                    }
                ]
            }
        }
        path = tmp_path / "empty.har"
        path.write_text(json.dumps(doc))
        log, warnings = parse_har(path, tiktok_rules, Platform.TIKTOK)
        assert log.events == ()
        assert any("no HAR entries matched" in w for w in warnings)

    def test_injected_retry_deduplicated(self, fixtures_dir, tiktok_rules):
        # 6 watch-matching entries, one a 400 ms retry -> 5 events
        log, _ = parse_har(
            fixtures_dir / "har/tiktok_browse_retry.har", tiktok_rules, Platform.TIKTOK
        )
        assert len(log.events_of(EventKind.WATCH)) == 5

    def test_order_independent_of_entry_ordering(self, fixtures_dir, tmp_path, tiktok_rules):
        source = fixtures_dir / "har/tiktok_browse.har"
        doc = json.loads(source.read_text())
        doc["log"]["entries"].reverse()
        shuffled = tmp_path / "reversed.har"
        shuffled.write_text(json.dumps(doc))
        a, _ = parse_har(source, tiktok_rules, Platform.TIKTOK)
        b, _ = parse_har(shuffled, tiktok_rules, Platform.TIKTOK)
        assert session_log_to_dict(a) == session_log_to_dict(b)

    def test_dedup_never_merges_beyond_window(self, tmp_path, tiktok_rules):
        url = "https://www.tiktok.com/api/item/stats/?item_id=7200000000000000001"
        entries = [
            {
                "startedDateTime": f"2024-12-19T10:00:0{s}.000+00:00",
                "time": 10,
                "request": {"url": url},
                "response": {},
            }
            for s in (0, 2, 4)  # 2 s apart: outside the 1 s window
        ]
        path = tmp_path / "spaced.har"
        path.write_text(json.dumps({"log": {"entries": entries}}))
        log, _ = parse_har(path, tiktok_rules, Platform.TIKTOK)
        assert len(log.events) == 3

    def test_body_path_extraction_and_failure_warning(self, fixtures_dir):
        rules = default_rules(Platform.YOUTUBE)
        log, warnings = parse_har(
            fixtures_dir / "har/youtube_browse.har", rules, Platform.YOUTUBE
        )
        assert [e.content_id for e in log.events_of(EventKind.WATCH)] == [
            "y0000001", "y0000002", "y0000003",
        ]
        assert [e.content_id for e in log.events_of(EventKind.LIKE)] == ["y0000002"]
        assert any("id extraction failed" in w for w in warnings)

    def test_not_valid_har_is_fatal(self, tmp_path, tiktok_rules):
        path = tmp_path / "nothar.json"
        path.write_text('{"log": {}}')
        with pytest.raises(HarError):
            parse_har(path, tiktok_rules, Platform.TIKTOK)
        path.write_text("not json at all")
        with pytest.raises(HarError):
            parse_har(path, tiktok_rules, Platform.TIKTOK)

    def test_events_lie_within_capture_window(self, fixtures_dir, tiktok_rules):
        log, _ = parse_har(
            fixtures_dir / "har/tiktok_browse.har", tiktok_rules, Platform.TIKTOK
        )
        start, end = log.capture_window
        assert all(start <= e.timestamp <= end for e in log.events)


class TestRules:
    def test_bad_regex_rejected(self):
        with pytest.raises(ConfigurationError):
            HarExtractionRule(EventKind.WATCH, "(unclosed", "id")

    def test_bad_timestamp_source_rejected(self):
        with pytest.raises(ConfigurationError):
            HarExtractionRule(EventKind.WATCH, "x", "id", timestamp_source="whenever")

    def test_default_rules_resolve_ids_on_fixtures(self, fixtures_dir):
        # every shipped rule file must extract at least one id from its fixture
        for platform, har_name in (
            (Platform.TIKTOK, "tiktok_browse.har"),
            (Platform.YOUTUBE, "youtube_browse.har"),
        ):
            log, _ = parse_har(
                fixtures_dir / "har" / har_name, default_rules(platform), platform
            )
            assert log.events


class TestSessionLogIo:
    def test_round_trip(self, fixtures_dir, tmp_path, tiktok_rules):
        log, _ = parse_har(
            fixtures_dir / "har/tiktok_browse.har", tiktok_rules, Platform.TIKTOK
        )
        path = tmp_path / "log.json"
        save_session_log(log, path)
        assert load_session_log(path) == log

    def test_version_check(self):
        with pytest.raises(ConfigurationError):
            session_log_from_dict({"schema_version": "99", "session": {}, "events": []})
