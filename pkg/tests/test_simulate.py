import pytest
from hypothesis import given, settings, strategies as st

from ddpaudit.errors import ConfigurationError
from ddpaudit.har import EventKind
from ddpaudit.model import Platform, dump_json, snapshot_to_dict
from ddpaudit.simulate import (
    CohortSpec,
    DefectSpec,
    SessionShape,
    cohort_labels,
    retention_pair,
    synth_cohort,
    synth_pair,
)
from ddpaudit.reliability import duration


class TestDefectSpec:
    @pytest.mark.parametrize("kwargs", [
        {"drop_rate": -0.1},
        {"drop_rate": 1.5},
        {"relabel_rate": 2.0},
        {"jitter_seconds": -1},
        {"truncate_window_days": 0},
    ])
    def test_invalid_specs_rejected(self, kwargs):
        with pytest.raises(ConfigurationError):
            DefectSpec(**kwargs)


class TestSynthPair:
    def test_zero_defects_is_identity(self):
        log, ddp, truth = synth_pair(50, DefectSpec(seed=3))
        assert truth.dropped == () and truth.truncated == ()
        assert truth.relabeled == {} and truth.jitter == {}
        events = {(e.timestamp, e.content_id) for e in log.events}
        records = {(r.timestamp, r.context_id) for r in ddp.records}
        assert events == records

    def test_exactly_one_drop_in_200_at_half_percent(self):
        _log, _ddp, truth = synth_pair(200, DefectSpec(drop_rate=0.005, seed=11))
        assert len(truth.dropped) == 1
        assert truth.expected_completeness == 0.995

    def test_seed_determinism(self):
        spec = DefectSpec(drop_rate=0.1, jitter_seconds=30, relabel_rate=0.05, seed=9)
        a = synth_pair(120, spec, shape=SessionShape(day_span=4))
        b = synth_pair(120, spec, shape=SessionShape(day_span=4))
        assert dump_json(snapshot_to_dict(a[1])) == dump_json(snapshot_to_dict(b[1]))
        assert a[2] == b[2]

    def test_different_seeds_differ(self):
        a = synth_pair(200, DefectSpec(drop_rate=0.05, seed=1))
        b = synth_pair(200, DefectSpec(drop_rate=0.05, seed=2))
        assert a[2].dropped != b[2].dropped

    @settings(max_examples=40, deadline=None)
    @given(
        n=st.integers(10, 400),
        rate=st.sampled_from([0.0, 0.005, 0.01, 0.05, 0.1, 0.25]),
        seed=st.integers(0, 10_000),
    )
    def test_realized_drop_count_is_round_of_rate_times_n(self, n, rate, seed):
        _log, ddp, truth = synth_pair(n, DefectSpec(drop_rate=rate, seed=seed))
        assert len(truth.dropped) == round(rate * n)
        assert len(ddp.records) == n - len(truth.dropped)

    def test_truncation_removes_old_records_and_reports_them(self):
        shape = SessionShape(day_span=10)
        log, ddp, truth = synth_pair(
            100, DefectSpec(truncate_window_days=5, seed=4), shape=shape
        )
        cutoff = ddp.request_time - 5 * 86400
        assert all(r.timestamp >= cutoff for r in ddp.records)
        assert len(truth.truncated) == 100 - len(ddp.records)
        assert truth.truncated  # 10-day session truncated to 5 days loses events

    def test_relabel_replaces_context_ids(self):
        log, ddp, truth = synth_pair(100, DefectSpec(relabel_rate=0.1, seed=5))
        assert len(truth.relabeled) == 10
        log_ids = {e.content_id for e in log.events}
        relabeled_ids = set(truth.relabeled.values())
        assert relabeled_ids.isdisjoint(log_ids)
        assert relabeled_ids <= {r.context_id for r in ddp.records}

    def test_jitter_stays_within_bounds(self):
        _log, _ddp, truth = synth_pair(100, DefectSpec(jitter_seconds=30, seed=6))
        assert truth.jitter
        assert all(-30 <= d <= 30 for d in truth.jitter.values())

    def test_reorder_is_invisible_after_normalization(self):
        plain = synth_pair(80, DefectSpec(seed=7))
        shuffled = synth_pair(80, DefectSpec(reorder=True, seed=7))
        assert plain[1] == shuffled[1]

    def test_kind_controls_category(self):
        _log, ddp, _ = synth_pair(10, DefectSpec(seed=8), kind=EventKind.LIKE)
        assert ddp.categories_present() == {"like"}

    def test_rewatch_shape_repeats_ids(self):
        log, _ddp, _ = synth_pair(
            100,
            DefectSpec(seed=9),
            shape=SessionShape(day_span=5, rewatch_fraction=0.1),
        )
        ids = [e.content_id for e in log.events]
        duplicates = len(ids) - len(set(ids))
        # a rewatch may land on the unused id of another rewatch event, so
        # the duplicate count is bounded by, not equal to, the rewatch count
        assert 1 <= duplicates <= 10

    def test_n_events_must_be_positive(self):
        with pytest.raises(ConfigurationError):
            synth_pair(0, DefectSpec())


class TestSynthCohort:
    def test_durations_realized_exactly_from_modes(self):
        spec = CohortSpec(
            n_users=40,
            duration_modes=((6.0, 0.5, 0.5), (13.0, 0.5, 0.5)),
            seed=21,
        )
        snapshots = synth_cohort(spec)
        assert len(snapshots) == 40
        days = [duration(s, "watch").days for s in snapshots]
        assert all(5.5 <= d <= 6.5 or 12.5 <= d <= 13.5 for d in days)
        low = [d for d in days if d < 10]
        assert low and len(low) < 40  # both modes hit

    def test_single_mode_zero_spread_gives_equal_durations(self):
        spec = CohortSpec(n_users=8, duration_modes=((30.0, 1.0, 0.0),), seed=2)
        days = {duration(s, "watch").days for s in synth_cohort(spec)}
        assert len(days) == 1

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ConfigurationError):
            CohortSpec(n_users=5, duration_modes=((6.0, 0.4, 0.1),))

    def test_account_age_signal_present(self):
        spec = CohortSpec(
            n_users=3,
            duration_modes=((10.0, 1.0, 0.0),),
            account_age_days=500.0,
            seed=3,
        )
        for snapshot in synth_cohort(spec):
            details = [
                r for r in snapshot.records if r.category.id == "account_details"
            ]
            assert len(details) == 1
            age = (snapshot.request_time - details[0].timestamp) / 86400
            assert age == pytest.approx(500.0, abs=1e-4)

    def test_labels_cycle_round_robin(self):
        spec = CohortSpec(
            n_users=5,
            duration_modes=((10.0, 1.0, 0.0),),
            country_labels=("DE", "FR"),
        )
        labels = cohort_labels(spec)
        assert labels["user_000"] == "DE"
        assert labels["user_001"] == "FR"
        assert labels["user_004"] == "DE"

    def test_cohort_is_seed_deterministic(self):
        spec = CohortSpec(n_users=6, duration_modes=((20.0, 1.0, 2.0),), seed=13)
        a = [snapshot_to_dict(s) for s in synth_cohort(spec)]
        b = [snapshot_to_dict(s) for s in synth_cohort(spec)]
        assert a == b


class TestRetentionPair:
    def test_exact_removal_fraction_and_shared_window(self):
        earlier, later = retention_pair(200, 0.06, seed=1)
        assert len(earlier.records) == 200
        assert len(later.records) == 188
        earliest = min(r.timestamp for r in earlier.records)
        latest = max(r.timestamp for r in earlier.records)
        assert min(r.timestamp for r in later.records) == earliest
        assert max(r.timestamp for r in later.records) == latest

    def test_ad_share_of_removed(self):
        earlier, later = retention_pair(
            200, 0.12, ad_fraction_of_removed=0.62, seed=2
        )
        later_ids = {r.context_id for r in later.records}
        removed = [r for r in earlier.records if r.context_id not in later_ids]
        assert len(removed) == 24
        ads = [r for r in removed if r.attributes.get("is_ad") == "true"]
        assert len(ads) == 15  # round(0.62 * 24)
