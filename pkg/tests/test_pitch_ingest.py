from __future__ import annotations

import json
import random

import httpx
import pytest
from hypothesis import given, strategies as st

from shotspeak.exceptions import DataIntegrityError, MalformedEventError
from shotspeak.ingest import (
    IngestConfig,
    extract_shot_events,
    fetch_competition,
    index_frames,
    load_competition,
    merge_freeze_frames,
    read_shots_csv,
    select_model_shots,
    write_shots_csv,
)
from shotspeak.pitch import (
    PITCH_LENGTH,
    PITCH_WIDTH,
    BodyPart,
    PitchDims,
    PlayPattern,
    convert_coordinates,
    invert_coordinates,
)


def raw_shot(event_id, *, location=(100.0, 40.0), pattern="Regular Play", shot_type="Open Play"):
    return {
        "id": event_id,
        "minute": 42,
        "type": {"name": "Shot"},
        "play_pattern": {"name": pattern},
        "team": {"name": "Home"},
        "player": {"name": "P. Layer"},
        "location": list(location),
        "shot": {
            "type": {"name": shot_type},
            "body_part": {"name": "Right Foot"},
            "outcome": {"name": "Saved"},
        },
    }


def raw_frame(event_id, n_players=5):
    frame = [{"teammate": False, "actor": False, "keeper": True, "location": [118.0, 40.0]}]
    for i in range(n_players - 1):
        frame.append(
            {"teammate": i % 2 == 0, "actor": False, "keeper": False, "location": [100.0 + i, 35.0 + i]}
        )
    return {"event_uuid": event_id, "freeze_frame": frame}


class TestConvertCoordinates:
    def test_corner_maps_to_corner(self):
        point = convert_coordinates(120, 80, PitchDims(120, 80))
        assert (point.x, point.y) == (105.0, 68.0)

    def test_origin_is_fixed(self):
        point = convert_coordinates(0, 0, PitchDims(120, 80))
        assert (point.x, point.y) == (0.0, 0.0)

    def test_midpoint_maps_to_midpoint(self):
        point = convert_coordinates(60, 40, PitchDims(120, 80))
        assert (point.x, point.y) == (52.5, 34.0)

    def test_out_of_bounds_is_clamped(self):
        point = convert_coordinates(125.0, -2.0, PitchDims(120, 80))
        assert (point.x, point.y) == (PITCH_LENGTH, 0.0)

    def test_non_finite_raises_with_event_id(self):
        with pytest.raises(MalformedEventError) as excinfo:
            convert_coordinates(float("nan"), 4.0, event_id="evt-9")
        assert excinfo.value.event_id == "evt-9"

    @given(
        st.floats(min_value=0, max_value=120, allow_nan=False),
        st.floats(min_value=0, max_value=80, allow_nan=False),
    )
    def test_round_trip_within_tolerance(self, raw_x, raw_y):
        dims = PitchDims(120, 80)
        back_x, back_y = invert_coordinates(convert_coordinates(raw_x, raw_y, dims), dims)
        assert back_x == pytest.approx(raw_x, abs=1e-9)
        assert back_y == pytest.approx(raw_y, abs=1e-9)


class TestMergeFreezeFrames:
    def test_direct_join_carries_players(self):
        shots = merge_freeze_frames([raw_shot("a")], index_frames([raw_frame("a", 6)]))
        assert len(shots) == 1
        # actor rows are dropped on parse; none present here
        assert len(shots[0].freeze_frame) == 6

    def test_missing_frame_yields_empty_and_ineligible(self):
        shots = merge_freeze_frames([raw_shot("a")], {})
        assert shots[0].freeze_frame == ()
        assert not shots[0].has_freeze_frame
        assert select_model_shots(shots) == []

    def test_duplicate_frame_id_is_integrity_error(self):
        with pytest.raises(DataIntegrityError):
            index_frames([raw_frame("a"), raw_frame("a")])

    def test_partial_coverage_count_matches_brute_force_join(self):
        # 20-event fixture, frames for a strict subset.
        rng = random.Random(3)
        events = [raw_shot(f"evt-{i}") for i in range(20)]
        with_frames = sorted(rng.sample(range(20), 13))
        frames = index_frames([raw_frame(f"evt-{i}") for i in with_frames])

        # brute-force join oracle
        expected_eligible = {e["id"] for e in events if e["id"] in frames}

        shots = merge_freeze_frames(events, frames)
        eligible = {s.shot_id for s in shots if s.has_freeze_frame}
        assert eligible == expected_eligible
        assert len(select_model_shots(shots)) == 13

    def test_merge_is_idempotent_and_pure(self):
        events = [raw_shot("a"), raw_shot("b")]
        frames = index_frames([raw_frame("a")])
        before = json.dumps(events, sort_keys=True)
        first = merge_freeze_frames(events, frames)
        second = merge_freeze_frames(events, frames)
        assert first == second
        assert json.dumps(events, sort_keys=True) == before

    def test_actor_rows_are_dropped(self):
        frame = {
            "event_uuid": "a",
            "freeze_frame": [
                {"teammate": True, "actor": True, "keeper": False, "location": [100, 40]},
                {"teammate": False, "actor": False, "keeper": True, "location": [118, 40]},
            ],
        }
        shots = merge_freeze_frames([raw_shot("a")], index_frames([frame]))
        assert len(shots[0].freeze_frame) == 1
        assert shots[0].freeze_frame[0].is_keeper

    def test_second_opposing_keeper_is_demoted(self):
        frame = {
            "event_uuid": "a",
            "freeze_frame": [
                {"teammate": False, "actor": False, "keeper": True, "location": [100, 40]},
                {"teammate": False, "actor": False, "keeper": True, "location": [119, 40]},
            ],
        }
        shots = merge_freeze_frames([raw_shot("a")], index_frames([frame]))
        keepers = [p for p in shots[0].freeze_frame if p.is_keeper and not p.is_teammate]
        assert len(keepers) == 1
        assert keepers[0].location.x == pytest.approx(119 * 105 / 120)

    def test_penalty_shot_type_overrides_play_pattern(self):
        shots = merge_freeze_frames([raw_shot("a", shot_type="Penalty")], {})
        assert shots[0].play_pattern is PlayPattern.PENALTY

    def test_unknown_enum_strings_map_to_other_with_warning(self, caplog):
        event = raw_shot("a", pattern="From Meteor Strike")
        event["shot"]["body_part"] = {"name": "Elbow"}
        with caplog.at_level("WARNING"):
            shots = merge_freeze_frames([event], {})
        assert shots[0].play_pattern is PlayPattern.OTHER
        assert shots[0].body_part is BodyPart.OTHER
        assert sum("mapped to 'other'" in r.message for r in caplog.records) == 2

    def test_frame_players_stay_in_bounds(self):
        frame = {
            "event_uuid": "a",
            "freeze_frame": [
                {"teammate": False, "actor": False, "keeper": False, "location": [121.5, -0.4]}
            ],
        }
        shots = merge_freeze_frames([raw_shot("a")], index_frames([frame]))
        player = shots[0].freeze_frame[0]
        assert 0.0 <= player.location.x <= PITCH_LENGTH
        assert 0.0 <= player.location.y <= PITCH_WIDTH


class TestSelectModelShots:
    def test_open_play_shot_with_frame_is_kept(self):
        shots = merge_freeze_frames([raw_shot("a")], index_frames([raw_frame("a")]))
        assert select_model_shots(shots) == shots

    def test_penalty_is_dropped_by_default(self):
        shots = merge_freeze_frames(
            [raw_shot("a", shot_type="Penalty")], index_frames([raw_frame("a")])
        )
        assert select_model_shots(shots) == []
        assert select_model_shots(shots, IngestConfig(include_penalties=True)) == shots

    def test_mixed_fixture_matches_independent_filter(self):
        rng = random.Random(9)
        events, frames = [], []
        for i in range(10):
            shot_type = "Penalty" if rng.random() < 0.3 else "Open Play"
            events.append(raw_shot(f"evt-{i}", shot_type=shot_type))
            if rng.random() < 0.7:
                frames.append(raw_frame(f"evt-{i}"))
        shots = merge_freeze_frames(events, index_frames(frames))

        # independent filter re-implementation
        expected = [
            s.shot_id
            for s in shots
            if len(s.freeze_frame) > 0 and s.play_pattern is not PlayPattern.PENALTY
        ]
        assert [s.shot_id for s in select_model_shots(shots)] == expected


class TestCompetitionLoading:
    def test_demo_competition_loads_and_orders(self, demo_data_root, demo_competition_id):
        shots = load_competition(demo_data_root, demo_competition_id)
        assert len(shots) > 50
        assert len({s.shot_id for s in shots}) == len(shots)
        for shot in shots:
            if shot.has_freeze_frame:
                for player in shot.freeze_frame:
                    assert 0.0 <= player.location.x <= PITCH_LENGTH
                    assert 0.0 <= player.location.y <= PITCH_WIDTH

    def test_shots_csv_round_trip(self, demo_data_root, demo_competition_id, tmp_path):
        shots = load_competition(demo_data_root, demo_competition_id)
        path = tmp_path / "shots.csv"
        write_shots_csv(shots, path)
        assert read_shots_csv(path) == shots

    def test_shot_extraction_ignores_non_shot_events(self):
        doc = [raw_shot("a"), {"id": "b", "type": {"name": "Pass"}}]
        assert [e["id"] for e in extract_shot_events(doc)] == ["a"]


class TestFetchCaching:
    def _transport(self, calls):
        def handler(request: httpx.Request) -> httpx.Response:
            calls.append(request.url.path)
            if "/matches/" in request.url.path:
                return httpx.Response(200, json=[{"match_id": 77}])
            if "/events/" in request.url.path:
                return httpx.Response(200, json=[raw_shot("a")])
            if "/three-sixty/" in request.url.path:
                return httpx.Response(404)
            return httpx.Response(500)

        return httpx.MockTransport(handler)

    def test_fetch_writes_tree_and_caches(self, tmp_path):
        calls: list[str] = []
        client = httpx.Client(transport=self._transport(calls))
        match_ids = fetch_competition(
            tmp_path, "test-cup", 1, 2, base_url="https://example.test/data", client=client
        )
        assert match_ids == ["77"]
        assert (tmp_path / "test-cup" / "77" / "events.json").exists()
        assert not (tmp_path / "test-cup" / "77" / "frames.json").exists()
        first_pass = len(calls)

        fetch_competition(
            tmp_path, "test-cup", 1, 2, base_url="https://example.test/data", client=client
        )
        # events and matches are cached; only the absent 360 file is retried
        assert [c for c in calls[first_pass:] if "/events/" in c or "/matches/" in c] == []
