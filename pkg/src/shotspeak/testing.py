"""Synthetic provider data for tests, demos and benchmarks.

Generates provider-format match documents (events plus 360 frames) whose
outcomes are drawn from a known logistic ground truth, so fitted models
recover sensible coefficients. Everything is deterministic in the seed.

Run ``python -m shotspeak.testing <data_root>`` to write a demo
competition that the CLI and service can ingest.
"""

from __future__ import annotations

import json
import math
import random
import sys
import uuid
from pathlib import Path

from .features import build_feature_vector
from .ingest import EVENTS_FILENAME, FRAMES_FILENAME, merge_freeze_frames
from .pitch import PitchDims

DEMO_COMPETITION_ID = "demo-cup"

_TEAMS = (
    "Rivertown Rovers",
    "Harbor City",
    "Eastport United",
    "Northgate Athletic",
    "Southbridge Town",
    "Westfield Wanderers",
)

_PLAYERS = (
    "Ada Okafor", "Jonas Lindqvist", "Marta Silva", "Theo Baranov",
    "Luca Moretti", "Ingrid Dahl", "Sam Whitfield", "Yusuf Kanté",
    "Elena Petrova", "Owen Gallagher", "Nadia Rahimi", "Felix Berger",
)

# Ground-truth coefficients on the metric-pitch feature scale.
TRUE_INTERCEPT = 1.2
TRUE_COEFFICIENTS = {
    "squared_distance_to_center": -0.0035,
    "distance_to_goal": -0.17,
    "nearby_opponents_3m": -0.25,
    "opponents_in_triangle": -0.35,
    "gk_distance_to_goal": 0.12,
    "distance_to_nearest_opponent": 0.06,
    "angle_to_gk": 0.004,
    "shot_with_left_foot": -0.05,
    "shot_after_throw_in": 0.1,
    "shot_after_corner": -0.2,
    "shot_after_free_kick": -0.1,
}


def _provider_xy(x: float, y: float, dims: PitchDims) -> list[float]:
    return [round(x * dims.length / 105.0, 3), round(y * dims.width / 68.0, 3)]


def _sample_shot_location(rng: random.Random) -> tuple[float, float]:
    x = 105.0 - min(max(abs(rng.gauss(11.0, 6.0)), 1.5), 45.0)
    y = min(max(rng.gauss(34.0, 9.0), 1.0), 67.0)
    return x, y


def _sample_frame(rng: random.Random, shot_x: float, shot_y: float) -> list[dict]:
    players: list[dict] = []
    keeper_x = min(max(rng.gauss(103.5, 1.2), 95.0), 105.0)
    keeper_y = min(max(rng.gauss(34.0, 1.5), 28.0), 40.0)
    players.append({"teammate": False, "actor": False, "keeper": True, "location": (keeper_x, keeper_y)})
    for _ in range(rng.randint(1, 7)):  # outfield defenders between shot and goal-ish
        px = min(max(rng.uniform(shot_x - 6.0, 104.5), 40.0), 105.0)
        py = min(max(rng.gauss((shot_y + 34.0) / 2.0, 8.0), 0.0), 68.0)
        players.append({"teammate": False, "actor": False, "keeper": False, "location": (px, py)})
    for _ in range(rng.randint(0, 4)):
        px = min(max(rng.uniform(shot_x - 20.0, 102.0), 30.0), 105.0)
        py = min(max(rng.gauss(34.0, 12.0), 0.0), 68.0)
        players.append({"teammate": True, "actor": False, "keeper": False, "location": (px, py)})
    return players


def _choose_body_part(rng: random.Random) -> str:
    roll = rng.random()
    if roll < 0.25:
        return "Left Foot"
    if roll < 0.85:
        return "Right Foot"
    if roll < 0.97:
        return "Head"
    return "Other"


def _choose_play_pattern(rng: random.Random) -> tuple[str, str]:
    """(play_pattern name, shot type name) in provider vocabulary."""
    roll = rng.random()
    if roll < 0.02:
        return "Regular Play", "Penalty"
    if roll < 0.72:
        return "Regular Play", "Open Play"
    if roll < 0.82:
        return "From Throw In", "Open Play"
    if roll < 0.90:
        return "From Corner", "Open Play"
    if roll < 0.96:
        return "From Free Kick", "Open Play"
    return "From Counter", "Open Play"


def generate_match_documents(
    rng: random.Random,
    competition_id: str,
    match_id: str,
    home_team: str,
    away_team: str,
    n_shots: int = 28,
    dims: PitchDims = PitchDims(120.0, 80.0),
    frame_probability: float = 0.92,
) -> tuple[list[dict], list[dict]]:
    """One match's provider documents: (events, frames)."""
    events: list[dict] = []
    frames: list[dict] = []
    for index in range(n_shots):
        event_id = str(uuid.UUID(int=rng.getrandbits(128)))
        shot_x, shot_y = _sample_shot_location(rng)
        play_pattern, shot_type = _choose_play_pattern(rng)
        event = {
            "id": event_id,
            "minute": rng.randint(0, 94),
            "type": {"id": 16, "name": "Shot"},
            "play_pattern": {"name": play_pattern},
            "team": {"name": home_team if index % 2 == 0 else away_team},
            "player": {"name": rng.choice(_PLAYERS)},
            "location": _provider_xy(shot_x, shot_y, dims),
            "shot": {
                "type": {"name": shot_type},
                "body_part": {"name": _choose_body_part(rng)},
                "outcome": {"name": "Pending"},
            },
        }
        frame_players = None
        if rng.random() < frame_probability:
            frame_players = _sample_frame(rng, shot_x, shot_y)
            frames.append(
                {
                    "event_uuid": event_id,
                    "freeze_frame": [
                        {**p, "location": _provider_xy(p["location"][0], p["location"][1], dims)}
                        for p in frame_players
                    ],
                }
            )
        events.append(event)

    # Outcomes from the ground-truth model over the parsed features.
    merged = merge_freeze_frames(
        events,
        {f["event_uuid"]: f for f in frames},
        competition_id=competition_id,
        match_id=match_id,
        dims=dims,
    )
    for event, shot in zip(events, merged):
        goal = False
        if shot.has_freeze_frame and shot.opposing_keeper() is not None:
            vector = build_feature_vector(shot)
            eta = TRUE_INTERCEPT + sum(
                TRUE_COEFFICIENTS[name] * value for name, value in vector.as_dict().items()
            )
            goal = rng.random() < 1.0 / (1.0 + math.exp(-eta))
        elif rng.random() < 0.08:
            goal = True
        event["shot"]["outcome"] = {"name": "Goal" if goal else "Saved"}
    return events, frames


def make_demo_dataset(
    data_root: str | Path,
    competition_id: str = DEMO_COMPETITION_ID,
    n_matches: int = 6,
    shots_per_match: int = 30,
    seed: int = 7,
    dims: PitchDims = PitchDims(120.0, 80.0),
) -> list[str]:
    """Write a synthetic competition under ``data_root``; returns match ids."""
    rng = random.Random(seed)
    comp_dir = Path(data_root) / competition_id
    comp_dir.mkdir(parents=True, exist_ok=True)
    match_ids = []
    matches_doc = []
    for index in range(n_matches):
        match_id = f"{100000 + index}"
        home, away = _TEAMS[2 * index % len(_TEAMS)], _TEAMS[(2 * index + 1) % len(_TEAMS)]
        events, frames = generate_match_documents(
            rng, competition_id, match_id, home, away, n_shots=shots_per_match, dims=dims
        )
        match_dir = comp_dir / match_id
        match_dir.mkdir(exist_ok=True)
        (match_dir / EVENTS_FILENAME).write_text(json.dumps(events, indent=1))
        (match_dir / FRAMES_FILENAME).write_text(json.dumps(frames, indent=1))
        matches_doc.append(
            {
                "match_id": int(match_id),
                "home_team": {"home_team_name": home},
                "away_team": {"away_team_name": away},
            }
        )
        match_ids.append(match_id)
    (comp_dir / "matches.json").write_text(json.dumps(matches_doc, indent=1))
    return match_ids


if __name__ == "__main__":
    root = sys.argv[1] if len(sys.argv) > 1 else "data"
    ids = make_demo_dataset(root)
    print(f"wrote demo competition '{DEMO_COMPETITION_ID}' with matches {', '.join(ids)} under {root}/")
