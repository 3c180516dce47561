"""Provider event and freeze-frame ingestion.

Reads provider JSON documents (one event file and optionally one 360-frame
file per match) from ``data/<competition_id>/<match_id>/``, merges frames
into shot events by event id, converts everything onto the metric pitch,
and writes one canonical shots CSV per competition. Files can also be
fetched from the provider's open-data repository over HTTP with on-disk
caching.

Provider enum strings map through explicit, versioned lookup tables;
unknown values fall back to ``other`` with a logged warning.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import httpx

from .exceptions import DataIntegrityError, FeatureUnavailableError, MalformedEventError
from .features import FEATURE_NAMES, build_feature_vector
from .pitch import (
    GOAL_CENTER,
    BodyPart,
    FramePlayer,
    PitchDims,
    PitchPoint,
    PlayPattern,
    ShotEvent,
    convert_coordinates,
)

log = logging.getLogger(__name__)

# Version of the provider-string lookup tables below; bump when edited.
PROVIDER_LOOKUP_VERSION = "1"

BODY_PART_LOOKUP: Mapping[str, BodyPart] = {
    "Left Foot": BodyPart.LEFT_FOOT,
    "Right Foot": BodyPart.RIGHT_FOOT,
    "Head": BodyPart.HEAD,
    "Other": BodyPart.OTHER,
}

PLAY_PATTERN_LOOKUP: Mapping[str, PlayPattern] = {
    "Regular Play": PlayPattern.OPEN_PLAY,
    "From Counter": PlayPattern.OPEN_PLAY,
    "From Kick Off": PlayPattern.OPEN_PLAY,
    "From Throw In": PlayPattern.FROM_THROW_IN,
    "From Corner": PlayPattern.FROM_CORNER,
    "From Free Kick": PlayPattern.FROM_FREE_KICK,
    "From Goal Kick": PlayPattern.OTHER,
    "From Keeper": PlayPattern.OTHER,
    "Other": PlayPattern.OTHER,
}

PENALTY_SHOT_TYPE = "Penalty"

DEFAULT_OPEN_DATA_BASE = "https://raw.githubusercontent.com/statsbomb/open-data/master/data"

EVENTS_FILENAME = "events.json"
FRAMES_FILENAME = "frames.json"
MATCHES_FILENAME = "matches.json"

SHOTS_CSV_COLUMNS = (
    "shot_id",
    "match_id",
    "competition_id",
    "minute",
    "player_name",
    "team_name",
    "outcome_is_goal",
    "body_part",
    "play_pattern",
    "x",
    "y",
    "freeze_frame",
    "has_frame",
    *FEATURE_NAMES,
)


@dataclass(frozen=True)
class IngestConfig:
    pitch_dims: PitchDims = PitchDims(120.0, 80.0)
    include_penalties: bool = False


def _lookup_body_part(name: str | None, event_id: str) -> BodyPart:
    if name is None:
        return BodyPart.OTHER
    mapped = BODY_PART_LOOKUP.get(name)
    if mapped is None:
        log.warning("event %s: unknown body part %r mapped to 'other'", event_id, name)
        return BodyPart.OTHER
    return mapped


def _lookup_play_pattern(name: str | None, event_id: str) -> PlayPattern:
    if name is None:
        return PlayPattern.OTHER
    mapped = PLAY_PATTERN_LOOKUP.get(name)
    if mapped is None:
        log.warning("event %s: unknown play pattern %r mapped to 'other'", event_id, name)
        return PlayPattern.OTHER
    return mapped


def extract_shot_events(events_doc: Sequence[Mapping]) -> list[Mapping]:
    """Filter a provider event document down to its shot events."""
    return [e for e in events_doc if (e.get("type") or {}).get("name") == "Shot"]


def index_frames(frames_doc: Iterable[Mapping]) -> dict[str, Mapping]:
    """Index raw 360 records by event id; duplicates are a data-integrity error."""
    index: dict[str, Mapping] = {}
    for record in frames_doc:
        event_id = record.get("event_uuid")
        if event_id is None:
            continue
        if event_id in index:
            raise DataIntegrityError(f"duplicate freeze frame for event {event_id!r}")
        index[event_id] = record
    return index


def _parse_frame_players(
    record: Mapping, dims: PitchDims, event_id: str
) -> tuple[FramePlayer, ...]:
    players: list[FramePlayer] = []
    for entry in record.get("freeze_frame") or []:
        if entry.get("actor"):
            continue  # the shooter; the shot location already covers it
        location = entry.get("location")
        if not location or len(location) < 2:
            raise MalformedEventError(event_id, "frame player without a location")
        players.append(
            FramePlayer(
                location=convert_coordinates(location[0], location[1], dims, event_id=event_id),
                is_teammate=bool(entry.get("teammate")),
                is_keeper=bool(entry.get("keeper")),
            )
        )
    return _normalize_keepers(tuple(players), event_id)


def _normalize_keepers(players: tuple[FramePlayer, ...], event_id: str) -> tuple[FramePlayer, ...]:
    """Keep at most one opposing keeper: the one closest to the goal center."""
    keepers = [p for p in players if p.is_keeper and not p.is_teammate]
    if len(keepers) <= 1:
        return players
    log.warning("event %s: %d opposing keepers in frame; keeping nearest to goal", event_id, len(keepers))
    keep = min(keepers, key=lambda p: p.location.distance_to(GOAL_CENTER))
    return tuple(
        p if p is keep or p.is_teammate or not p.is_keeper
        else FramePlayer(p.location, p.is_teammate, False)
        for p in players
    )


def _parse_shot(
    raw: Mapping,
    frame_players: tuple[FramePlayer, ...],
    competition_id: str,
    match_id: str,
    dims: PitchDims,
) -> ShotEvent:
    event_id = str(raw.get("id", "<missing-id>"))
    location = raw.get("location")
    if not location or len(location) < 2:
        raise MalformedEventError(event_id, "shot without a location")
    shot_detail = raw.get("shot") or {}
    play_pattern = _lookup_play_pattern((raw.get("play_pattern") or {}).get("name"), event_id)
    if (shot_detail.get("type") or {}).get("name") == PENALTY_SHOT_TYPE:
        play_pattern = PlayPattern.PENALTY
    minute = raw.get("minute", 0)
    if not isinstance(minute, int) or minute < 0:
        raise MalformedEventError(event_id, f"bad minute {minute!r}")
    return ShotEvent(
        shot_id=event_id,
        match_id=match_id,
        competition_id=competition_id,
        minute=minute,
        player_name=(raw.get("player") or {}).get("name", "<unknown>"),
        team_name=(raw.get("team") or {}).get("name", "<unknown>"),
        outcome_is_goal=(shot_detail.get("outcome") or {}).get("name") == "Goal",
        body_part=_lookup_body_part((shot_detail.get("body_part") or {}).get("name"), event_id),
        play_pattern=play_pattern,
        location=convert_coordinates(location[0], location[1], dims, event_id=event_id),
        freeze_frame=frame_players,
    )


def merge_freeze_frames(
    events: Sequence[Mapping],
    frames: Mapping[str, Mapping],
    *,
    competition_id: str = "",
    match_id: str = "",
    dims: PitchDims = PitchDims(),
) -> list[ShotEvent]:
    """Join raw shot events with their indexed 360 records.

    Shots without a matching frame come out with an empty ``freeze_frame``,
    which marks them ineligible for modeling.
    """
    shots: list[ShotEvent] = []
    for raw in events:
        event_id = str(raw.get("id", "<missing-id>"))
        record = frames.get(event_id)
        players = _parse_frame_players(record, dims, event_id) if record else ()
        shots.append(_parse_shot(raw, players, competition_id, match_id, dims))
    return shots


def select_model_shots(shots: Sequence[ShotEvent], config: IngestConfig = IngestConfig()) -> list[ShotEvent]:
    """Shots usable for fitting: freeze frame present, penalties excluded by default."""
    selected = []
    for shot in shots:
        if not shot.has_freeze_frame:
            continue
        if shot.is_penalty and not config.include_penalties:
            continue
        selected.append(shot)
    return selected


# --- directory layout ----------------------------------------------------------


def competition_dir(data_root: str | Path, competition_id: str) -> Path:
    return Path(data_root) / competition_id


def list_competitions(data_root: str | Path) -> list[str]:
    root = Path(data_root)
    if not root.is_dir():
        return []
    return sorted(p.name for p in root.iterdir() if p.is_dir())


def list_match_ids(data_root: str | Path, competition_id: str) -> list[str]:
    comp = competition_dir(data_root, competition_id)
    if not comp.is_dir():
        return []
    return sorted(p.name for p in comp.iterdir() if p.is_dir() and (p / EVENTS_FILENAME).exists())


def load_match(
    data_root: str | Path,
    competition_id: str,
    match_id: str,
    config: IngestConfig = IngestConfig(),
) -> list[ShotEvent]:
    """Parse one match directory into merged shot events."""
    match_dir = competition_dir(data_root, competition_id) / match_id
    events_doc = json.loads((match_dir / EVENTS_FILENAME).read_text())
    frames_path = match_dir / FRAMES_FILENAME
    frames_doc = json.loads(frames_path.read_text()) if frames_path.exists() else []
    return merge_freeze_frames(
        extract_shot_events(events_doc),
        index_frames(frames_doc),
        competition_id=competition_id,
        match_id=match_id,
        dims=config.pitch_dims,
    )


def load_competition(
    data_root: str | Path,
    competition_id: str,
    config: IngestConfig = IngestConfig(),
) -> list[ShotEvent]:
    """All shots of a competition, in sorted match order."""
    shots: list[ShotEvent] = []
    seen: set[str] = set()
    for match_id in list_match_ids(data_root, competition_id):
        for shot in load_match(data_root, competition_id, match_id, config):
            if shot.shot_id in seen:
                raise DataIntegrityError(
                    f"duplicate shot id {shot.shot_id!r} in competition {competition_id!r}"
                )
            seen.add(shot.shot_id)
            shots.append(shot)
    return shots


def load_matches_index(data_root: str | Path, competition_id: str) -> list[dict]:
    """Match metadata: from the provider matches document when present."""
    path = competition_dir(data_root, competition_id) / MATCHES_FILENAME
    if path.exists():
        doc = json.loads(path.read_text())
        return [
            {
                "match_id": str(m.get("match_id")),
                "home_team": ((m.get("home_team") or {}).get("home_team_name", "")),
                "away_team": ((m.get("away_team") or {}).get("away_team_name", "")),
            }
            for m in doc
        ]
    return [
        {"match_id": match_id, "home_team": "", "away_team": ""}
        for match_id in list_match_ids(data_root, competition_id)
    ]


# --- canonical shots file -------------------------------------------------------


def _frame_to_json(frame: tuple[FramePlayer, ...]) -> str:
    return json.dumps(
        [[p.location.x, p.location.y, int(p.is_teammate), int(p.is_keeper)] for p in frame],
        separators=(",", ":"),
    )


def _frame_from_json(text: str) -> tuple[FramePlayer, ...]:
    return tuple(
        FramePlayer(PitchPoint(x, y), bool(teammate), bool(keeper))
        for x, y, teammate, keeper in json.loads(text)
    )


def write_shots_csv(shots: Sequence[ShotEvent], path: str | Path) -> None:
    """Write the canonical per-competition shots file.

    One row per shot; feature columns are filled for shots that support the
    full schema and left blank otherwise. Column names and order are fixed
    by ``SHOTS_CSV_COLUMNS``.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(SHOTS_CSV_COLUMNS)
        for shot in shots:
            feature_cells: list[str] = [""] * len(FEATURE_NAMES)
            if shot.has_freeze_frame:
                try:
                    vector = build_feature_vector(shot)
                    feature_cells = [repr(v) for v in vector.as_array().tolist()]
                except FeatureUnavailableError:
                    pass
            writer.writerow(
                [
                    shot.shot_id,
                    shot.match_id,
                    shot.competition_id,
                    shot.minute,
                    shot.player_name,
                    shot.team_name,
                    int(shot.outcome_is_goal),
                    shot.body_part.value,
                    shot.play_pattern.value,
                    repr(shot.location.x),
                    repr(shot.location.y),
                    _frame_to_json(shot.freeze_frame),
                    int(shot.has_freeze_frame),
                    *feature_cells,
                ]
            )


def read_shots_csv(path: str | Path) -> list[ShotEvent]:
    """Load shot events back from a canonical shots file."""
    shots: list[ShotEvent] = []
    with Path(path).open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            shots.append(
                ShotEvent(
                    shot_id=row["shot_id"],
                    match_id=row["match_id"],
                    competition_id=row["competition_id"],
                    minute=int(row["minute"]),
                    player_name=row["player_name"],
                    team_name=row["team_name"],
                    outcome_is_goal=bool(int(row["outcome_is_goal"])),
                    body_part=BodyPart(row["body_part"]),
                    play_pattern=PlayPattern(row["play_pattern"]),
                    location=PitchPoint(float(row["x"]), float(row["y"])),
                    freeze_frame=_frame_from_json(row["freeze_frame"]),
                )
            )
    return shots


# --- open-data fetching ---------------------------------------------------------


def fetch_competition(
    data_root: str | Path,
    competition_id: str,
    provider_competition_id: int,
    provider_season_id: int,
    *,
    base_url: str = DEFAULT_OPEN_DATA_BASE,
    client: httpx.Client | None = None,
) -> list[str]:
    """Download a competition's match documents with on-disk caching.

    Existing files are never re-downloaded. Matches without a 360 file on
    the provider side simply get no frames file. Returns the match ids.
    """
    owns_client = client is None
    client = client or httpx.Client(timeout=60.0)
    comp_dir = competition_dir(data_root, competition_id)
    comp_dir.mkdir(parents=True, exist_ok=True)
    try:
        matches_path = comp_dir / MATCHES_FILENAME
        if not matches_path.exists():
            url = f"{base_url}/matches/{provider_competition_id}/{provider_season_id}.json"
            response = client.get(url)
            response.raise_for_status()
            matches_path.write_text(response.text)
        matches = json.loads(matches_path.read_text())
        match_ids = [str(m["match_id"]) for m in matches]
        for match_id in match_ids:
            match_dir = comp_dir / match_id
            match_dir.mkdir(exist_ok=True)
            events_path = match_dir / EVENTS_FILENAME
            if not events_path.exists():
                response = client.get(f"{base_url}/events/{match_id}.json")
                response.raise_for_status()
                events_path.write_text(response.text)
            frames_path = match_dir / FRAMES_FILENAME
            if not frames_path.exists():
                response = client.get(f"{base_url}/three-sixty/{match_id}.json")
                if response.status_code == 404:
                    log.info("match %s has no 360 data", match_id)
                else:
                    response.raise_for_status()
                    frames_path.write_text(response.text)
        return match_ids
    finally:
        if owns_client:
            client.close()
