"""Pitch geometry frame and the core shot-event types.

All coordinates live on a metric pitch of 105 x 68 meters. Teams always
attack toward x = 105; the goal center sits at (105, 34) and the posts at
y = 30.34 and y = 37.66 (7.32 m goal mouth). Provider files use their own
grid and are converted on ingest.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .exceptions import MalformedEventError

PITCH_LENGTH = 105.0
PITCH_WIDTH = 68.0
GOAL_CENTER_X = 105.0
GOAL_CENTER_Y = 34.0
GOAL_WIDTH = 7.32
GOAL_LOW_POST_Y = GOAL_CENTER_Y - GOAL_WIDTH / 2  # 30.34
GOAL_HIGH_POST_Y = GOAL_CENTER_Y + GOAL_WIDTH / 2  # 37.66


@dataclass(frozen=True, slots=True)
class PitchPoint:
    """A location on the metric pitch, x in [0, 105] and y in [0, 68]."""

    x: float
    y: float

    def distance_to(self, other: "PitchPoint") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


GOAL_CENTER = PitchPoint(GOAL_CENTER_X, GOAL_CENTER_Y)
GOAL_LOW_POST = PitchPoint(GOAL_CENTER_X, GOAL_LOW_POST_Y)
GOAL_HIGH_POST = PitchPoint(GOAL_CENTER_X, GOAL_HIGH_POST_Y)


class BodyPart(str, enum.Enum):
    LEFT_FOOT = "left_foot"
    RIGHT_FOOT = "right_foot"
    HEAD = "head"
    OTHER = "other"


class PlayPattern(str, enum.Enum):
    OPEN_PLAY = "open_play"
    FROM_THROW_IN = "from_throw_in"
    FROM_CORNER = "from_corner"
    FROM_FREE_KICK = "from_free_kick"
    PENALTY = "penalty"
    OTHER = "other"


@dataclass(frozen=True, slots=True)
class FramePlayer:
    """One player visible in a freeze frame."""

    location: PitchPoint
    is_teammate: bool
    is_keeper: bool


@dataclass(frozen=True, slots=True)
class ShotEvent:
    """A single shot with its metadata and freeze-frame context."""

    shot_id: str
    match_id: str
    competition_id: str
    minute: int
    player_name: str
    team_name: str
    outcome_is_goal: bool
    body_part: BodyPart
    play_pattern: PlayPattern
    location: PitchPoint
    freeze_frame: tuple[FramePlayer, ...] = field(default_factory=tuple)

    @property
    def has_freeze_frame(self) -> bool:
        return len(self.freeze_frame) > 0

    @property
    def is_penalty(self) -> bool:
        return self.play_pattern is PlayPattern.PENALTY

    def opponents(self) -> tuple[FramePlayer, ...]:
        """Opposing players in the frame; the keeper counts as an opponent."""
        return tuple(p for p in self.freeze_frame if not p.is_teammate)

    def opposing_keeper(self) -> FramePlayer | None:
        for p in self.freeze_frame:
            if not p.is_teammate and p.is_keeper:
                return p
        return None


@dataclass(frozen=True, slots=True)
class PitchDims:
    """Provider grid dimensions, e.g. 120 x 80 for the shipped reader."""

    length: float = 120.0
    width: float = 80.0


def convert_coordinates(
    raw_x: float,
    raw_y: float,
    dims: PitchDims = PitchDims(),
    *,
    event_id: str = "<unknown>",
) -> PitchPoint:
    """Map provider-grid coordinates onto the metric pitch.

    Scales by 105/length and 68/width, then clamps marginally
    out-of-bounds values onto the pitch. Non-finite inputs raise
    :class:`MalformedEventError` carrying the event id.
    """
    if dims.length <= 0 or dims.width <= 0:
        raise ValueError(f"pitch dims must be positive, got {dims}")
    if not (math.isfinite(raw_x) and math.isfinite(raw_y)):
        raise MalformedEventError(event_id, f"non-finite coordinates ({raw_x}, {raw_y})")
    x = raw_x * PITCH_LENGTH / dims.length
    y = raw_y * PITCH_WIDTH / dims.width
    return PitchPoint(
        x=min(max(x, 0.0), PITCH_LENGTH),
        y=min(max(y, 0.0), PITCH_WIDTH),
    )


def invert_coordinates(point: PitchPoint, dims: PitchDims = PitchDims()) -> tuple[float, float]:
    """Inverse of :func:`convert_coordinates` for in-bounds points (no clamping)."""
    return point.x * dims.length / PITCH_LENGTH, point.y * dims.width / PITCH_WIDTH
