"""Shot feature extraction on the metric pitch.

Computes the 11 model features plus the diagnostic features that were
evaluated but left out of the final schema. Counting and distance kernels
dispatch to the compiled backend when available (see ``kernels``).

Feature order is fixed by ``FEATURE_NAMES`` and must be identical across
fitting, explanation and serialization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from . import kernels
from .exceptions import DegenerateGeometryError, FeatureUnavailableError
from .pitch import (
    GOAL_CENTER,
    GOAL_HIGH_POST,
    GOAL_LOW_POST,
    BodyPart,
    FramePlayer,
    PitchPoint,
    PlayPattern,
    ShotEvent,
)

# Boundary membership tolerance for triangle and radius tests, in meters.
BOUNDARY_EPS = 1e-9

NEARBY_RADIUS = 3.0

FEATURE_NAMES: tuple[str, ...] = (
    "squared_distance_to_center",
    "distance_to_goal",
    "nearby_opponents_3m",
    "opponents_in_triangle",
    "gk_distance_to_goal",
    "distance_to_nearest_opponent",
    "angle_to_gk",
    "shot_with_left_foot",
    "shot_after_throw_in",
    "shot_after_corner",
    "shot_after_free_kick",
)

DIAGNOSTIC_NAMES: tuple[str, ...] = (
    "angle_to_goal",
    "distance_to_gk",
    "vertical_distance_to_center",
    "angle_to_nearest_opponent",
)


@dataclass(frozen=True, slots=True)
class FeatureVector:
    """The model features for one shot, in schema order.

    Continuous fields are meters, square meters or degrees; count fields are
    non-negative integers; the last four fields are 0/1 flags.
    """

    squared_distance_to_center: float
    distance_to_goal: float
    nearby_opponents_3m: int
    opponents_in_triangle: int
    gk_distance_to_goal: float
    distance_to_nearest_opponent: float
    angle_to_gk: float
    shot_with_left_foot: int
    shot_after_throw_in: int
    shot_after_corner: int
    shot_after_free_kick: int

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=float)

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in FEATURE_NAMES}

    @classmethod
    def from_array(cls, values) -> "FeatureVector":
        values = list(values)
        if len(values) != len(FEATURE_NAMES):
            raise ValueError(f"expected {len(FEATURE_NAMES)} values, got {len(values)}")
        kwargs = {}
        for name, value in zip(FEATURE_NAMES, values):
            kwargs[name] = int(value) if _is_integral_field(name) else float(value)
        return cls(**kwargs)


def _is_integral_field(name: str) -> bool:
    return name in (
        "nearby_opponents_3m",
        "opponents_in_triangle",
        "shot_with_left_foot",
        "shot_after_throw_in",
        "shot_after_corner",
        "shot_after_free_kick",
    )


assert tuple(f.name for f in fields(FeatureVector)) == FEATURE_NAMES


@dataclass(frozen=True, slots=True)
class DiagnosticFeatures:
    """Features computed for correlation diagnostics only."""

    angle_to_goal: float
    distance_to_gk: float
    vertical_distance_to_center: float
    angle_to_nearest_opponent: float


def _opponent_arrays(frame: tuple[FramePlayer, ...] | list[FramePlayer]) -> tuple[np.ndarray, np.ndarray]:
    xs = np.array([p.location.x for p in frame if not p.is_teammate], dtype=float)
    ys = np.array([p.location.y for p in frame if not p.is_teammate], dtype=float)
    return xs, ys


def distance_to_goal(p: PitchPoint) -> float:
    """Euclidean distance from the shot location to the goal center (105, 34)."""
    return p.distance_to(GOAL_CENTER)


def squared_distance_to_center(p: PitchPoint) -> float:
    """Squared vertical offset from the pitch centerline, (y - 34)^2."""
    return (p.y - GOAL_CENTER.y) ** 2


def vertical_distance_to_center(p: PitchPoint) -> float:
    return abs(p.y - GOAL_CENTER.y)


def angle_to_goal(p: PitchPoint) -> float:
    """Angle in degrees subtended at the shot location by the two goalposts.

    180 on the goal line between the posts, 0 on the goal line outside them.
    Diagnostic only; raises for a shot coincident with a post.
    """
    ux, uy = GOAL_LOW_POST.x - p.x, GOAL_LOW_POST.y - p.y
    vx, vy = GOAL_HIGH_POST.x - p.x, GOAL_HIGH_POST.y - p.y
    if (ux == 0 and uy == 0) or (vx == 0 and vy == 0):
        raise DegenerateGeometryError(f"shot location coincides with a goalpost: {p}")
    cross = ux * vy - uy * vx
    dot = ux * vx + uy * vy
    return math.degrees(math.atan2(abs(cross), dot))


def angle_to_gk(shot: PitchPoint, gk: PitchPoint) -> float:
    """Angle in degrees between the shot-to-keeper vector and the goal line.

    90 means the keeper is straight downfield of the shot; 0 means level with
    it. Always in [0, 90].
    """
    if shot == gk:
        raise DegenerateGeometryError("shot and goalkeeper locations coincide")
    return math.degrees(math.atan2(abs(gk.x - shot.x), abs(gk.y - shot.y)))


def opponents_in_triangle(shot: PitchPoint, frame: tuple[FramePlayer, ...] | list[FramePlayer]) -> int:
    """Opposing players (keeper included) inside the shot-to-posts triangle.

    Boundary-inclusive within ``BOUNDARY_EPS``. A shot on the goal line makes
    the triangle degenerate; the count then covers opponents on the resulting
    segment.
    """
    xs, ys = _opponent_arrays(frame)
    if len(xs) == 0:
        return 0
    if shot.x == GOAL_LOW_POST.x:  # collinear with the posts: degenerate triangle
        y_lo = min(shot.y, GOAL_LOW_POST.y)
        y_hi = max(shot.y, GOAL_HIGH_POST.y)
        return kernels.count_on_segment(shot.x, y_lo, shot.x, y_hi, xs, ys, BOUNDARY_EPS)
    return kernels.count_in_triangle(
        shot.x,
        shot.y,
        GOAL_LOW_POST.x,
        GOAL_LOW_POST.y,
        GOAL_HIGH_POST.x,
        GOAL_HIGH_POST.y,
        xs,
        ys,
        BOUNDARY_EPS,
    )


def nearby_opponents_3m(shot: PitchPoint, frame: tuple[FramePlayer, ...] | list[FramePlayer]) -> int:
    """Opposing players (keeper included) within 3 meters of the shot, inclusive."""
    xs, ys = _opponent_arrays(frame)
    if len(xs) == 0:
        return 0
    return kernels.count_within(shot.x, shot.y, xs, ys, NEARBY_RADIUS, BOUNDARY_EPS)


def distance_to_nearest_opponent(shot: PitchPoint, frame: tuple[FramePlayer, ...] | list[FramePlayer]) -> float:
    """Minimum Euclidean distance to any opposing player."""
    xs, ys = _opponent_arrays(frame)
    if len(xs) == 0:
        raise FeatureUnavailableError("distance_to_nearest_opponent", "no opponents in frame")
    return kernels.min_distance(shot.x, shot.y, xs, ys)


def _nearest_opponent(shot: PitchPoint, frame) -> FramePlayer:
    opponents = [p for p in frame if not p.is_teammate]
    if not opponents:
        raise FeatureUnavailableError("angle_to_nearest_opponent", "no opponents in frame")
    return min(opponents, key=lambda p: shot.distance_to(p.location))


def build_feature_vector(shot: ShotEvent) -> FeatureVector:
    """Assemble the full 11-feature vector for an eligible shot.

    Requires a freeze frame with a visible opposing keeper; raises
    :class:`FeatureUnavailableError` naming the first schema feature that
    cannot be computed.
    """
    keeper = shot.opposing_keeper()
    if keeper is None:
        raise FeatureUnavailableError("gk_distance_to_goal", f"no opposing keeper visible for shot {shot.shot_id}")
    return FeatureVector(
        squared_distance_to_center=squared_distance_to_center(shot.location),
        distance_to_goal=distance_to_goal(shot.location),
        nearby_opponents_3m=nearby_opponents_3m(shot.location, shot.freeze_frame),
        opponents_in_triangle=opponents_in_triangle(shot.location, shot.freeze_frame),
        gk_distance_to_goal=keeper.location.distance_to(GOAL_CENTER),
        distance_to_nearest_opponent=distance_to_nearest_opponent(shot.location, shot.freeze_frame),
        angle_to_gk=angle_to_gk(shot.location, keeper.location),
        shot_with_left_foot=int(shot.body_part is BodyPart.LEFT_FOOT),
        shot_after_throw_in=int(shot.play_pattern is PlayPattern.FROM_THROW_IN),
        shot_after_corner=int(shot.play_pattern is PlayPattern.FROM_CORNER),
        shot_after_free_kick=int(shot.play_pattern is PlayPattern.FROM_FREE_KICK),
    )


def diagnostic_features(shot: ShotEvent) -> DiagnosticFeatures:
    """The dropped-feature set, using the same goal-line angle convention."""
    keeper = shot.opposing_keeper()
    if keeper is None:
        raise FeatureUnavailableError("distance_to_gk", f"no opposing keeper visible for shot {shot.shot_id}")
    nearest = _nearest_opponent(shot.location, shot.freeze_frame)
    return DiagnosticFeatures(
        angle_to_goal=angle_to_goal(shot.location),
        distance_to_gk=shot.location.distance_to(keeper.location),
        vertical_distance_to_center=vertical_distance_to_center(shot.location),
        angle_to_nearest_opponent=angle_to_gk(shot.location, nearest.location),
    )


def collect_correlation_columns(shots: list[ShotEvent]) -> dict[str, list[float]]:
    """Aligned model and diagnostic feature columns for correlation reports.

    Covers the shots that support the full schema; used to reproduce the
    dropped-feature correlation diagnostics.
    """
    columns: dict[str, list[float]] = {
        name: [] for name in (*FEATURE_NAMES, *DIAGNOSTIC_NAMES)
    }
    for shot in shots:
        try:
            vector = build_feature_vector(shot)
            diag = diagnostic_features(shot)
        except FeatureUnavailableError:
            continue
        for name in FEATURE_NAMES:
            columns[name].append(float(getattr(vector, name)))
        for name in DIAGNOSTIC_NAMES:
            columns[name].append(float(getattr(diag, name)))
    return columns


@dataclass(frozen=True)
class DesignMatrix:
    """Training inputs for one competition plus the shots that were skipped."""

    shot_ids: tuple[str, ...]
    X: np.ndarray  # (n_shots, 11)
    y: np.ndarray  # (n_shots,) of 0/1
    skipped: tuple[tuple[str, str], ...]  # (shot_id, reason)


def build_design_matrix(shots: list[ShotEvent]) -> DesignMatrix:
    """Feature matrix and outcomes for all shots that support the full schema.

    Shots without a visible keeper (or any opponent) cannot populate the
    goalkeeper and nearest-opponent features and are skipped with a reason.
    """
    ids: list[str] = []
    rows: list[np.ndarray] = []
    outcomes: list[int] = []
    skipped: list[tuple[str, str]] = []
    for shot in shots:
        try:
            vec = build_feature_vector(shot)
        except FeatureUnavailableError as exc:
            skipped.append((shot.shot_id, str(exc)))
            continue
        ids.append(shot.shot_id)
        rows.append(vec.as_array())
        outcomes.append(int(shot.outcome_is_goal))
    X = np.array(rows, dtype=float) if rows else np.empty((0, len(FEATURE_NAMES)))
    y = np.array(outcomes, dtype=float)
    return DesignMatrix(shot_ids=tuple(ids), X=X, y=y, skipped=tuple(skipped))
