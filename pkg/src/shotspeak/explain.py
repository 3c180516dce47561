"""Per-shot feature contributions and verbal category bands.

A shot's contribution for a feature is the coefficient times the
mean-centered feature value, so contributions describe what was unusual
about this shot relative to the competition. The salience threshold of
0.1 log-odds units separates features worth talking about from noise.

Quality categories use fixed xG thresholds so texts stay comparable across
competitions; continuous-feature wording uses per-competition empirical
percentiles.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .exceptions import ContractViolationError, SchemaMismatchError
from .features import FEATURE_NAMES, FeatureVector
from .glm import FittedModel, predict_log_odds, predict_xg

SALIENCE_THRESHOLD = 0.1

# Quality-band cut points on the xG scale (25th/50th/75th/90th percentiles).
XG_THRESHOLDS: tuple[float, float, float, float] = (0.028, 0.056, 0.096, 0.3)

# Continuous features that get percentile-based wording.
BANDED_FEATURES: tuple[str, ...] = (
    "squared_distance_to_center",
    "distance_to_goal",
    "gk_distance_to_goal",
    "distance_to_nearest_opponent",
    "angle_to_gk",
)

BAND_PERCENTILES = (25.0, 50.0, 75.0, 90.0)


class QualityCategory(str, enum.Enum):
    SLIM = "slim"
    LOW = "low"
    DECENT = "decent"
    HIGH_QUALITY = "high_quality"
    EXCELLENT = "excellent"


CATEGORY_ORDER: tuple[QualityCategory, ...] = (
    QualityCategory.SLIM,
    QualityCategory.LOW,
    QualityCategory.DECENT,
    QualityCategory.HIGH_QUALITY,
    QualityCategory.EXCELLENT,
)


class Direction(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


def categorize_xg(xg: float, thresholds: Sequence[float] = XG_THRESHOLDS) -> QualityCategory:
    """Map an xG value onto its quality category; ties go to the upper band."""
    if not (math.isfinite(xg) and 0.0 <= xg <= 1.0):
        raise ContractViolationError(f"xG must lie in [0, 1], got {xg!r}")
    for threshold, category in zip(thresholds, CATEGORY_ORDER):
        if xg < threshold:
            return category
    return CATEGORY_ORDER[-1]


@dataclass(frozen=True, slots=True)
class Contribution:
    feature_name: str
    value: float  # log-odds units
    direction: Direction


@dataclass(frozen=True)
class ShotExplanation:
    """xG, log-odds and the mean-centered contribution breakdown for one shot."""

    shot_id: str
    xg: float
    log_odds: float
    baseline_log_odds: float  # intercept plus coefficient-weighted feature means
    contributions: tuple[Contribution, ...]  # schema order
    quality_category: QualityCategory
    salient: tuple[str, ...]  # non-neutral features, |contribution| descending

    def contribution_for(self, feature_name: str) -> Contribution:
        for c in self.contributions:
            if c.feature_name == feature_name:
                return c
        raise KeyError(feature_name)

    def to_dict(self) -> dict:
        return {
            "shot_id": self.shot_id,
            "xg": self.xg,
            "log_odds": self.log_odds,
            "baseline_log_odds": self.baseline_log_odds,
            "quality_category": self.quality_category.value,
            "contributions": [
                {"feature_name": c.feature_name, "value": c.value, "direction": c.direction.value}
                for c in self.contributions
            ],
            "salient": list(self.salient),
        }


def _direction(value: float, threshold: float) -> Direction:
    if value > threshold:
        return Direction.POSITIVE
    if value < -threshold:
        return Direction.NEGATIVE
    return Direction.NEUTRAL


def contributions(
    model: FittedModel,
    x: FeatureVector,
    *,
    shot_id: str = "",
    threshold: float = SALIENCE_THRESHOLD,
) -> ShotExplanation:
    """Mean-centered contribution of every feature to the shot's log-odds.

    The identity ``baseline + sum(contributions) == log_odds`` holds to
    floating-point accuracy by construction.
    """
    if model.feature_names != FEATURE_NAMES:
        divergent = next(
            (m for m, f in zip(model.feature_names, FEATURE_NAMES) if m != f),
            model.feature_names[len(FEATURE_NAMES):][0] if len(model.feature_names) > len(FEATURE_NAMES) else "<missing>",
        )
        raise SchemaMismatchError(str(divergent))
    values = x.as_array()
    items = tuple(
        Contribution(
            feature_name=name,
            value=coef * (value - mean),
            direction=_direction(coef * (value - mean), threshold),
        )
        for name, coef, value, mean in zip(
            FEATURE_NAMES, model.coefficients, values, model.feature_means
        )
    )
    log_odds = predict_log_odds(model, x)
    xg = predict_xg(model, x)
    baseline = float(model.intercept + np.dot(model.coefficients, model.feature_means))
    salient = tuple(
        c.feature_name
        for c in sorted(
            (c for c in items if c.direction is not Direction.NEUTRAL),
            key=lambda c: -abs(c.value),  # stable sort keeps schema order on ties
        )
    )
    return ShotExplanation(
        shot_id=shot_id,
        xg=xg,
        log_odds=log_odds,
        baseline_log_odds=baseline,
        contributions=items,
        quality_category=categorize_xg(xg),
        salient=salient,
    )


# --- percentile word bands ----------------------------------------------------


@dataclass(frozen=True)
class FeatureBand:
    """Percentile cut points (25/50/75/90) plus the five attached word labels."""

    cuts: tuple[float, float, float, float]
    labels: tuple[str, str, str, str, str]


@dataclass(frozen=True)
class CategoryBands:
    xg_thresholds: tuple[float, float, float, float]
    feature_percentiles: Mapping[str, FeatureBand]

    def to_dict(self) -> dict:
        return {
            "xg_thresholds": list(self.xg_thresholds),
            "feature_percentiles": {
                name: {"cuts": list(band.cuts), "labels": list(band.labels)}
                for name, band in sorted(self.feature_percentiles.items())
            },
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "CategoryBands":
        return cls(
            xg_thresholds=tuple(doc["xg_thresholds"]),
            feature_percentiles={
                name: FeatureBand(cuts=tuple(spec["cuts"]), labels=tuple(spec["labels"]))
                for name, spec in doc["feature_percentiles"].items()
            },
        )


def compute_bands(
    design: Sequence[FeatureVector] | np.ndarray,
    labels_by_feature: Mapping[str, Sequence[str]],
    *,
    features: Sequence[str] = BANDED_FEATURES,
) -> CategoryBands:
    """Empirical percentile bands for the continuous features of one competition."""
    if len(design) and isinstance(design[0], FeatureVector):
        X = np.array([v.as_array() for v in design], dtype=float)
    else:
        X = np.asarray(design, dtype=float)
    bands: dict[str, FeatureBand] = {}
    for name in features:
        labels = tuple(labels_by_feature[name])
        if len(labels) != 5:
            raise ContractViolationError(f"feature {name!r} needs 5 labels, got {len(labels)}")
        column = X[:, FEATURE_NAMES.index(name)]
        cuts = tuple(float(c) for c in np.percentile(column, BAND_PERCENTILES))
        bands[name] = FeatureBand(cuts=cuts, labels=labels)
    return CategoryBands(xg_thresholds=XG_THRESHOLDS, feature_percentiles=bands)


def feature_band(feature_name: str, value: float, bands: CategoryBands) -> str:
    """Word label for a continuous feature value; ties go to the upper bin."""
    try:
        band = bands.feature_percentiles[feature_name]
    except KeyError:
        raise KeyError(f"no percentile band for feature {feature_name!r}") from None
    bin_index = sum(value >= cut for cut in band.cuts)
    return band.labels[bin_index]


def save_bands(bands: CategoryBands, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(bands.to_dict(), indent=2, sort_keys=True) + "\n")


def load_bands(path: str | Path) -> CategoryBands:
    return CategoryBands.from_dict(json.loads(Path(path).read_text()))
