"""Automated engagement and accuracy evaluation of shot descriptions.

For each case variant the harness collects (a) a 0-5 engagement score from
a judge model and (b) per-feature contribution labels that are compared
against the ground truth from the explanation step. Cases whose text is
itself model-generated (3 and 4) regenerate their texts every run, so the
run-to-run standard deviation reflects generation variance. Unparseable
judge replies never crash a sweep; they are excluded from denominators and
reported separately.
"""

from __future__ import annotations

import enum
import re
import statistics
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .exceptions import ConfigurationError, GatewayError
from .explain import SALIENCE_THRESHOLD, ShotExplanation
from .features import FeatureVector
from .llm import DEFAULT_EVALUATION_TEMPERATURE, ChatProvider, ChatResult
from .textgen import Case, ChatMessage, PromptAssets, Role, SynthesizedText, assemble_prompt

DEFAULT_N_RUNS = 10

# Features whose contribution wording is checked by the judge.
DEFAULT_EVALUATED_FEATURES: tuple[str, ...] = ("distance_to_goal", "squared_distance_to_center")

ENGAGEMENT_PROMPT = "Rank this text on a scale from 0 to 5 for how interesting and engaging it is."

ACCURACY_PROMPT_TEMPLATE = (
    "In the following text {case_text} was {feature} a positive, negative, or not "
    "contributing factor? Respond with one of ['positive', 'negative', 'not contributing']"
)

_FIRST_INTEGER = re.compile(r"-?\d+")


class Label(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NOT_CONTRIBUTING = "not contributing"


def ground_truth_label(contribution: float, threshold: float = SALIENCE_THRESHOLD) -> Label:
    """Threshold rule for the true label; exactly +-threshold is neutral."""
    if contribution > threshold:
        return Label.POSITIVE
    if contribution < -threshold:
        return Label.NEGATIVE
    return Label.NOT_CONTRIBUTING


def build_engagement_messages(text: str) -> tuple[ChatMessage, ...]:
    return (ChatMessage(Role.USER, text), ChatMessage(Role.USER, ENGAGEMENT_PROMPT))


def build_accuracy_messages(text: str, feature_name: str) -> tuple[ChatMessage, ...]:
    prompt = ACCURACY_PROMPT_TEMPLATE.format(
        case_text=text, feature=feature_name.replace("_", " ")
    )
    return (ChatMessage(Role.USER, prompt),)


def parse_engagement_reply(reply: str) -> int | None:
    """First integer token in the reply, clamped to [0, 5]; None if absent."""
    match = _FIRST_INTEGER.search(reply)
    if match is None:
        return None
    return min(max(int(match.group()), 0), 5)


def parse_accuracy_reply(reply: str) -> Label | None:
    """Earliest case-insensitive occurrence of one of the three labels."""
    lowered = reply.lower()
    best: tuple[int, Label] | None = None
    for label in (Label.POSITIVE, Label.NEGATIVE, Label.NOT_CONTRIBUTING):
        position = lowered.find(label.value)
        if position >= 0 and (best is None or position < best[0]):
            best = (position, label)
    return best[1] if best else None


def engagement_score(text: str, judge: ChatProvider) -> int | None:
    """Ask the judge for an engagement rank; None for unparseable replies."""
    if not text:
        raise ValueError("cannot score an empty text")
    result = judge.complete(
        build_engagement_messages(text), temperature=DEFAULT_EVALUATION_TEMPERATURE
    )
    return parse_engagement_reply(result.text)


def accuracy_label(text: str, feature_name: str, judge: ChatProvider) -> Label | None:
    """Ask the judge whether a feature helped, hurt, or did not matter."""
    result = judge.complete(
        build_accuracy_messages(text, feature_name), temperature=DEFAULT_EVALUATION_TEMPERATURE
    )
    return parse_accuracy_reply(result.text)


@dataclass(frozen=True)
class EvalItem:
    """One shot's evaluation inputs: explanation, synthesized text, features."""

    shot_id: str
    explanation: ShotExplanation
    synth: SynthesizedText
    vector: FeatureVector


@dataclass(frozen=True)
class EvaluationResult:
    """Aggregated scores for one case across shots and runs.

    ``engagement_mean``/``accuracy`` values are None (absent) when every
    judgment for them was unparseable.
    """

    case_id: Case
    engagement_mean: float | None
    engagement_std: float | None
    accuracy_by_feature: Mapping[str, float | None]
    n_shots: int
    n_runs: int
    accuracy_std_by_feature: Mapping[str, float | None] = field(default_factory=dict)
    unparseable_engagement: int = 0
    unparseable_accuracy: int = 0
    generation_failures: int = 0

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id.value,
            "engagement_mean": self.engagement_mean,
            "engagement_std": self.engagement_std,
            "accuracy_by_feature": dict(self.accuracy_by_feature),
            "accuracy_std_by_feature": dict(self.accuracy_std_by_feature),
            "n_shots": self.n_shots,
            "n_runs": self.n_runs,
            "unparseable_engagement": self.unparseable_engagement,
            "unparseable_accuracy": self.unparseable_accuracy,
            "generation_failures": self.generation_failures,
        }


def _case_text(
    case: Case,
    item: EvalItem,
    assets: PromptAssets,
    generator: ChatProvider | None,
) -> str:
    """The [Case text] judged for this shot; cases 3-4 call the generator."""
    bundle = assemble_prompt(case, item.synth, item.vector, assets)
    if case in (Case.CASE3, Case.CASE4):
        if generator is None:
            raise ConfigurationError(f"{case.value} requires a generation provider")
        result: ChatResult = generator.complete(bundle.messages)
        return result.text
    return bundle.data_message()


def _mean_std(values: Sequence[float]) -> tuple[float | None, float | None]:
    if not values:
        return None, None
    mean = statistics.fmean(values)
    std = statistics.pstdev(values) if len(values) > 1 else 0.0
    return mean, std


def run_evaluation(
    items: Sequence[EvalItem],
    cases: Sequence[Case | str | int],
    judge: ChatProvider,
    *,
    n_runs: int = DEFAULT_N_RUNS,
    features: Sequence[str] = DEFAULT_EVALUATED_FEATURES,
    generator: ChatProvider | None = None,
    assets: PromptAssets | None = None,
) -> list[EvaluationResult]:
    """Score every case over ``n_runs`` repeated sweeps of the shot set.

    Accuracy for a feature is the fraction of parseable judge labels that
    match the ground-truth label of the shot's true contribution. Gateway
    failures skip the affected shot for that run and are counted in the
    result rather than aborting the sweep.
    """
    if n_runs < 1:
        raise ValueError(f"n_runs must be >= 1, got {n_runs}")
    if assets is None:
        from .textgen import load_prompt_assets

        assets = load_prompt_assets()
    case_ids = [Case.parse(c) for c in cases]
    if generator is None and any(c in (Case.CASE3, Case.CASE4) for c in case_ids):
        raise ConfigurationError("cases 3 and 4 need a generation provider")

    results: list[EvaluationResult] = []
    for case in case_ids:
        run_engagement_means: list[float] = []
        run_accuracy: dict[str, list[float]] = {f: [] for f in features}
        unparseable_engagement = 0
        unparseable_accuracy = 0
        failures = 0
        for _ in range(n_runs):
            engagement_scores: list[int] = []
            correct: dict[str, int] = {f: 0 for f in features}
            judged: dict[str, int] = {f: 0 for f in features}
            for item in items:
                try:
                    text = _case_text(case, item, assets, generator)
                except GatewayError:
                    failures += 1
                    continue
                try:
                    score = engagement_score(text, judge)
                except GatewayError:
                    failures += 1
                    score = None
                if score is None:
                    unparseable_engagement += 1
                else:
                    engagement_scores.append(score)
                for feature in features:
                    truth = ground_truth_label(item.explanation.contribution_for(feature).value)
                    try:
                        label = accuracy_label(text, feature, judge)
                    except GatewayError:
                        failures += 1
                        continue
                    if label is None:
                        unparseable_accuracy += 1
                        continue
                    judged[feature] += 1
                    if label is truth:
                        correct[feature] += 1
            if engagement_scores:
                run_engagement_means.append(statistics.fmean(engagement_scores))
            for feature in features:
                if judged[feature]:
                    run_accuracy[feature].append(correct[feature] / judged[feature])

        engagement_mean, engagement_std = _mean_std(run_engagement_means)
        accuracy_by_feature: dict[str, float | None] = {}
        accuracy_std: dict[str, float | None] = {}
        for feature in features:
            accuracy_by_feature[feature], accuracy_std[feature] = _mean_std(run_accuracy[feature])
        results.append(
            EvaluationResult(
                case_id=case,
                engagement_mean=engagement_mean,
                engagement_std=engagement_std,
                accuracy_by_feature=accuracy_by_feature,
                accuracy_std_by_feature=accuracy_std,
                n_shots=len(items),
                n_runs=n_runs,
                unparseable_engagement=unparseable_engagement,
                unparseable_accuracy=unparseable_accuracy,
                generation_failures=failures,
            )
        )
    return results


def format_results_table(results: Sequence[EvaluationResult]) -> str:
    """Plain table with one row per (case, metric): mean, std and n."""
    header = f"{'case':<7} {'metric':<40} {'mean':>8} {'std':>8} {'n':>5}"
    lines = [header, "-" * len(header)]

    def fmt(value: float | None) -> str:
        return f"{value:8.4f}" if value is not None else f"{'-':>8}"

    for result in results:
        lines.append(
            f"{result.case_id.value:<7} {'engagement':<40} "
            f"{fmt(result.engagement_mean)} {fmt(result.engagement_std)} {result.n_runs:>5}"
        )
        for feature in result.accuracy_by_feature:
            lines.append(
                f"{result.case_id.value:<7} {'accuracy: ' + feature:<40} "
                f"{fmt(result.accuracy_by_feature[feature])} "
                f"{fmt(result.accuracy_std_by_feature.get(feature))} {result.n_runs:>5}"
            )
    return "\n".join(lines) + "\n"


def results_chart_data(results: Sequence[EvaluationResult]) -> dict:
    """Bar-chart-ready structure: per-case engagement and accuracy with stds."""
    cases = [r.case_id.value for r in results]
    features = list(results[0].accuracy_by_feature) if results else []
    return {
        "cases": cases,
        "engagement": {
            "mean": [r.engagement_mean for r in results],
            "std": [r.engagement_std for r in results],
        },
        "accuracy": {
            feature: {
                "mean": [r.accuracy_by_feature.get(feature) for r in results],
                "std": [r.accuracy_std_by_feature.get(feature) for r in results],
            }
            for feature in features
        },
        "n_runs": results[0].n_runs if results else 0,
        "n_shots": results[0].n_shots if results else 0,
    }
