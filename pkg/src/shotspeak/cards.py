"""Model card generation.

Produces a deterministic markdown document covering the data sources,
feature schema, per-competition coefficient tables, category thresholds,
prompt assets and known limitations. Regenerating from the same fitted
models yields byte-identical output, so the card can live under version
control.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .evaluation import ACCURACY_PROMPT_TEMPLATE, ENGAGEMENT_PROMPT, DEFAULT_N_RUNS
from .explain import SALIENCE_THRESHOLD, XG_THRESHOLDS, CategoryBands
from .features import FEATURE_NAMES
from .glm import FittedModel
from .ingest import PROVIDER_LOOKUP_VERSION
from .textgen import PromptAssets

FEATURE_DESCRIPTIONS: Mapping[str, tuple[str, str]] = {
    "squared_distance_to_center": ("m^2", "squared vertical offset from the pitch centerline"),
    "distance_to_goal": ("m", "Euclidean distance from the shot to the goal center (105, 34)"),
    "nearby_opponents_3m": ("count", "opposing players within 3 m of the shot (keeper included)"),
    "opponents_in_triangle": ("count", "opposing players inside the shot-to-posts triangle"),
    "gk_distance_to_goal": ("m", "keeper's Euclidean distance to the goal center"),
    "distance_to_nearest_opponent": ("m", "Euclidean distance to the closest opposing player"),
    "angle_to_gk": ("degrees", "angle of the shot-to-keeper vector relative to the goal line"),
    "shot_with_left_foot": ("0/1", "shot struck with the left foot"),
    "shot_after_throw_in": ("0/1", "possession phase started with a throw-in"),
    "shot_after_corner": ("0/1", "possession phase started with a corner"),
    "shot_after_free_kick": ("0/1", "possession phase started with a free kick"),
}

LIMITATIONS = (
    "Coefficients reflect the shot mix of each competition's dataset; applying a model "
    "to shots from another competition, season or level of play carries dataset bias.",
    "Distance to goal is measured to the goal center point (105, 34) rather than to the "
    "nearest point of the goal mouth; feature values near the byline are sensitive to "
    "this convention.",
    "The goalkeeper-distance-to-goal feature is retained in the schema for interpretability "
    "even though its significance is weak in some fits; treat its coefficient with care.",
    "Shots without freeze-frame coverage are excluded from fitting because the four "
    "opponent-derived features are undefined for them; coverage varies by competition.",
    "Penalties are excluded by default; including them shifts the intercept and the "
    "distance coefficients.",
    "Provider coordinates are clamped onto the 105 x 68 m pitch; players recorded "
    "marginally out of bounds are moved onto the boundary.",
    "Generated commentary is only as faithful as the synthesized description; the "
    "language model may still phrase neutral factors suggestively.",
)


def _coefficient_table(model: FittedModel) -> list[str]:
    lines = [
        "| feature | coefficient | std. error | p-value |",
        "| --- | ---: | ---: | ---: |",
        f"| intercept | {model.intercept:.6f} | {model.standard_errors[0]:.6f} | {model.p_values[0]:.4g} |",
    ]
    for name, coef, se, p in zip(
        model.feature_names, model.coefficients, model.standard_errors[1:], model.p_values[1:]
    ):
        lines.append(f"| {name} | {coef:.6f} | {se:.6f} | {p:.4g} |")
    return lines


def generate_model_card(
    models: Sequence[FittedModel],
    assets: PromptAssets,
    config=None,
    bands_by_competition: Mapping[str, CategoryBands] | None = None,
) -> str:
    """Render the model card markdown for the given fitted models."""
    if not models:
        raise ValueError("model card needs at least one fitted model")
    bands_by_competition = bands_by_competition or {}
    data_root = getattr(config, "data_root", "data")

    lines: list[str] = []
    push = lines.append
    push("# Shot quality and commentary model card")
    push("")
    push("## Overview")
    push("")
    push(
        "This system estimates the probability that a football shot becomes a goal "
        "(its expected-goals value), explains each estimate through per-feature "
        "log-odds contributions, and turns those explanations into natural-language "
        "commentary via a staged chat prompt. One logistic-regression model is fitted "
        "per competition by unpenalized maximum likelihood, so coefficients are "
        "directly interpretable and contribution sums reproduce the model's own "
        "log-odds exactly."
    )
    push("")
    push("## Training data")
    push("")
    push(
        f"Shots are parsed from provider event and 360 freeze-frame documents under "
        f"`{data_root}/<competition_id>/<match_id>/`. Provider coordinates are converted "
        f"onto a fixed 105 x 68 m pitch. Provider enum strings map through versioned "
        f"lookup tables (version {PROVIDER_LOOKUP_VERSION}); unknown values fall back to "
        f"`other`. Shots without a freeze frame or a visible opposing keeper, and "
        f"penalties (by default), are excluded from fitting."
    )
    push("")
    push("## Feature schema")
    push("")
    push("| # | feature | units | description |")
    push("| ---: | --- | --- | --- |")
    for index, name in enumerate(FEATURE_NAMES, start=1):
        units, description = FEATURE_DESCRIPTIONS[name]
        push(f"| {index} | {name} | {units} | {description} |")
    push("")
    push("## Fitted models")
    for model in sorted(models, key=lambda m: m.competition_id):
        push("")
        push(f"### {model.competition_id}")
        push("")
        push(
            f"Fitted on {model.n_shots} shots ({model.n_goals} goals), "
            f"log-likelihood {model.log_likelihood:.4f}, "
            f"converged: {'yes' if model.converged else 'no'}."
        )
        push("")
        lines.extend(_coefficient_table(model))
        bands = bands_by_competition.get(model.competition_id)
        if bands is not None:
            push("")
            push("Percentile cut points (25/50/75/90) used for verbal feature bands:")
            push("")
            for feature, band in sorted(bands.feature_percentiles.items()):
                cuts = ", ".join(f"{c:.3f}" for c in band.cuts)
                push(f"- {feature}: {cuts}")
    push("")
    push("## Explanations and wording")
    push("")
    push(
        f"A feature's contribution to a shot is its coefficient times the mean-centered "
        f"feature value, in log-odds units. Features with contributions beyond "
        f"+-{SALIENCE_THRESHOLD} are called salient and drive the commentary; smaller "
        f"contributions are treated as neutral."
    )
    push("")
    push(
        "Expected-goals values map onto five chance-quality categories at fixed "
        "thresholds: "
        f"slim < {XG_THRESHOLDS[0]}, low < {XG_THRESHOLDS[1]}, decent < {XG_THRESHOLDS[2]}, "
        f"high-quality < {XG_THRESHOLDS[3]}, excellent otherwise. Continuous features are "
        "verbalized through per-competition 25/50/75/90 percentile bands with editable "
        "word tables."
    )
    push("")
    push("## Prompt assets")
    push("")
    push(
        f"The staged prompt uses an editable persona ({len(assets.persona.split())} words), "
        f"{len(assets.qa_pairs)} question/answer knowledge pairs, "
        f"{len(assets.few_shot)} few-shot example pairs and a fixed answer instruction. "
        f"All four ship as plain text/CSV assets."
    )
    push("")
    push("## Evaluation protocol")
    push("")
    push(
        f"Generated texts are scored for engagement with the judge prompt "
        f'"{ENGAGEMENT_PROMPT}" and for per-feature accuracy with the prompt template '
        f'"{ACCURACY_PROMPT_TEMPLATE}". Accuracy compares judge labels against the '
        f"ground-truth contribution thresholds. Scores are averaged over "
        f"{DEFAULT_N_RUNS} runs by default."
    )
    push("")
    push("## Limitations")
    push("")
    for limitation in LIMITATIONS:
        push(f"- {limitation}")
    push("")
    return "\n".join(lines)
