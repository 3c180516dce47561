"""Interpretable expected-goals models with natural-language shot commentary.

The pipeline: ingest provider shot and freeze-frame data onto a metric
pitch, compute geometric and contextual shot features, fit one logistic
goal-probability model per competition, explain each shot through
mean-centered feature contributions, render those explanations as text,
and hand them to a chat model for commentary. An evaluation harness scores
generated texts for engagement and factual accuracy with a judge model.
"""

from .evaluation import EvalItem, EvaluationResult, ground_truth_label, run_evaluation
from .explain import (
    CategoryBands,
    Direction,
    QualityCategory,
    ShotExplanation,
    categorize_xg,
    compute_bands,
    contributions,
    feature_band,
)
from .features import (
    FEATURE_NAMES,
    DiagnosticFeatures,
    FeatureVector,
    build_design_matrix,
    build_feature_vector,
)
from .glm import (
    CorrelationReport,
    FittedModel,
    correlation_report,
    fit,
    load_model,
    predict_log_odds,
    predict_xg,
    save_model,
)
from .ingest import IngestConfig, merge_freeze_frames, select_model_shots
from .llm import ChatResult, LlmConfig, MockProvider, chat, fingerprint_messages
from .pitch import (
    BodyPart,
    FramePlayer,
    PitchDims,
    PitchPoint,
    PlayPattern,
    ShotEvent,
    convert_coordinates,
)
from .textgen import (
    Case,
    ChatMessage,
    PromptAssets,
    PromptBundle,
    SynthesizedText,
    assemble_prompt,
    load_prompt_assets,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "BodyPart",
    "Case",
    "CategoryBands",
    "ChatMessage",
    "ChatResult",
    "CorrelationReport",
    "DiagnosticFeatures",
    "Direction",
    "EvalItem",
    "EvaluationResult",
    "FEATURE_NAMES",
    "FeatureVector",
    "FittedModel",
    "FramePlayer",
    "IngestConfig",
    "LlmConfig",
    "MockProvider",
    "PitchDims",
    "PitchPoint",
    "PlayPattern",
    "PromptAssets",
    "PromptBundle",
    "QualityCategory",
    "ShotEvent",
    "ShotExplanation",
    "SynthesizedText",
    "assemble_prompt",
    "build_design_matrix",
    "build_feature_vector",
    "categorize_xg",
    "chat",
    "compute_bands",
    "contributions",
    "convert_coordinates",
    "correlation_report",
    "feature_band",
    "fingerprint_messages",
    "fit",
    "ground_truth_label",
    "load_model",
    "load_prompt_assets",
    "merge_freeze_frames",
    "predict_log_odds",
    "predict_xg",
    "run_evaluation",
    "save_model",
    "select_model_shots",
    "synthesize",
]
