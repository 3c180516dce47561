"""Synthesized shot descriptions and chat-prompt assembly.

Turns a shot's explanation into three text sections (chance quality,
banded feature wording, ranked contributions) and assembles the message
sequence for each of the five evaluation cases. Wording comes from the
editable word-table asset; verbal bands replace raw numbers so the only
numeral in a description is the xG value itself.
"""

from __future__ import annotations

import csv
import enum
import json
import logging
import warnings
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path
from typing import Mapping

from .exceptions import AssetParseError, ConfigurationError
from .explain import CategoryBands, Direction, ShotExplanation, feature_band
from .features import FEATURE_NAMES, FeatureVector, _is_integral_field
from .pitch import ShotEvent

log = logging.getLogger(__name__)

DEFAULT_ASSETS_DIR = Path(str(files("shotspeak") / "assets"))

SECTION_SEPARATOR = "\n\n"

COUNT_FEATURES = ("nearby_opponents_3m", "opponents_in_triangle")
BINARY_FEATURES = (
    "shot_with_left_foot",
    "shot_after_throw_in",
    "shot_after_corner",
    "shot_after_free_kick",
)


class Case(str, enum.Enum):
    CASE1 = "case1"  # quality + features text only
    CASE2 = "case2"  # quality + features + contributions text
    CASE3 = "case3"  # persona + data, no knowledge or answer guidance
    CASE4 = "case4"  # the full prompt sequence
    CASE5 = "case5"  # numeric baseline: raw name/value lines

    @classmethod
    def parse(cls, value: "Case | str | int") -> "Case":
        if isinstance(value, cls):
            return value
        if isinstance(value, int):
            return cls(f"case{value}")
        text = str(value).strip().lower()
        return cls(f"case{text}" if text.isdigit() else text)


class Role(str, enum.Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


@dataclass(frozen=True, slots=True)
class ChatMessage:
    role: Role
    content: str


@dataclass(frozen=True)
class PromptBundle:
    """Ordered message sequence for one wordalisation case."""

    case_id: Case
    messages: tuple[ChatMessage, ...]

    def to_wire(self) -> list[dict[str, str]]:
        return [{"role": m.role.value, "content": m.content} for m in self.messages]

    def data_message(self) -> str:
        """The data-stage message: the last user message before any instruction."""
        user_messages = [m for m in self.messages if m.role is Role.USER]
        if self.case_id is Case.CASE4:
            return user_messages[-2].content
        return user_messages[-1].content


@dataclass(frozen=True)
class SynthesizedText:
    quality_section: str
    features_section: str
    contributions_section: str

    def descriptive_text(self) -> str:
        """Quality and feature wording without the contribution ranking."""
        return self.quality_section + SECTION_SEPARATOR + self.features_section

    def full_text(self) -> str:
        return self.descriptive_text() + SECTION_SEPARATOR + self.contributions_section


# --- word tables ---------------------------------------------------------------


@dataclass(frozen=True)
class WordTables:
    """Editable wording: band labels, count/binary sentences, display names."""

    banded_sentences: Mapping[str, str]  # feature -> sentence template with {label}
    banded_labels: Mapping[str, tuple[str, ...]]
    count_sentences: Mapping[str, Mapping[str, str]]  # feature -> {"0","1","2","many"}
    binary_sentences: Mapping[str, Mapping[str, str]]  # feature -> {"true","false"}
    display_names: Mapping[str, str]
    category_sentences: Mapping[str, str]


def load_word_tables(path: str | Path | None = None) -> WordTables:
    path = Path(path) if path is not None else DEFAULT_ASSETS_DIR / "word_tables.json"
    doc = json.loads(Path(path).read_text())
    return WordTables(
        banded_sentences={name: spec["sentence"] for name, spec in doc["banded"].items()},
        banded_labels={name: tuple(spec["labels"]) for name, spec in doc["banded"].items()},
        count_sentences=doc["counts"],
        binary_sentences=doc["binary"],
        display_names=doc["display_names"],
        category_sentences=doc["category_sentences"],
    )


# --- prompt assets -------------------------------------------------------------


@dataclass(frozen=True)
class PromptAssets:
    """Persona, Q/A knowledge pairs, few-shot examples and the answer instruction."""

    persona: str
    qa_pairs: tuple[tuple[str, str], ...]
    few_shot: tuple[tuple[str, str], ...]
    instruction: str


def _read_pair_table(path: Path, columns: tuple[str, str]) -> tuple[tuple[str, str], ...]:
    pairs: list[tuple[str, str]] = []
    seen: set[str] = set()
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            return ()
        if [h.strip().lower() for h in header] != list(columns):
            raise AssetParseError(str(path), 1, f"expected header {','.join(columns)}")
        for row_number, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2 or not row[0].strip() or not row[1].strip():
                raise AssetParseError(str(path), row_number, f"expected two non-empty {columns} cells")
            first = row[0].strip()
            if first in seen:
                warnings.warn(f"{path.name}:{row_number}: duplicate entry {first[:60]!r}; keeping both")
            seen.add(first)
            pairs.append((first, row[1].strip()))
    return tuple(pairs)


def load_prompt_assets(directory: str | Path | None = None) -> PromptAssets:
    """Load persona.txt, qa_pairs.csv, few_shot.csv and instruction.txt.

    Raises :class:`AssetParseError` with the row number for malformed rows.
    """
    directory = Path(directory) if directory is not None else DEFAULT_ASSETS_DIR
    persona = (directory / "persona.txt").read_text(encoding="utf-8").strip()
    instruction = (directory / "instruction.txt").read_text(encoding="utf-8").strip()
    qa_pairs = _read_pair_table(directory / "qa_pairs.csv", ("question", "answer"))
    few_shot = _read_pair_table(directory / "few_shot.csv", ("synthesized_text", "example_output"))
    log.info(
        "loaded prompt assets from %s: %d Q/A pairs, %d few-shot examples",
        directory,
        len(qa_pairs),
        len(few_shot),
    )
    return PromptAssets(persona=persona, qa_pairs=qa_pairs, few_shot=few_shot, instruction=instruction)


# --- synthesis -----------------------------------------------------------------


def _count_sentence(tables: WordTables, feature: str, value: int) -> str:
    sentences = tables.count_sentences[feature]
    key = str(value) if str(value) in sentences else "many"
    return sentences[key]


def _feature_sentence(
    feature: str, vector: FeatureVector, bands: CategoryBands, tables: WordTables
) -> str:
    value = getattr(vector, feature)
    if feature in tables.banded_sentences:
        label = feature_band(feature, float(value), bands)
        return tables.banded_sentences[feature].format(label=label)
    if feature in COUNT_FEATURES:
        return _count_sentence(tables, feature, int(value))
    if feature in BINARY_FEATURES:
        return tables.binary_sentences[feature]["true" if value else "false"]
    raise ConfigurationError(f"word table has no entry for feature {feature!r}")


def synthesize(
    explanation: ShotExplanation,
    shot: ShotEvent,
    bands: CategoryBands,
    vector: FeatureVector | None = None,
    tables: WordTables | None = None,
) -> SynthesizedText:
    """Render the three-section description of one shot.

    The feature vector is recomputed from the shot when not supplied. Raises
    :class:`ConfigurationError` when the word table lacks an entry for a
    feature or category.
    """
    if explanation.shot_id and explanation.shot_id != shot.shot_id:
        raise ValueError(f"explanation is for shot {explanation.shot_id!r}, not {shot.shot_id!r}")
    if vector is None:
        from .features import build_feature_vector

        vector = build_feature_vector(shot)
    tables = tables if tables is not None else load_word_tables()

    outcome = "was a goal!" if shot.outcome_is_goal else "was not a goal."
    percent = int(round(explanation.xg * 100))
    try:
        category_sentence = tables.category_sentences[explanation.quality_category.value]
    except KeyError:
        raise ConfigurationError(
            f"word table has no sentence for category {explanation.quality_category.value!r}"
        ) from None
    quality = (
        f"{shot.player_name}'s shot for {shot.team_name} {outcome} "
        f"This shot had an xG value of {explanation.xg:.2f}, which means that we estimate "
        f"the chance of scoring from this situation as {percent}%. {category_sentence}"
    )

    try:
        feature_sentences = [
            _feature_sentence(name, vector, bands, tables) for name in FEATURE_NAMES
        ]
    except KeyError as exc:
        raise ConfigurationError(f"word table lookup failed: {exc}") from None

    if explanation.salient:
        parts = [
            "The contributions of the features to the xG of the shot, sorted by their "
            "magnitude from largest to smallest, are as follows:"
        ]
        for rank, name in enumerate(explanation.salient):
            contribution = explanation.contribution_for(name)
            verb = "increased" if contribution.direction is Direction.POSITIVE else "decreased"
            lead = "The most impactful feature is" if rank == 0 else "Another impactful feature is"
            display = tables.display_names.get(name, name.replace("_", " "))
            parts.append(f"{lead} {display}, which {verb} the xG of the shot.")
        contributions_text = " ".join(parts)
    else:
        contributions_text = (
            "No single feature stood out for this shot: every contribution was close to "
            "neutral, so the chance was about what the basic situation suggests."
        )

    return SynthesizedText(
        quality_section=quality,
        features_section=" ".join(feature_sentences),
        contributions_section=contributions_text,
    )


# --- prompt assembly -----------------------------------------------------------


def _format_value(name: str, value: float) -> str:
    if _is_integral_field(name):
        return str(int(value))
    return format(float(value), "g")


def numeric_baseline_text(x: FeatureVector) -> str:
    """The case-5 data message: one ``name: value`` line per feature."""
    return "\n".join(f"{name}: {_format_value(name, getattr(x, name))}" for name in FEATURE_NAMES)


def assemble_prompt(
    case_id: Case | str | int,
    synth: SynthesizedText,
    x: FeatureVector,
    assets: PromptAssets,
) -> PromptBundle:
    """Build the ordered message sequence for one evaluation case.

    Case 4 is the full sequence (persona, Q/A pairs, few-shot examples, data,
    instruction); case 3 drops the knowledge and answer-guidance stages;
    cases 1, 2 and 5 are bare data messages judged directly.
    """
    case = Case.parse(case_id)
    descriptive = synth.descriptive_text()
    full = synth.full_text()

    if case is Case.CASE1:
        return PromptBundle(case, (ChatMessage(Role.USER, descriptive),))
    if case is Case.CASE2:
        return PromptBundle(case, (ChatMessage(Role.USER, full),))
    if case is Case.CASE3:
        return PromptBundle(
            case,
            (ChatMessage(Role.SYSTEM, assets.persona), ChatMessage(Role.USER, full)),
        )
    if case is Case.CASE5:
        return PromptBundle(case, (ChatMessage(Role.USER, numeric_baseline_text(x)),))

    if not assets.qa_pairs:
        raise ConfigurationError("case4 requires a non-empty Q/A pair file")
    if not assets.few_shot:
        raise ConfigurationError("case4 requires a non-empty few-shot example file")
    messages: list[ChatMessage] = [ChatMessage(Role.SYSTEM, assets.persona)]
    for question, answer in assets.qa_pairs:
        messages.append(ChatMessage(Role.USER, question))
        messages.append(ChatMessage(Role.ASSISTANT, answer))
    for example_input, example_output in assets.few_shot:
        messages.append(ChatMessage(Role.USER, example_input))
        messages.append(ChatMessage(Role.ASSISTANT, example_output))
    messages.append(ChatMessage(Role.USER, full))
    messages.append(ChatMessage(Role.USER, assets.instruction))
    return PromptBundle(case, tuple(messages))
