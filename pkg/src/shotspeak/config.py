"""Application configuration and its plain-text config file format.

The config file is INI-style key/value text (see ``example_config`` for
the documented keys). Environment variables override two settings: the
API key named by ``llm.api_key_env_var`` is always read from the
environment, and ``DATA_ROOT`` overrides the data root when set.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .evaluation import DEFAULT_EVALUATED_FEATURES, DEFAULT_N_RUNS
from .exceptions import ConfigurationError
from .explain import SALIENCE_THRESHOLD
from .ingest import IngestConfig
from .llm import LlmConfig
from .pitch import PitchDims
from .textgen import DEFAULT_ASSETS_DIR

DATA_ROOT_ENV_VAR = "DATA_ROOT"


@dataclass(frozen=True)
class AppConfig:
    data_root: Path = Path("data")
    model_cache_dir: Path = Path("models")
    shots_cache_dir: Path = Path("shots")
    model_cards_dir: Path = Path("model_cards")
    assets_dir: Path = DEFAULT_ASSETS_DIR
    llm: LlmConfig = field(default_factory=LlmConfig)
    ingest: IngestConfig = field(default_factory=IngestConfig)
    salience_threshold: float = SALIENCE_THRESHOLD
    evaluation_runs: int = DEFAULT_N_RUNS
    evaluation_features: tuple[str, ...] = DEFAULT_EVALUATED_FEATURES
    fit_on_first_request: bool = True

    def __post_init__(self):
        if self.salience_threshold <= 0:
            raise ConfigurationError(
                f"salience threshold must be positive, got {self.salience_threshold}"
            )
        if self.evaluation_runs < 1:
            raise ConfigurationError(f"evaluation runs must be >= 1, got {self.evaluation_runs}")

    def model_path(self, competition_id: str) -> Path:
        return self.model_cache_dir / f"{competition_id}.model"

    def bands_path(self, competition_id: str) -> Path:
        return self.model_cache_dir / f"{competition_id}.bands.json"

    def shots_csv_path(self, competition_id: str) -> Path:
        return self.shots_cache_dir / f"{competition_id}.csv"


def _get(parser: configparser.ConfigParser, section: str, key: str, fallback=None):
    if parser.has_option(section, key):
        value = parser.get(section, key).strip()
        return value if value else fallback
    return fallback


def load_config(path: str | Path | None = None) -> AppConfig:
    """Build the app config from an optional INI file plus the environment."""
    parser = configparser.ConfigParser()
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"config file {path} does not exist")
        parser.read(path)

    data_root = _get(parser, "app", "data_root", "data")
    data_root = os.environ.get(DATA_ROOT_ENV_VAR, data_root)

    llm = LlmConfig(
        endpoint_url=_get(parser, "llm", "endpoint_url", "mock:"),
        model_name=_get(parser, "llm", "model_name", "default"),
        api_key_env_var=_get(parser, "llm", "api_key_env_var", "") or "",
        temperature=float(_get(parser, "llm", "temperature", 0.7)),
        max_retries=int(_get(parser, "llm", "max_retries", 3)),
        timeout=float(_get(parser, "llm", "timeout", 30.0)),
        requests_per_minute=(
            float(_get(parser, "llm", "requests_per_minute"))
            if _get(parser, "llm", "requests_per_minute")
            else None
        ),
        mock_script_path=_get(parser, "llm", "mock_script_path"),
    )
    ingest = IngestConfig(
        pitch_dims=PitchDims(
            length=float(_get(parser, "ingest", "pitch_length", 120.0)),
            width=float(_get(parser, "ingest", "pitch_width", 80.0)),
        ),
        include_penalties=parser.getboolean("ingest", "include_penalties", fallback=False),
    )
    features = _get(parser, "evaluation", "features")
    return AppConfig(
        data_root=Path(data_root),
        model_cache_dir=Path(_get(parser, "app", "model_cache_dir", "models")),
        shots_cache_dir=Path(_get(parser, "app", "shots_cache_dir", "shots")),
        model_cards_dir=Path(_get(parser, "app", "model_cards_dir", "model_cards")),
        assets_dir=Path(_get(parser, "app", "assets_dir", str(DEFAULT_ASSETS_DIR))),
        llm=llm,
        ingest=ingest,
        salience_threshold=float(_get(parser, "app", "salience_threshold", SALIENCE_THRESHOLD)),
        evaluation_runs=int(_get(parser, "evaluation", "runs", DEFAULT_N_RUNS)),
        evaluation_features=(
            tuple(f.strip() for f in features.split(",") if f.strip())
            if features
            else DEFAULT_EVALUATED_FEATURES
        ),
    )


def example_config() -> str:
    """The documented config file with every key at its default."""
    return f"""\
[app]
data_root = data
model_cache_dir = models
shots_cache_dir = shots
model_cards_dir = model_cards
; assets_dir = {DEFAULT_ASSETS_DIR}
salience_threshold = {SALIENCE_THRESHOLD}

[ingest]
; provider grid; the shipped reader assumes 120 x 80
pitch_length = 120
pitch_width = 80
include_penalties = false

[llm]
; "mock:" selects the deterministic offline provider
endpoint_url = mock:
model_name = default
api_key_env_var =
temperature = 0.7
max_retries = 3
timeout = 30
requests_per_minute =
mock_script_path =

[evaluation]
runs = {DEFAULT_N_RUNS}
features = {", ".join(DEFAULT_EVALUATED_FEATURES)}
"""


def override_data_root(config: AppConfig, data_root: str | Path | None) -> AppConfig:
    if data_root is None:
        return config
    return replace(config, data_root=Path(data_root))
