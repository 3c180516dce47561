"""HTTP service tying the pipeline together.

Endpoints expose competition/match/shot browsing, per-shot explanations,
on-demand wordalisation and evaluation runs. All analytics numbers in
responses come from direct library calls; the service only caches parsed
shots and fitted models (per-competition, with an exclusive lock around
fit/ingest). Errors use a uniform ``{code, message, detail}`` envelope.
"""

from __future__ import annotations

import dataclasses
import threading
from dataclasses import dataclass
from typing import Sequence

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import evaluation, explain, glm, ingest, llm, textgen
from .config import AppConfig
from .exceptions import (
    ConfigurationError,
    ContractViolationError,
    DegenerateFitError,
    FeatureUnavailableError,
    GatewayError,
    ShotspeakError,
)
from .features import FeatureVector, build_design_matrix, build_feature_vector
from .pitch import ShotEvent


class NotFoundError(ShotspeakError):
    pass


@dataclass(frozen=True)
class ShotContext:
    """Everything the explanation/wordalise endpoints need for one shot."""

    competition_id: str
    shot: ShotEvent
    vector: FeatureVector
    explanation: explain.ShotExplanation


class ShotStore:
    """Disk-backed cache of shots, fitted models and category bands.

    Reads are served from immutable in-memory snapshots; ``fit`` and
    ``ingest`` take a per-competition write lock and swap the snapshot.
    """

    def __init__(self, config: AppConfig):
        self.config = config
        self.word_tables = textgen.load_word_tables(
            config.assets_dir / "word_tables.json"
            if (config.assets_dir / "word_tables.json").exists()
            else None
        )
        self.assets = textgen.load_prompt_assets(config.assets_dir)
        self._shots: dict[str, list[ShotEvent]] = {}
        self._models: dict[str, glm.FittedModel] = {}
        self._bands: dict[str, explain.CategoryBands] = {}
        self._locks: dict[str, threading.RLock] = {}
        self._global_lock = threading.Lock()

    def _lock(self, competition_id: str) -> threading.RLock:
        with self._global_lock:
            return self._locks.setdefault(competition_id, threading.RLock())

    # -- discovery ---------------------------------------------------------

    def competitions(self) -> list[str]:
        names = set(ingest.list_competitions(self.config.data_root))
        if self.config.shots_cache_dir.is_dir():
            names.update(p.stem for p in self.config.shots_cache_dir.glob("*.csv"))
        names.update(self._shots)
        return sorted(names)

    def is_fitted(self, competition_id: str) -> bool:
        return competition_id in self._models or self.config.model_path(competition_id).exists()

    def matches(self, competition_id: str) -> list[dict]:
        by_match: dict[str, list[ShotEvent]] = {}
        for shot in self.shots(competition_id):
            by_match.setdefault(shot.match_id, []).append(shot)
        index = {
            m["match_id"]: m
            for m in ingest.load_matches_index(self.config.data_root, competition_id)
        }
        out = []
        for match_id in sorted(by_match):
            meta = index.get(match_id, {})
            teams = sorted({s.team_name for s in by_match[match_id]})
            out.append(
                {
                    "match_id": match_id,
                    "home_team": meta.get("home_team") or (teams[0] if teams else ""),
                    "away_team": meta.get("away_team") or (teams[1] if len(teams) > 1 else ""),
                    "n_shots": len(by_match[match_id]),
                }
            )
        return out

    # -- shots -------------------------------------------------------------

    def ingest(self, competition_id: str) -> list[ShotEvent]:
        """Parse provider files and refresh the canonical shots CSV."""
        with self._lock(competition_id):
            shots = ingest.load_competition(
                self.config.data_root, competition_id, self.config.ingest
            )
            if not shots:
                raise NotFoundError(f"no provider data for competition {competition_id!r}")
            ingest.write_shots_csv(shots, self.config.shots_csv_path(competition_id))
            self._shots[competition_id] = shots
            return shots

    def shots(self, competition_id: str) -> list[ShotEvent]:
        cached = self._shots.get(competition_id)
        if cached is not None:
            return cached
        with self._lock(competition_id):
            cached = self._shots.get(competition_id)
            if cached is not None:
                return cached
            csv_path = self.config.shots_csv_path(competition_id)
            if csv_path.exists():
                shots = ingest.read_shots_csv(csv_path)
            elif ingest.competition_dir(self.config.data_root, competition_id).is_dir():
                return self.ingest(competition_id)
            else:
                raise NotFoundError(f"unknown competition {competition_id!r}")
            self._shots[competition_id] = shots
            return shots

    def find_shot(self, shot_id: str) -> tuple[str, ShotEvent]:
        for competition_id in self.competitions():
            for shot in self.shots(competition_id):
                if shot.shot_id == shot_id:
                    return competition_id, shot
        raise NotFoundError(f"shot not found: {shot_id!r}")

    def find_match(self, match_id: str) -> tuple[str, list[ShotEvent]]:
        for competition_id in self.competitions():
            shots = [s for s in self.shots(competition_id) if s.match_id == match_id]
            if shots:
                return competition_id, shots
        raise NotFoundError(f"match not found: {match_id!r}")

    # -- models ------------------------------------------------------------

    def fit(self, competition_id: str) -> glm.FittedModel:
        """Fit from the competition's modelable shots; persist model and bands."""
        with self._lock(competition_id):
            shots = self.shots(competition_id)
            selected = ingest.select_model_shots(shots, self.config.ingest)
            design = build_design_matrix(selected)
            if design.X.shape[0] == 0:
                raise DegenerateFitError(f"competition {competition_id!r} has no modelable shots")
            model = glm.fit(design.X, design.y, competition_id)
            bands = explain.compute_bands(design.X, self.word_tables.banded_labels)
            glm.save_model(model, self.config.model_path(competition_id))
            explain.save_bands(bands, self.config.bands_path(competition_id))
            self._models[competition_id] = model
            self._bands[competition_id] = bands
            return model

    def model(self, competition_id: str) -> glm.FittedModel:
        model = self._models.get(competition_id)
        if model is not None:
            return model
        with self._lock(competition_id):
            model = self._models.get(competition_id)
            if model is not None:
                return model
            path = self.config.model_path(competition_id)
            if path.exists():
                model = glm.load_model(path)
                self._models[competition_id] = model
                return model
            if self.config.fit_on_first_request:
                return self.fit(competition_id)
            raise NotFoundError(f"no fitted model for competition {competition_id!r}")

    def bands(self, competition_id: str) -> explain.CategoryBands:
        bands = self._bands.get(competition_id)
        if bands is not None:
            return bands
        with self._lock(competition_id):
            bands = self._bands.get(competition_id)
            if bands is not None:
                return bands
            path = self.config.bands_path(competition_id)
            if path.exists():
                bands = explain.load_bands(path)
            else:
                self.fit(competition_id)
                bands = self._bands[competition_id]
            self._bands[competition_id] = bands
            return bands

    # -- explanations ------------------------------------------------------

    def shot_context(self, shot_id: str) -> ShotContext:
        competition_id, shot = self.find_shot(shot_id)
        try:
            vector = build_feature_vector(shot)
        except FeatureUnavailableError as exc:
            raise NotFoundError(f"shot {shot_id!r} cannot be explained: {exc}") from exc
        model = self.model(competition_id)
        explanation = explain.contributions(
            model, vector, shot_id=shot_id, threshold=self.config.salience_threshold
        )
        return ShotContext(competition_id, shot, vector, explanation)

    def eval_items(self, shots: Sequence[ShotEvent], competition_id: str) -> list[evaluation.EvalItem]:
        model = self.model(competition_id)
        bands = self.bands(competition_id)
        items = []
        for shot in ingest.select_model_shots(shots, self.config.ingest):
            try:
                vector = build_feature_vector(shot)
            except FeatureUnavailableError:
                continue
            explanation = explain.contributions(
                model, vector, shot_id=shot.shot_id, threshold=self.config.salience_threshold
            )
            synth = textgen.synthesize(explanation, shot, bands, vector, self.word_tables)
            items.append(
                evaluation.EvalItem(
                    shot_id=shot.shot_id, explanation=explanation, synth=synth, vector=vector
                )
            )
        return items


# --- request bodies -------------------------------------------------------------


class WordaliseRequest(BaseModel):
    case: str = "case4"
    temperature: float | None = None
    endpoint_url: str | None = None
    model_name: str | None = None


class EvaluateRequest(BaseModel):
    competition_id: str
    match_id: str | None = None
    cases: list[str] = ["case1", "case2", "case3", "case4", "case5"]
    runs: int | None = None
    features: list[str] | None = None


# --- app factory ----------------------------------------------------------------


_ERROR_CODES = {
    NotFoundError: (404, "not_found"),
    ConfigurationError: (400, "configuration_error"),
    ContractViolationError: (400, "contract_violation"),
    DegenerateFitError: (409, "degenerate_fit"),
    GatewayError: (502, "gateway_error"),
}


def _shot_summary(shot: ShotEvent, xg: float | None) -> dict:
    return {
        "shot_id": shot.shot_id,
        "match_id": shot.match_id,
        "competition_id": shot.competition_id,
        "minute": shot.minute,
        "player_name": shot.player_name,
        "team_name": shot.team_name,
        "outcome_is_goal": shot.outcome_is_goal,
        "body_part": shot.body_part.value,
        "play_pattern": shot.play_pattern.value,
        "location": {"x": shot.location.x, "y": shot.location.y},
        "has_freeze_frame": shot.has_freeze_frame,
        "xg": xg,
    }


def _shot_detail(shot: ShotEvent) -> dict:
    doc = _shot_summary(shot, None)
    doc["freeze_frame"] = [
        {
            "x": p.location.x,
            "y": p.location.y,
            "is_teammate": p.is_teammate,
            "is_keeper": p.is_keeper,
        }
        for p in shot.freeze_frame
    ]
    return doc


def create_app(config: AppConfig, store: ShotStore | None = None, static_dir=None) -> FastAPI:
    """Build the service; ``static_dir`` optionally serves the web UI bundle.

    Startup fails when there is nothing to serve: no readable data root and
    no cached shots.
    """
    if not config.data_root.is_dir() and not any(config.shots_cache_dir.glob("*.csv")):
        raise ConfigurationError(
            f"data root {config.data_root} is not a directory and no cached shots exist"
        )
    app = FastAPI(title="shotspeak", version="0.1.0")
    store = store if store is not None else ShotStore(config)
    app.state.store = store

    @app.exception_handler(ShotspeakError)
    async def _handle_package_error(request: Request, exc: ShotspeakError):
        for klass, (status, code) in _ERROR_CODES.items():
            if isinstance(exc, klass):
                break
        else:
            status, code = 500, "internal_error"
        return JSONResponse(
            status_code=status,
            content={"code": code, "message": str(exc), "detail": type(exc).__name__},
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/competitions")
    def competitions():
        out = []
        for competition_id in store.competitions():
            shots = store.shots(competition_id)
            out.append(
                {
                    "competition_id": competition_id,
                    "name": competition_id.replace("-", " ").title(),
                    "n_shots": len(shots),
                    "n_matches": len({s.match_id for s in shots}),
                    "fitted": store.is_fitted(competition_id),
                }
            )
        return {"competitions": out}

    @app.get("/competitions/{competition_id}/model")
    def competition_model(competition_id: str):
        model = store.model(competition_id)
        return {
            "model": model.to_dict(),
            "summary": glm.format_model_summary(model),
            "bands": store.bands(competition_id).to_dict(),
        }

    @app.get("/competitions/{competition_id}/matches")
    def competition_matches(competition_id: str):
        if competition_id not in store.competitions():
            raise NotFoundError(f"unknown competition {competition_id!r}")
        return {"matches": store.matches(competition_id)}

    @app.get("/matches/{match_id}/shots")
    def match_shots(match_id: str):
        competition_id, shots = store.find_match(match_id)
        model = store.model(competition_id)
        out = []
        for shot in shots:
            xg = None
            try:
                xg = glm.predict_xg(model, build_feature_vector(shot))
            except FeatureUnavailableError:
                pass
            out.append(_shot_summary(shot, xg))
        return {"competition_id": competition_id, "match_id": match_id, "shots": out}

    @app.get("/shots/{shot_id}/explanation")
    def shot_explanation(shot_id: str):
        context = store.shot_context(shot_id)
        return {
            "shot": _shot_detail(context.shot),
            "feature_values": context.vector.as_dict(),
            "explanation": context.explanation.to_dict(),
        }

    @app.post("/shots/{shot_id}/wordalise")
    def wordalise(shot_id: str, body: WordaliseRequest, debug: int = 0):
        context = store.shot_context(shot_id)
        bands = store.bands(context.competition_id)
        synth = textgen.synthesize(
            context.explanation, context.shot, bands, context.vector, store.word_tables
        )
        case = textgen.Case.parse(body.case)
        bundle = textgen.assemble_prompt(case, synth, context.vector, store.assets)
        overrides = {
            key: value
            for key, value in (
                ("temperature", body.temperature),
                ("endpoint_url", body.endpoint_url),
                ("model_name", body.model_name),
            )
            if value is not None
        }
        llm_config = dataclasses.replace(config.llm, **overrides) if overrides else config.llm
        result = llm.chat(bundle, llm_config)
        response = {
            "shot_id": shot_id,
            "case": case.value,
            "text": result.text,
            "attempts": result.attempts,
            "synthesized": {
                "quality_section": synth.quality_section,
                "features_section": synth.features_section,
                "contributions_section": synth.contributions_section,
            },
        }
        if debug:
            response["prompt"] = bundle.to_wire()
        return response

    @app.post("/evaluate")
    def evaluate(body: EvaluateRequest):
        shots = store.shots(body.competition_id)
        if body.match_id is not None:
            shots = [s for s in shots if s.match_id == body.match_id]
            if not shots:
                raise NotFoundError(f"match not found: {body.match_id!r}")
        items = store.eval_items(shots, body.competition_id)
        provider = llm.make_provider(config.llm)
        results = evaluation.run_evaluation(
            items,
            body.cases,
            judge=provider,
            n_runs=body.runs or config.evaluation_runs,
            features=tuple(body.features) if body.features else config.evaluation_features,
            generator=provider,
            assets=store.assets,
        )
        return {
            "results": [r.to_dict() for r in results],
            "table": evaluation.format_results_table(results),
            "chart": evaluation.results_chart_data(results),
        }

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
