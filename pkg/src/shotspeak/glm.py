"""Per-competition logistic-regression fitting and prediction.

The goal-probability model is an unpenalized logistic regression fitted by
maximum likelihood with Newton iterations (iteratively reweighted least
squares) and step-halving. Standard errors come from the inverse observed
information at the optimum, p-values from the two-sided Wald normal
approximation. No regularization and no feature standardization: the model
stays directly interpretable and mean-centered contributions (see
``explain``) carry the per-shot story.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .exceptions import (
    DegenerateFitError,
    QuasiSeparationWarning,
    RankDeficiencyError,
)
from .features import FEATURE_NAMES, FeatureVector

MODEL_FORMAT_VERSION = "shotspeak-model/1"

MAX_ITERATIONS = 100
LL_CHANGE_TOL = 1e-10
GRADIENT_TOL = 1e-8
MAX_STEP_HALVINGS = 40

# Fitted probabilities within this of every outcome mean the data are
# (quasi-)separated and the likelihood has no finite maximizer.
SEPARATION_TOL = 1e-8

# Feature pairs whose correlation motivated the dropped-feature decisions.
DEFAULT_DIAGNOSTIC_PAIRS: tuple[tuple[str, str], ...] = (
    ("angle_to_goal", "angle_to_gk"),
    ("distance_to_gk", "distance_to_goal"),
)


def logistic(log_odds: float) -> float:
    """Numerically stable logistic link, safe for |log_odds| up to ~700."""
    if log_odds >= 0:
        return 1.0 / (1.0 + math.exp(-log_odds))
    e = math.exp(log_odds)
    return e / (1.0 + e)


def _logistic_vec(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def log_likelihood(X: np.ndarray, y: np.ndarray, beta: np.ndarray) -> float:
    """Bernoulli log-likelihood of coefficient vector ``beta`` on (X, y)."""
    eta = X @ beta
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def log_likelihood_gradient(X: np.ndarray, y: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Analytic gradient of :func:`log_likelihood` with respect to ``beta``."""
    return X.T @ (y - _logistic_vec(X @ beta))


def _diagnose_collinear(X: np.ndarray, names: Sequence[str]) -> list[str]:
    """Names of columns participating in the near-null space of X."""
    _, singular, vt = np.linalg.svd(X, full_matrices=False)
    tol = singular[0] * max(X.shape) * np.finfo(float).eps if len(singular) else 0.0
    involved: list[str] = []
    for idx in range(len(singular)):
        if singular[idx] > max(tol, 1e-10 * singular[0]):
            continue
        direction = np.abs(vt[idx])
        for col in np.nonzero(direction > 0.1 * direction.max())[0]:
            if names[col] not in involved:
                involved.append(names[col])
    return involved


@dataclass(frozen=True)
class IrlsFit:
    """Raw optimizer output: coefficients over the matrix exactly as given."""

    beta: np.ndarray
    log_likelihood: float
    ll_trace: tuple[float, ...]
    gradient: np.ndarray
    converged: bool
    iterations: int
    separated: bool = False


def fit_logistic(
    X: np.ndarray,
    y: np.ndarray,
    *,
    max_iterations: int = MAX_ITERATIONS,
    ll_tol: float = LL_CHANGE_TOL,
    gradient_tol: float = GRADIENT_TOL,
    column_names: Sequence[str] | None = None,
    callback: Callable[[int, float], None] | None = None,
) -> IrlsFit:
    """Maximize the Bernoulli log-likelihood by Newton steps with halving.

    ``X`` is used exactly as given (callers add their own intercept column).
    Step-halving keeps the log-likelihood non-decreasing across iterations.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError(f"design {X.shape} and outcomes {y.shape} do not align")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("design matrix and outcomes must be finite")
    names = list(column_names) if column_names is not None else [f"column_{i}" for i in range(X.shape[1])]
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise RankDeficiencyError(_diagnose_collinear(X, names))

    beta = np.zeros(X.shape[1])
    ll = log_likelihood(X, y, beta)
    trace = [ll]
    converged = False
    separated = False
    iterations = 0
    for iteration in range(1, max_iterations + 1):
        iterations = iteration
        p = _logistic_vec(X @ beta)
        if np.max(np.abs(y - p)) < SEPARATION_TOL:
            separated = True  # every outcome fitted exactly: no finite MLE
            break
        gradient = X.T @ (y - p)
        weights = p * (1.0 - p)
        information = X.T @ (X * weights[:, None])
        try:
            delta = np.linalg.solve(information, gradient)
        except np.linalg.LinAlgError:
            raise RankDeficiencyError(_diagnose_collinear(X * np.sqrt(weights)[:, None], names)) from None
        # Near the optimum the true improvement drops below one ulp of the
        # log-likelihood; accept steps within that noise so Newton can keep
        # shrinking the gradient on the float plateau.
        noise_floor = 4.0 * np.finfo(float).eps * max(1.0, abs(ll))
        step = 1.0
        new_beta = beta + delta
        new_ll = log_likelihood(X, y, new_beta)
        for _ in range(MAX_STEP_HALVINGS):
            if new_ll >= ll - noise_floor:
                break
            step *= 0.5
            new_beta = beta + step * delta
            new_ll = log_likelihood(X, y, new_beta)
        if new_ll < ll - noise_floor:  # no acceptable step; stay at the current iterate
            new_beta, new_ll = beta, ll
        change = new_ll - ll
        beta, ll = new_beta, new_ll
        trace.append(ll)
        if callback is not None:
            callback(iteration, ll)
        if abs(change) < ll_tol and np.max(np.abs(log_likelihood_gradient(X, y, beta))) < gradient_tol:
            converged = True
            break
    gradient = log_likelihood_gradient(X, y, beta)
    return IrlsFit(
        beta=beta,
        log_likelihood=ll,
        ll_trace=tuple(trace),
        gradient=gradient,
        converged=converged,
        iterations=iterations,
        separated=separated,
    )


@dataclass(frozen=True)
class FittedModel:
    """Coefficients and inference for one competition's goal-probability model.

    ``standard_errors`` and ``p_values`` carry the intercept in slot 0
    followed by one entry per feature; the other sequences align with
    ``feature_names``.
    """

    competition_id: str
    feature_names: tuple[str, ...]
    intercept: float
    coefficients: tuple[float, ...]
    feature_means: tuple[float, ...]
    standard_errors: tuple[float, ...]
    p_values: tuple[float, ...]
    n_shots: int
    n_goals: int
    log_likelihood: float
    converged: bool

    def predict_log_odds(self, x: FeatureVector | Sequence[float]) -> float:
        return predict_log_odds(self, x)

    def predict_xg(self, x: FeatureVector | Sequence[float]) -> float:
        return predict_xg(self, x)

    def to_dict(self) -> dict:
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "competition_id": self.competition_id,
            "feature_names": list(self.feature_names),
            "intercept": self.intercept,
            "coefficients": list(self.coefficients),
            "feature_means": list(self.feature_means),
            "standard_errors": list(self.standard_errors),
            "p_values": list(self.p_values),
            "n_shots": self.n_shots,
            "n_goals": self.n_goals,
            "log_likelihood": self.log_likelihood,
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "FittedModel":
        version = doc.get("format_version")
        if version != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format {version!r}")
        return cls(
            competition_id=doc["competition_id"],
            feature_names=tuple(doc["feature_names"]),
            intercept=float(doc["intercept"]),
            coefficients=tuple(float(c) for c in doc["coefficients"]),
            feature_means=tuple(float(m) for m in doc["feature_means"]),
            standard_errors=tuple(float(s) for s in doc["standard_errors"]),
            p_values=tuple(float(p) for p in doc["p_values"]),
            n_shots=int(doc["n_shots"]),
            n_goals=int(doc["n_goals"]),
            log_likelihood=float(doc["log_likelihood"]),
            converged=bool(doc["converged"]),
        )


def _coerce_design(
    design: Sequence[FeatureVector] | np.ndarray, feature_names: Sequence[str] | None
) -> tuple[np.ndarray, tuple[str, ...]]:
    if len(design) and isinstance(design[0], FeatureVector):
        X = np.array([v.as_array() for v in design], dtype=float)
        return X, FEATURE_NAMES
    X = np.asarray(design, dtype=float)
    if X.ndim == 1:
        X = X.reshape(len(X), -1)
    if feature_names is None:
        if X.shape[1] == len(FEATURE_NAMES):
            return X, FEATURE_NAMES
        raise ValueError("feature_names required for non-schema design matrices")
    if len(feature_names) != X.shape[1]:
        raise ValueError(f"{X.shape[1]} columns but {len(feature_names)} feature names")
    return X, tuple(feature_names)


def fit(
    design: Sequence[FeatureVector] | np.ndarray,
    outcomes: Sequence[int] | np.ndarray,
    competition_id: str = "",
    feature_names: Sequence[str] | None = None,
    *,
    max_iterations: int = MAX_ITERATIONS,
) -> FittedModel:
    """Fit the goal-probability model by maximum likelihood.

    Raises :class:`DegenerateFitError` when all outcomes share one class and
    :class:`RankDeficiencyError` for collinear columns. When the optimizer
    hits the iteration cap (typically quasi-separated data) the best iterate
    is returned with ``converged=False`` and a :class:`QuasiSeparationWarning`.
    """
    X, names = _coerce_design(design, feature_names)
    y = np.asarray(outcomes, dtype=float)
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"{X.shape[0]} design rows but {y.shape[0]} outcomes")
    if y.shape[0] == 0:
        raise DegenerateFitError("no observations")
    if not np.all(np.isin(y, (0.0, 1.0))):
        raise ValueError("outcomes must be 0/1")
    n_goals = int(y.sum())
    if n_goals == 0 or n_goals == len(y):
        raise DegenerateFitError(
            f"all {len(y)} outcomes are {'goals' if n_goals else 'misses'}; cannot fit a rate"
        )

    augmented = np.column_stack([np.ones(len(y)), X])
    result = fit_logistic(
        augmented,
        y,
        max_iterations=max_iterations,
        column_names=["intercept", *names],
    )
    if not result.converged:
        reason = (
            "the outcomes are perfectly separated"
            if result.separated
            else f"no convergence in {max_iterations} iterations; data may be quasi-separated"
        )
        warnings.warn(
            f"fit for {competition_id or 'dataset'}: {reason}; returning the best iterate",
            QuasiSeparationWarning,
            stacklevel=2,
        )

    p = _logistic_vec(augmented @ result.beta)
    weights = p * (1.0 - p)
    information = augmented.T @ (augmented * weights[:, None])
    try:
        covariance = np.linalg.inv(information)
    except np.linalg.LinAlgError:
        if not result.converged:  # separation flattens the information matrix
            covariance = np.linalg.pinv(information)
        else:
            raise RankDeficiencyError(_diagnose_collinear(augmented, ["intercept", *names])) from None
    with np.errstate(invalid="ignore"):
        standard_errors = np.sqrt(np.diag(covariance))
    z = np.divide(
        result.beta,
        standard_errors,
        out=np.zeros_like(result.beta),
        where=standard_errors > 0,
    )
    p_values = np.array([math.erfc(abs(zi) / math.sqrt(2.0)) for zi in z])

    means = X.mean(axis=0) if X.shape[1] else np.empty(0)
    return FittedModel(
        competition_id=competition_id,
        feature_names=names,
        intercept=float(result.beta[0]),
        coefficients=tuple(float(b) for b in result.beta[1:]),
        feature_means=tuple(float(m) for m in means),
        standard_errors=tuple(float(s) for s in standard_errors),
        p_values=tuple(float(v) for v in p_values),
        n_shots=len(y),
        n_goals=n_goals,
        log_likelihood=result.log_likelihood,
        converged=result.converged,
    )


def predict_log_odds(model: FittedModel, x: FeatureVector | Sequence[float]) -> float:
    """Linear predictor: intercept plus the coefficient-weighted features."""
    values = x.as_array() if isinstance(x, FeatureVector) else np.asarray(x, dtype=float)
    if len(values) != len(model.feature_names):
        raise ValueError(f"expected {len(model.feature_names)} features, got {len(values)}")
    return float(model.intercept + np.dot(model.coefficients, values))


def predict_xg(model: FittedModel, x: FeatureVector | Sequence[float]) -> float:
    """Goal probability: the logistic link applied to the linear predictor."""
    return logistic(predict_log_odds(model, x))


# --- correlation diagnostics -------------------------------------------------


@dataclass(frozen=True)
class CorrelationPair:
    feature_a: str
    feature_b: str
    pearson_r: float | None  # None when either column is constant


@dataclass(frozen=True)
class CorrelationReport:
    pairs: tuple[CorrelationPair, ...]

    def get(self, feature_a: str, feature_b: str) -> float | None:
        for pair in self.pairs:
            if {pair.feature_a, pair.feature_b} == {feature_a, feature_b}:
                return pair.pearson_r
        raise KeyError((feature_a, feature_b))


def pearson_r(a: Sequence[float], b: Sequence[float]) -> float | None:
    """Pearson correlation; None (undefined) when a column is constant."""
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    if av.shape != bv.shape or av.size < 2:
        raise ValueError("columns must share length >= 2")
    am = av - av.mean()
    bm = bv - bv.mean()
    denom = math.sqrt(float(am @ am) * float(bm @ bm))
    if denom == 0.0:
        return None
    return float(np.clip(float(am @ bm) / denom, -1.0, 1.0))


def correlation_report(
    columns: Mapping[str, Sequence[float]],
    pairs: Sequence[tuple[str, str]] = DEFAULT_DIAGNOSTIC_PAIRS,
) -> CorrelationReport:
    """Pearson r for the requested feature pairs over aligned columns."""
    out = []
    for feature_a, feature_b in pairs:
        out.append(
            CorrelationPair(feature_a, feature_b, pearson_r(columns[feature_a], columns[feature_b]))
        )
    return CorrelationReport(pairs=tuple(out))


# --- persistence and reporting ------------------------------------------------


def save_model(model: FittedModel, path: str | Path) -> None:
    """Write the model file; loading it back reproduces the model bit-exactly."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n")


def load_model(path: str | Path) -> FittedModel:
    return FittedModel.from_dict(json.loads(Path(path).read_text()))


def format_model_summary(model: FittedModel) -> str:
    """Plain-text coefficient table: estimate, standard error, p-value per row."""
    width = max(len("intercept"), *(len(n) for n in model.feature_names)) if model.feature_names else 12
    width = max(width, 12)
    lines = [
        f"Goal-probability model: {model.competition_id}",
        f"shots={model.n_shots}  goals={model.n_goals}  "
        f"log_likelihood={model.log_likelihood:.6f}  converged={model.converged}",
        "",
        f"{'feature':<{width}}  {'coef':>12}  {'std err':>12}  {'p-value':>10}",
    ]
    rows = [("intercept", model.intercept, model.standard_errors[0], model.p_values[0])]
    rows += [
        (name, coef, se, p)
        for name, coef, se, p in zip(
            model.feature_names, model.coefficients, model.standard_errors[1:], model.p_values[1:]
        )
    ]
    for name, coef, se, p in rows:
        lines.append(f"{name:<{width}}  {coef:>12.6f}  {se:>12.6f}  {p:>10.4g}")
    return "\n".join(lines) + "\n"
