"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ShotspeakError(Exception):
    """Base class for all package-specific errors."""


class MalformedEventError(ShotspeakError):
    """A provider event could not be parsed; carries the event id."""

    def __init__(self, event_id: str, reason: str):
        super().__init__(f"malformed event {event_id!r}: {reason}")
        self.event_id = event_id
        self.reason = reason


class DataIntegrityError(ShotspeakError):
    """Provider data violates a structural guarantee (e.g. duplicate frame ids)."""


class FeatureUnavailableError(ShotspeakError):
    """A feature cannot be computed for this shot; carries the feature name."""

    def __init__(self, feature: str, detail: str = ""):
        msg = f"feature {feature!r} unavailable"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.feature = feature


class DegenerateGeometryError(ShotspeakError):
    """Geometric computation undefined for coincident or collinear inputs."""


class DegenerateFitError(ShotspeakError):
    """The training outcomes admit no maximum-likelihood fit (single class)."""


class RankDeficiencyError(ShotspeakError):
    """The information matrix is singular; names the collinear columns."""

    def __init__(self, columns: list[str]):
        super().__init__(f"design matrix is rank deficient; collinear columns: {columns}")
        self.columns = columns


class SchemaMismatchError(ShotspeakError):
    """Model and feature vector disagree on the feature schema."""

    def __init__(self, feature: str):
        super().__init__(f"feature schema mismatch at {feature!r}")
        self.feature = feature


class ContractViolationError(ShotspeakError):
    """An argument violates a documented value contract (e.g. xG outside [0, 1])."""


class ConfigurationError(ShotspeakError):
    """Invalid or missing configuration (bad endpoint, absent API key, bad assets)."""


class AssetParseError(ConfigurationError):
    """A prompt asset file failed to parse; carries the offending row number."""

    def __init__(self, path: str, row: int, reason: str):
        super().__init__(f"{path}:{row}: {reason}")
        self.path = path
        self.row = row


class GatewayError(ShotspeakError):
    """All chat-completion attempts failed; carries the last cause."""

    def __init__(self, message: str, attempts: int, cause: Exception | None = None):
        super().__init__(message)
        self.attempts = attempts
        self.cause = cause


class QuasiSeparationWarning(UserWarning):
    """The optimizer hit the iteration cap, usually due to (quasi-)separated data."""
