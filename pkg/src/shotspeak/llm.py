"""Provider-agnostic chat-completion gateway.

Speaks the common chat-completion wire shape (role/content message arrays)
so any hosted provider or local server can sit behind ``endpoint_url``.
Includes a deterministic mock provider, keyed by a stable fingerprint of
the message list, for tests and offline runs; endpoint URLs with the
``mock:`` scheme select it automatically.

API keys are read from the environment at call time and never appear in
logs or diagnostics.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
import random
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Mapping, Protocol, Sequence

import httpx

from .exceptions import ConfigurationError, GatewayError
from .textgen import ChatMessage, PromptBundle

log = logging.getLogger(__name__)

MOCK_FALLBACK_REPLY = "not contributing"

BACKOFF_BASE_SECONDS = 1.0
BACKOFF_FACTOR = 2.0
BACKOFF_JITTER = 0.2  # +-20%

DEFAULT_GENERATION_TEMPERATURE = 0.7
DEFAULT_EVALUATION_TEMPERATURE = 0.0


@dataclass(frozen=True)
class LlmConfig:
    endpoint_url: str = "mock:"
    model_name: str = "default"
    api_key_env_var: str = ""  # empty: no Authorization header (local/mock servers)
    temperature: float = DEFAULT_GENERATION_TEMPERATURE
    max_retries: int = 3
    timeout: float = 30.0
    requests_per_minute: float | None = None
    mock_script_path: str | None = None

    def __post_init__(self):
        if self.max_retries < 0:
            raise ConfigurationError(f"max_retries must be >= 0, got {self.max_retries}")
        if self.timeout <= 0:
            raise ConfigurationError(f"timeout must be positive, got {self.timeout}")
        if self.temperature < 0:
            raise ConfigurationError(f"temperature must be >= 0, got {self.temperature}")


@dataclass(frozen=True)
class ChatResult:
    text: str
    provider_meta: Mapping[str, object]
    attempts: int


class ChatProvider(Protocol):
    def complete(
        self, messages: Sequence[ChatMessage], *, temperature: float | None = None
    ) -> ChatResult: ...


def fingerprint_messages(messages: Iterable[ChatMessage]) -> str:
    """Stable hash of a message list, used to key mock scripts."""
    canonical = json.dumps(
        [[m.role.value, m.content] for m in messages],
        ensure_ascii=False,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class MockProvider:
    """Deterministic provider: replies looked up by message-list fingerprint.

    Unknown fingerprints get the documented fallback reply, so an empty
    script behaves as an always-``"not contributing"`` judge.
    """

    def __init__(
        self,
        script: Mapping[str, str] | None = None,
        fallback_reply: str = MOCK_FALLBACK_REPLY,
    ):
        self.script = dict(script or {})
        self.fallback_reply = fallback_reply
        self.calls: list[str] = []

    def complete(
        self, messages: Sequence[ChatMessage], *, temperature: float | None = None
    ) -> ChatResult:
        key = fingerprint_messages(messages)
        self.calls.append(key)
        text = self.script.get(key, self.fallback_reply)
        return ChatResult(text=text, provider_meta={"provider": "mock", "scripted": key in self.script}, attempts=1)


def load_mock_script(path: str | Path) -> dict[str, str]:
    """Read a replayable mock script table (fingerprint, reply columns)."""
    script: dict[str, str] = {}
    with Path(path).open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["fingerprint", "reply"]:
            raise ConfigurationError(f"{path}: expected header fingerprint,reply")
        for row in reader:
            if len(row) != 2:
                raise ConfigurationError(f"{path}: malformed mock script row {row!r}")
            script[row[0].strip()] = row[1]
    return script


class RateLimiter:
    """Spaces calls to at most ``requests_per_minute``; thread-safe."""

    def __init__(self, requests_per_minute: float | None, clock=time.monotonic, sleep=time.sleep):
        self.interval = 60.0 / requests_per_minute if requests_per_minute else 0.0
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._next_allowed = 0.0

    def acquire(self) -> None:
        if self.interval <= 0:
            return
        with self._lock:
            now = self._clock()
            wait = self._next_allowed - now
            self._next_allowed = max(now, self._next_allowed) + self.interval
        if wait > 0:
            self._sleep(wait)


class HttpChatProvider:
    """Chat-completion client with retries, backoff and rate limiting."""

    def __init__(
        self,
        config: LlmConfig,
        *,
        transport: httpx.BaseTransport | None = None,
        sleep: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
        rate_limiter: RateLimiter | None = None,
    ):
        if not config.endpoint_url.startswith(("http://", "https://")):
            raise ConfigurationError(
                f"endpoint_url must be http(s), got {config.endpoint_url!r}"
            )
        if config.api_key_env_var and os.environ.get(config.api_key_env_var) is None:
            raise ConfigurationError(
                f"API key environment variable {config.api_key_env_var!r} is not set"
            )
        self.config = config
        self._sleep = sleep
        self._rng = rng or random.Random()
        self._limiter = rate_limiter or RateLimiter(config.requests_per_minute)
        self._client = httpx.Client(timeout=config.timeout, transport=transport)

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.config.api_key_env_var:
            headers["Authorization"] = f"Bearer {os.environ[self.config.api_key_env_var]}"
        return headers

    def _backoff_delay(self, attempt: int) -> float:
        base = BACKOFF_BASE_SECONDS * BACKOFF_FACTOR ** (attempt - 1)
        return base * (1.0 + BACKOFF_JITTER * (2.0 * self._rng.random() - 1.0))

    def complete(
        self, messages: Sequence[ChatMessage], *, temperature: float | None = None
    ) -> ChatResult:
        payload = {
            "model": self.config.model_name,
            "messages": [{"role": m.role.value, "content": m.content} for m in messages],
            "temperature": self.config.temperature if temperature is None else temperature,
        }
        attempts = 0
        last_error: Exception | None = None
        while attempts <= self.config.max_retries:
            attempts += 1
            self._limiter.acquire()
            try:
                response = self._client.post(
                    self.config.endpoint_url, json=payload, headers=self._headers()
                )
            except httpx.HTTPError as exc:
                last_error = exc
                log.warning("chat attempt %d failed in transport: %s", attempts, exc)
            else:
                if response.status_code == 429 or response.status_code >= 500:
                    last_error = GatewayError(
                        f"provider returned status {response.status_code}", attempts
                    )
                    log.warning("chat attempt %d got retryable status %d", attempts, response.status_code)
                elif response.status_code >= 400:
                    raise GatewayError(
                        f"provider rejected request with status {response.status_code}", attempts
                    )
                else:
                    return self._parse(response, attempts)
            if attempts <= self.config.max_retries:
                self._sleep(self._backoff_delay(attempts))
        raise GatewayError(
            f"chat completion failed after {attempts} attempts: {last_error}",
            attempts,
            cause=last_error,
        )

    def _parse(self, response: httpx.Response, attempts: int) -> ChatResult:
        try:
            body = response.json()
            text = body["choices"][0]["message"]["content"]
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise GatewayError(f"malformed provider response: {exc}", attempts, cause=exc) from exc
        meta = {
            "provider": "http",
            "status_code": response.status_code,
            "model": body.get("model", self.config.model_name),
            "usage": body.get("usage", {}),
        }
        return ChatResult(text=text, provider_meta=meta, attempts=attempts)


def make_provider(config: LlmConfig, *, transport: httpx.BaseTransport | None = None) -> ChatProvider:
    """Build the provider named by the config: ``mock:`` URLs select the mock."""
    if config.endpoint_url.startswith("mock:"):
        script = load_mock_script(config.mock_script_path) if config.mock_script_path else {}
        return MockProvider(script)
    return HttpChatProvider(config, transport=transport)


def chat(bundle: PromptBundle, config: LlmConfig, *, provider: ChatProvider | None = None) -> ChatResult:
    """Send a prompt bundle for completion; the bundle itself is never mutated."""
    provider = provider if provider is not None else make_provider(config)
    return provider.complete(bundle.messages, temperature=config.temperature)
