"""Transport to OpenAI-compatible chat-completion endpoints, plus replay.

The replay transport answers from recorded fixtures keyed by a stable digest
of (model, temperature, messages), which makes every LLM-dependent code path
a deterministic function of its inputs.  API keys come from the environment
(SCHEMAFORGE_API_KEY) or a config file, never argv, and are redacted from
every error message and repr.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Protocol

from .errors import SchemaForgeError

API_KEY_ENV = "SCHEMAFORGE_API_KEY"
_REDACTED = "[redacted]"


class GatewayError(SchemaForgeError):
    transient = False


class AuthError(GatewayError):
    pass


class RateLimitError(GatewayError):
    transient = True


class ServerError(GatewayError):
    transient = True


class GatewayTimeoutError(GatewayError):
    transient = True


class TransportError(GatewayError):
    transient = True


class MalformedResponseError(GatewayError):
    pass


class ReplayMissError(GatewayError):
    def __init__(self, digest: str):
        self.digest = digest
        super().__init__(
            f"no fixture for digest {digest}; run once with --record against a live "
            "endpoint to create it"
        )


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ("system", "user", "assistant"):
            raise ValueError(f"unknown chat role {self.role!r}")
        if not self.content:
            raise ValueError("chat message content must be non-empty")

    def to_dict(self) -> dict:
        return {"role": self.role, "content": self.content}


@dataclass
class GatewayConfig:
    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-4o-mini"
    api_key: str = ""
    timeout: float = 60.0
    max_retries: int = 2
    temperature: float = 0.0

    def __repr__(self):
        key = _REDACTED if self.api_key else "''"
        return (
            f"GatewayConfig(base_url={self.base_url!r}, model={self.model!r}, "
            f"api_key={key}, timeout={self.timeout}, max_retries={self.max_retries}, "
            f"temperature={self.temperature})"
        )

    def redact(self, text: str) -> str:
        if self.api_key and self.api_key in text:
            return text.replace(self.api_key, _REDACTED)
        return text


def config_from_env(
    base_url: str | None = None,
    model: str | None = None,
    config_file: str | Path | None = None,
    **overrides,
) -> GatewayConfig:
    """Build a config from defaults, an optional JSON config file, and env."""
    values: dict = {}
    if config_file:
        values.update(json.loads(Path(config_file).read_text(encoding="utf-8")))
    if base_url:
        values["base_url"] = base_url
    if model:
        values["model"] = model
    values.update({k: v for k, v in overrides.items() if v is not None})
    env_key = os.environ.get(API_KEY_ENV, "")
    if env_key:
        values["api_key"] = env_key
    return GatewayConfig(**values)


def message_digest(model: str, temperature: float, messages: list) -> str:
    """Stable fixture key: sha256 of the canonical request content."""
    canonical = json.dumps(
        {
            "model": model,
            "temperature": temperature,
            "messages": [m.to_dict() for m in messages],
        },
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class Transport(Protocol):
    def complete(self, config: GatewayConfig, messages: list) -> str: ...


class HttpTransport:
    """Live POST {base_url}/chat/completions."""

    def complete(self, config: GatewayConfig, messages: list) -> str:
        import requests

        url = config.base_url.rstrip("/") + "/chat/completions"
        payload = {
            "model": config.model,
            "temperature": config.temperature,
            "messages": [m.to_dict() for m in messages],
        }
        headers = {"Authorization": f"Bearer {config.api_key}"}
        try:
            response = requests.post(url, json=payload, headers=headers, timeout=config.timeout)
        except requests.Timeout as exc:
            raise GatewayTimeoutError(config.redact(f"request to {url} timed out")) from exc
        except requests.RequestException as exc:
            raise TransportError(config.redact(f"request to {url} failed: {exc}")) from exc
        if response.status_code in (401, 403):
            raise AuthError(
                config.redact(f"authentication failed ({response.status_code}) at {url}")
            )
        if response.status_code == 429:
            raise RateLimitError(config.redact("rate limited (429)"))
        if response.status_code >= 500:
            raise ServerError(config.redact(f"server error ({response.status_code})"))
        if response.status_code != 200:
            raise MalformedResponseError(
                config.redact(f"unexpected status {response.status_code}: {response.text[:200]}")
            )
        try:
            body = response.json()
            content = body["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponseError(
                config.redact(f"response shape not recognized: {response.text[:200]}")
            ) from exc
        if not isinstance(content, str):
            raise MalformedResponseError("choices[0].message.content is not text")
        return content


class ReplayTransport:
    """Deterministic transport answering from recorded fixtures.

    Accepts an in-memory mapping digest -> text, or a directory holding one
    <digest>.txt file per recorded response.
    """

    def __init__(self, store: Mapping | str | Path):
        self._dir: Path | None = None
        self._store: Mapping | None = None
        if isinstance(store, (str, Path)):
            self._dir = Path(store)
        else:
            self._store = store

    def complete(self, config: GatewayConfig, messages: list) -> str:
        digest = message_digest(config.model, config.temperature, messages)
        if self._store is not None:
            if digest in self._store:
                return self._store[digest]
            raise ReplayMissError(digest)
        path = self._dir / f"{digest}.txt"
        if not path.is_file():
            raise ReplayMissError(digest)
        return path.read_text(encoding="utf-8")


def replay_store(record: Mapping | str | Path) -> ReplayTransport:
    return ReplayTransport(record)


class RecordingTransport:
    """Wraps a live transport; persists each response under the fixture dir."""

    def __init__(self, inner: Transport, directory: str | Path):
        self.inner = inner
        self.directory = Path(directory)

    def complete(self, config: GatewayConfig, messages: list) -> str:
        content = self.inner.complete(config, messages)
        digest = message_digest(config.model, config.temperature, messages)
        self.directory.mkdir(parents=True, exist_ok=True)
        (self.directory / f"{digest}.txt").write_text(content, encoding="utf-8")
        return content


def complete(
    config: GatewayConfig,
    messages: list,
    transport: Transport | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> str:
    """First choice's message content; transient failures retry with backoff."""
    if not messages:
        raise ValueError("messages must be non-empty")
    if transport is None:
        transport = HttpTransport()
    attempt = 0
    while True:
        try:
            return transport.complete(config, messages)
        except GatewayError as exc:
            if not exc.transient or attempt >= config.max_retries:
                raise
            sleep(min(8.0, 0.5 * 2**attempt))
            attempt += 1
