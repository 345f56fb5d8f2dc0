"""Chat-completion backends: a live OpenAI-compatible HTTP client and a
deterministic scripted backend for reproducible agent runs."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence
from urllib.parse import urlparse

import httpx


class Role(str, Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


@dataclass(frozen=True)
class ChatMessage:
    role: Role
    content: str

    def __post_init__(self) -> None:
        if self.role is not Role.SYSTEM and not self.content:
            raise ValueError(f"{self.role.value} message content must be non-empty")


@dataclass(frozen=True)
class CompletionRequest:
    messages: tuple[ChatMessage, ...]
    model_id: str
    temperature: float = 0.0
    max_tokens: int = 1024
    stop_sequences: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("messages must be non-empty")
        if self.messages[0].role is not Role.SYSTEM:
            raise ValueError("first message must have the system role")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must be in [0, 2]")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")

    def latest_user_content(self) -> str:
        for message in reversed(self.messages):
            if message.role is Role.USER:
                return message.content
        return ""


@dataclass(frozen=True)
class BackendConfig:
    endpoint_url: str
    model_id: str
    timeout_seconds: int = 60
    max_retries: int = 2
    api_key_env_var: str = "AUDIT_AGENT_API_KEY"

    def __post_init__(self) -> None:
        parsed = urlparse(self.endpoint_url)
        if not parsed.scheme or not parsed.netloc:
            raise ValueError(f"endpoint_url must be an absolute URL: {self.endpoint_url!r}")
        if self.timeout_seconds <= 0:
            raise ValueError("timeout_seconds must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be nonnegative")


class BackendError(Exception):
    """Base class for completion-backend failures."""


class NetworkError(BackendError):
    """Endpoint unreachable or timed out after all retries."""


class AuthError(BackendError):
    """Missing API key or HTTP 401/403."""


class RateLimited(BackendError):
    """HTTP 429 after all retries."""


class MalformedResponse(BackendError):
    """Server response lacks a completion."""


class ScriptExhausted(BackendError):
    """The agent requested more completions than the script provides."""


class ExpectationMismatch(BackendError):
    """The latest user content diverged from the scripted expectation."""


def truncate_at_stop(text: str, stop_sequences: Sequence[str]) -> str:
    """Cut text before the earliest occurrence of any stop sequence."""
    cut = len(text)
    for stop in stop_sequences:
        index = text.find(stop)
        if index != -1:
            cut = min(cut, index)
    return text[:cut]


class HttpBackend:
    """Client for any endpoint speaking the de-facto chat-completions shape.

    Immutable after construction; a custom httpx transport may be injected
    for testing (e.g. to count attempts).
    """

    def __init__(self, config: BackendConfig, transport: httpx.BaseTransport | None = None):
        self._config = config
        self._transport = transport

    def complete(self, request: CompletionRequest) -> str:
        config = self._config
        api_key = os.environ.get(config.api_key_env_var)
        if not api_key:
            raise AuthError(f"no API key in environment variable {config.api_key_env_var}")
        payload = {
            "model": request.model_id or config.model_id,
            "messages": [{"role": m.role.value, "content": m.content} for m in request.messages],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        if request.stop_sequences:
            payload["stop"] = list(request.stop_sequences)
        headers = {"Authorization": f"Bearer {api_key}"}
        attempts = 1 + config.max_retries
        last_error: BackendError = NetworkError("no attempt made")
        with httpx.Client(transport=self._transport, timeout=config.timeout_seconds) as client:
            for _ in range(attempts):
                try:
                    response = client.post(config.endpoint_url, json=payload, headers=headers)
                except httpx.TransportError as exc:
                    last_error = NetworkError(str(exc))
                    continue
                if response.status_code in (401, 403):
                    raise AuthError(f"HTTP {response.status_code} from {config.endpoint_url}")
                if response.status_code == 429:
                    last_error = RateLimited(f"HTTP 429 from {config.endpoint_url}")
                    continue
                if response.status_code >= 500:
                    last_error = NetworkError(f"HTTP {response.status_code} from {config.endpoint_url}")
                    continue
                return truncate_at_stop(_extract_completion(response), request.stop_sequences)
        raise last_error


def _extract_completion(response: httpx.Response) -> str:
    try:
        body = response.json()
        content = body["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise MalformedResponse(f"response lacks a completion: {exc}") from exc
    if not isinstance(content, str):
        raise MalformedResponse("completion content is not text")
    return content


@dataclass(frozen=True)
class ScriptedExchange:
    """One pre-recorded reply, optionally guarded by an expected substring."""

    reply: str
    expect_substring: str | None = None

    def __post_init__(self) -> None:
        if not self.reply:
            raise ValueError("reply must be non-empty")


def scripted_complete(
    request: CompletionRequest,
    script: Sequence[ScriptedExchange],
    cursor: int,
) -> tuple[str, int]:
    """Return the cursor's reply and the advanced cursor.

    When the entry carries expect_substring it must occur in the latest
    user-role content; a miss means the agent left the scripted path.
    """
    if cursor >= len(script):
        raise ScriptExhausted(f"script has {len(script)} entries, cursor at {cursor}")
    entry = script[cursor]
    if entry.expect_substring is not None:
        latest = request.latest_user_content()
        if entry.expect_substring not in latest:
            raise ExpectationMismatch(
                f"entry {cursor} expected {entry.expect_substring!r} "
                f"in latest user content (got {latest[:200]!r})"
            )
    return entry.reply, cursor + 1


class ScriptedBackend:
    """Per-run completion session replaying a fixed script.

    The script itself is immutable and shareable; each run owns one
    ScriptedBackend so the cursor stays session-local.
    """

    def __init__(self, script: Sequence[ScriptedExchange]):
        self._script = tuple(script)
        self._cursor = 0
        self.call_count = 0

    def complete(self, request: CompletionRequest) -> str:
        self.call_count += 1
        reply, self._cursor = scripted_complete(request, self._script, self._cursor)
        return truncate_at_stop(reply, request.stop_sequences)


def load_script(path: str | Path) -> tuple[ScriptedExchange, ...]:
    """Load scripted exchanges from a JSON list of {reply, expect_substring?}."""
    records = json.loads(Path(path).read_text(encoding="utf-8"))
    return tuple(
        ScriptedExchange(reply=r["reply"], expect_substring=r.get("expect_substring"))
        for r in records
    )
