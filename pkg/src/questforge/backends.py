"""Pluggable chat-completion providers.

``RemoteBackend`` speaks the de-facto chat-completions HTTP shape against any
compatible endpoint.  ``ScriptedBackend`` answers from an ordered rule table
and is what the test suite and shipped fixtures run on.  ``RecordingBackend``
and ``ReplayBackend`` wrap any provider with a JSONL tape of (prompt digest,
reply) pairs so whole sessions replay bit-exactly and fail loudly if the
prompts drift.

No test in the suite needs network access; the remote provider is exercised
against a stubbed transport.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import time
from dataclasses import dataclass

import requests

ROLE_SYSTEM = "system"
ROLE_NPC = "npc"
ROLE_PLAYER = "player"
ROLE_FUNCTION_RETURN = "function_return"

_ROLES = (ROLE_SYSTEM, ROLE_NPC, ROLE_PLAYER, ROLE_FUNCTION_RETURN)

FUNCTION_RETURNS_PREFIX = "Function_Returns: "


class BackendError(Exception):
    """Base for all provider failures surfaced to the degraded-turn path."""


class TransportError(BackendError):
    pass


class AuthError(BackendError):
    pass


class BackendTimeout(BackendError):
    pass


class ReplayError(BackendError):
    pass


@dataclass(frozen=True)
class PromptMessage:
    role: str
    text: str

    def __post_init__(self) -> None:
        if self.role not in _ROLES:
            raise ValueError(f"unknown prompt role {self.role!r}")

    def as_line(self) -> str:
        if self.role == ROLE_SYSTEM:
            return self.text
        if self.role == ROLE_PLAYER:
            return f"Player: {self.text}"
        if self.role == ROLE_NPC:
            return f"NPC: {self.text}"
        return f"{FUNCTION_RETURNS_PREFIX}{self.text}"


@dataclass(frozen=True)
class PromptDocument:
    """Ordered prompt; the first message is always the system/profile block."""

    messages: tuple[PromptMessage, ...]

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("prompt document must not be empty")
        if self.messages[0].role != ROLE_SYSTEM:
            raise ValueError("prompt document must start with the system block")

    def as_text(self) -> str:
        return "\n".join(message.as_line() for message in self.messages)

    def digest(self) -> str:
        return hashlib.sha256(self.as_text().encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CompletionParams:
    temperature: float = 0.7
    max_tokens: int = 512
    timeout: float = 30.0


DEFAULT_PARAMS = CompletionParams()


class Backend:
    """Interface: turn a prompt document into raw model text."""

    def complete(self, doc: PromptDocument,
                 params: CompletionParams = DEFAULT_PARAMS) -> str:
        raise NotImplementedError


@dataclass
class ScriptRule:
    """First matching rule wins; ``once`` rules are consumed when they fire."""

    response: str
    substring: str | None = None
    pattern: str | None = None
    turn_index: int | None = None
    once: bool = False
    _spent: bool = False

    def matches(self, text: str, call_index: int) -> bool:
        if self._spent:
            return False
        if self.turn_index is not None and self.turn_index != call_index:
            return False
        if self.substring is not None and self.substring not in text:
            return False
        if self.pattern is not None and re.search(self.pattern, text) is None:
            return False
        return True


class ScriptedBackend(Backend):
    def __init__(self, rules: list[ScriptRule], default: str | None = None):
        self.rules = rules
        self.default = default
        self.calls = 0

    @classmethod
    def from_jsonl(cls, path: str, default: str | None = None) -> "ScriptedBackend":
        rules = []
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line)
                if "default" in raw:
                    default = raw["default"]
                    continue
                rules.append(ScriptRule(
                    response=raw["response"],
                    substring=raw.get("substring"),
                    pattern=raw.get("pattern"),
                    turn_index=raw.get("turn_index"),
                    once=raw.get("once", False),
                ))
        return cls(rules, default=default)

    def complete(self, doc: PromptDocument,
                 params: CompletionParams = DEFAULT_PARAMS) -> str:
        self.calls += 1
        text = doc.as_text()
        for rule in self.rules:
            if rule.matches(text, self.calls):
                if rule.once:
                    rule._spent = True
                return rule.response
        if self.default is not None:
            return self.default
        raise TransportError(f"no scripted rule matched call {self.calls}")


def _to_chat_messages(doc: PromptDocument) -> list[dict]:
    mapping = {ROLE_SYSTEM: "system", ROLE_NPC: "assistant", ROLE_PLAYER: "user"}
    messages = []
    for message in doc.messages:
        if message.role == ROLE_FUNCTION_RETURN:
            messages.append({"role": "user",
                             "content": f"{FUNCTION_RETURNS_PREFIX}{message.text}"})
        else:
            messages.append({"role": mapping[message.role], "content": message.text})
    return messages


class RemoteBackend(Backend):
    """Chat-completions HTTP client; retries transport errors twice with backoff."""

    MAX_RETRIES = 2
    BACKOFF_SECONDS = (1.0, 2.0)

    def __init__(self, api_key: str | None = None, api_base: str | None = None,
                 model: str | None = None, transport=None):
        self.api_key = api_key if api_key is not None else os.environ.get("QUESTFORGE_API_KEY", "")
        self.api_base = (api_base or os.environ.get("QUESTFORGE_API_BASE")
                         or "https://api.openai.com/v1").rstrip("/")
        self.model = model or os.environ.get("QUESTFORGE_MODEL") or "gpt-4"
        self._post = transport or requests.post
        self._sleep = time.sleep

    def complete(self, doc: PromptDocument,
                 params: CompletionParams = DEFAULT_PARAMS) -> str:
        body = {
            "model": self.model,
            "messages": _to_chat_messages(doc),
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        headers = {"Authorization": f"Bearer {self.api_key}",
                   "Content-Type": "application/json"}
        url = f"{self.api_base}/chat/completions"
        last_error: BackendError | None = None
        for attempt in range(self.MAX_RETRIES + 1):
            if attempt > 0:
                self._sleep(self.BACKOFF_SECONDS[attempt - 1])
            try:
                response = self._post(url, json=body, headers=headers,
                                      timeout=params.timeout)
            except requests.Timeout as exc:
                raise BackendTimeout(str(exc)) from exc
            except requests.RequestException as exc:
                last_error = TransportError(str(exc))
                continue
            if response.status_code in (401, 403):
                raise AuthError(f"auth failure: HTTP {response.status_code}")
            if response.status_code >= 500:
                last_error = TransportError(f"HTTP {response.status_code}")
                continue
            if response.status_code != 200:
                raise TransportError(f"HTTP {response.status_code}")
            try:
                return response.json()["choices"][0]["message"]["content"]
            except (KeyError, IndexError, ValueError) as exc:
                raise TransportError(f"malformed completion response: {exc}") from exc
        assert last_error is not None
        raise last_error


class RecordingBackend(Backend):
    """Wrap any provider, appending (digest, reply) pairs to a JSONL tape."""

    def __init__(self, inner: Backend, tape_path: str):
        self.inner = inner
        self.tape_path = tape_path

    def complete(self, doc: PromptDocument,
                 params: CompletionParams = DEFAULT_PARAMS) -> str:
        reply = self.inner.complete(doc, params)
        with open(self.tape_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps({"digest": doc.digest(), "reply": reply},
                                    sort_keys=True) + "\n")
        return reply


class ReplayBackend(Backend):
    """Answer from a tape in order; any prompt drift is a loud error."""

    def __init__(self, records: list[dict]):
        self.records = records
        self.index = 0

    @classmethod
    def from_jsonl(cls, path: str) -> "ReplayBackend":
        records = []
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return cls(records)

    def complete(self, doc: PromptDocument,
                 params: CompletionParams = DEFAULT_PARAMS) -> str:
        turn = self.index + 1
        if self.index >= len(self.records):
            raise ReplayError(f"tape exhausted at turn {turn}")
        record = self.records[self.index]
        if record.get("digest") != doc.digest():
            raise ReplayError(f"digest mismatch at turn {turn}")
        self.index += 1
        return record["reply"]
