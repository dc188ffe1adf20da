"""Scripted providers for tests and offline runs.

``ScriptedGenerationProvider`` answers from an ordered rule list: the first
rule whose matcher appears in (or returns true for) the prompt text wins.
``FailingProvider`` raises on every call, for degradation paths.
"""

from __future__ import annotations

from typing import Callable, Iterator

from ragtrace.errors import LlmUnavailable

Rule = tuple[object, object]  # (substring | callable, response | callable)
STREAM_CHUNK = 16


def _prompt_text(messages: list[dict]) -> str:
    return "\n".join(m.get("content", "") for m in messages)


class ScriptedGenerationProvider:
    def __init__(self, rules: list[Rule] | None = None, default: str = ""):
        self.rules = list(rules or [])
        self.default = default
        self.calls: list[str] = []

    def _respond(self, messages: list[dict]) -> str:
        text = _prompt_text(messages)
        self.calls.append(text)
        for matcher, response in self.rules:
            matched = matcher(text) if callable(matcher) else (matcher in text)
            if matched:
                return response(text) if callable(response) else response
        return self.default

    def complete(self, messages: list[dict]) -> str:
        return self._respond(messages)

    def stream(self, messages: list[dict]) -> Iterator[str]:
        text = self._respond(messages)
        for i in range(0, len(text), STREAM_CHUNK):
            yield text[i:i + STREAM_CHUNK]


class FailingProvider:
    """Raises on every call; used to exercise degradation handling."""

    def __init__(self, exc_factory: Callable[[], Exception] | None = None):
        self._exc_factory = exc_factory or (lambda: LlmUnavailable("provider down"))

    def complete(self, messages: list[dict]) -> str:
        raise self._exc_factory()

    def stream(self, messages: list[dict]) -> Iterator[str]:
        raise self._exc_factory()

    def embed(self, texts: list[str]) -> list[list[float]]:
        raise self._exc_factory()
