"""Provider protocols: text generation and embeddings."""

from __future__ import annotations

from typing import Iterator, Protocol, runtime_checkable


@runtime_checkable
class GenerationProvider(Protocol):
    def complete(self, messages: list[dict]) -> str:
        """Return the full response text for a chat-style message list."""
        ...

    def stream(self, messages: list[dict]) -> Iterator[str]:
        """Yield response deltas; their concatenation equals complete()."""
        ...


@runtime_checkable
class EmbeddingProvider(Protocol):
    def embed(self, texts: list[str]) -> list[list[float]]:
        """Return one fixed-dimensional vector per input text."""
        ...
