"""Invoke a text-generation provider with an assembled prompt."""

from __future__ import annotations

from typing import Iterator

from ragtrace.generation.prompt import Prompt


def generate(prompt: Prompt, llm, stream: bool = False) -> str | Iterator[str]:
    """Run the provider; streaming yields deltas whose concatenation equals
    the non-streaming result for a deterministic provider.

    Provider failures surface as :class:`~ragtrace.errors.LlmUnavailable`
    or :class:`~ragtrace.errors.ProviderTimeout`.
    """
    messages = prompt.render_messages()
    if stream:
        return llm.stream(messages)
    return llm.complete(messages)
