"""Generation and embedding providers: HTTP clients plus offline options."""

from ragtrace.providers.base import EmbeddingProvider, GenerationProvider
from ragtrace.providers.extractive import ExtractiveGenerator
from ragtrace.providers.hashing import HashingEmbedder
from ragtrace.providers.http import HttpEmbeddingProvider, HttpGenerationProvider
from ragtrace.providers.mock import FailingProvider, ScriptedGenerationProvider

__all__ = [
    "EmbeddingProvider",
    "ExtractiveGenerator",
    "FailingProvider",
    "GenerationProvider",
    "HashingEmbedder",
    "HttpEmbeddingProvider",
    "HttpGenerationProvider",
    "ScriptedGenerationProvider",
]
