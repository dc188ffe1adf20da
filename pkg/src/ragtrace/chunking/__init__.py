"""Semantic-aware chunking with context enrichment."""

from ragtrace.chunking.chunks import (
    Chunk,
    EmbeddingVector,
    attach_context_header,
    chunk_fixed,
    chunk_id,
    chunk_semantic,
)
from ragtrace.chunking.dates import normalize_relative_dates
from ragtrace.chunking.decontext import coreference_prompt, decontextualize

__all__ = [
    "Chunk",
    "EmbeddingVector",
    "attach_context_header",
    "chunk_fixed",
    "chunk_id",
    "chunk_semantic",
    "coreference_prompt",
    "decontextualize",
    "normalize_relative_dates",
]
