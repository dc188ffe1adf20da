"""Fine-grained evidence extraction: pick the most relevant chunk sentences.

Sentences are scored by cosine similarity against the query when an
embedder is available, else by exact-token overlap |q ∩ s| / |q|. The top
``max_sentences`` are returned in document order; scores are clamped to
[0, 1]. Spans always reference the original document body, never the
enriched text.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ragtrace.chunking.chunks import Chunk
from ragtrace.indexing.sparse import tokenize
from ragtrace.ingest.documents import Document
from ragtrace.ingest.sentences import SentenceSpan

DEFAULT_MAX_SENTENCES = 3


@dataclass(frozen=True)
class EvidenceSpan:
    chunk_id: str
    doc_id: str
    sentence_span: tuple[int, int]
    score: float


def chunk_sentences(chunk: Chunk, doc: Document) -> list[SentenceSpan]:
    """Document sentence spans lying fully inside the chunk span."""
    start, end = chunk.span
    return [s for s in doc.sentences if s.start >= start and s.end <= end]


def _lexical_scores(query: str, texts: list[str]) -> list[float]:
    query_tokens = set(tokenize(query))
    if not query_tokens:
        return [0.0] * len(texts)
    return [len(query_tokens & set(tokenize(t))) / len(query_tokens) for t in texts]


def _embedding_scores(query: str, texts: list[str], embedder) -> list[float]:
    raw = np.asarray(embedder.embed([query] + texts), dtype=np.float64)
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    norms[norms < 1e-12] = 1.0
    unit = raw / norms
    return [float(np.clip(unit[0] @ unit[i + 1], 0.0, 1.0)) for i in range(len(texts))]


def extract_evidence(
    query: str,
    chunk: Chunk,
    doc: Document,
    embedder=None,
    max_sentences: int = DEFAULT_MAX_SENTENCES,
) -> list[EvidenceSpan]:
    """Select the ``max_sentences`` most query-relevant sentences of ``chunk``."""
    spans = chunk_sentences(chunk, doc)
    if not spans:
        return []
    texts = [doc.sentence_text(s) for s in spans]
    if embedder is not None:
        scores = _embedding_scores(query, texts, embedder)
    else:
        scores = _lexical_scores(query, texts)
    ranked = sorted(range(len(spans)), key=lambda i: (-scores[i], i))[:max_sentences]
    return [
        EvidenceSpan(
            chunk_id=chunk.id,
            doc_id=doc.id,
            sentence_span=(spans[i].start, spans[i].end),
            score=float(min(max(scores[i], 0.0), 1.0)),
        )
        for i in sorted(ranked)
    ]
