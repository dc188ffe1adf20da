"""Chunk documents into retrieval units.

Two chunkers are provided: a fixed sentence-window chunker and a semantic
chunker that places boundaries where the cosine distance between adjacent
sentence-window embeddings exceeds a percentile threshold. Chunk spans are
cut at sentence starts so that, without overlap, they partition the whole
document body exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ragtrace.errors import EmbedderUnavailable, InvalidChunkParams, ProviderError
from ragtrace.ingest.documents import Document


@dataclass
class EmbeddingVector:
    dims: int
    values: np.ndarray
    normalized: bool = False

    @classmethod
    def from_raw(cls, values) -> "EmbeddingVector":
        vec = np.asarray(values, dtype=np.float64)
        norm = float(np.linalg.norm(vec))
        if norm > 1e-12:
            vec = vec / norm
        return cls(dims=vec.shape[0], values=vec, normalized=True)


@dataclass
class Chunk:
    id: str
    doc_id: str
    span: tuple[int, int]
    seq: int
    text: str
    context_header: str = ""
    enriched_text: str = ""
    embedding: EmbeddingVector | None = None
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.enriched_text:
            self.enriched_text = self.text


def chunk_id(doc_id: str, seq: int) -> str:
    return f"{doc_id}#{seq:04d}"


def _chunks_from_groups(doc: Document, groups: list[list[int]]) -> list[Chunk]:
    """Build chunks from sentence-index groups.

    Span cuts sit at sentence starts (first chunk starts at 0, last ends at
    len(body)), so trailing whitespace belongs to the preceding chunk and
    non-overlapping groups tile the body exactly.
    """
    chunks: list[Chunk] = []
    body_len = len(doc.body)
    last = len(groups) - 1
    for seq, group in enumerate(groups):
        start = 0 if seq == 0 else doc.sentences[group[0]].start
        end = body_len if seq == last else doc.sentences[group[-1] + 1].start
        chunks.append(Chunk(
            id=chunk_id(doc.id, seq),
            doc_id=doc.id,
            span=(start, end),
            seq=seq,
            text=doc.body[start:end],
        ))
    return chunks


def chunk_fixed(doc: Document, target_size: int, overlap: int = 0) -> list[Chunk]:
    """Window the document into chunks of ``target_size`` sentences.

    Consecutive chunks share exactly ``overlap`` sentences; the last chunk
    may be short. Sentence boundaries are never split.
    """
    if target_size < 1:
        raise InvalidChunkParams("target_size must be >= 1")
    if overlap < 0 or overlap >= target_size:
        raise InvalidChunkParams("overlap must satisfy 0 <= overlap < target_size")
    n = len(doc.sentences)
    if n == 0:
        return []
    step = target_size - overlap
    groups: list[list[int]] = []
    i = 0
    while True:
        groups.append(list(range(i, min(i + target_size, n))))
        if i + target_size >= n:
            break
        i += step
    return _chunks_from_groups(doc, groups)


def chunk_semantic(doc: Document, embedder, breakpoint_percentile: float = 90.0) -> list[Chunk]:
    """Split at semantic boundaries found via embedding distance.

    Each sentence is embedded together with one neighbor on each side; a
    boundary is placed after sentence i iff the cosine distance to sentence
    i+1 strictly exceeds the ``breakpoint_percentile``-th percentile of all
    adjacent distances in the document. Documents whose adjacent distances
    are all equal therefore never split.
    """
    if not 0 <= breakpoint_percentile <= 100:
        raise InvalidChunkParams("breakpoint_percentile must be in [0, 100]")
    n = len(doc.sentences)
    if n == 0:
        return []
    texts = [doc.sentence_text(s) for s in doc.sentences]
    windows = [" ".join(texts[max(0, i - 1):i + 2]) for i in range(n)]
    try:
        raw = embedder.embed(windows)
    except ProviderError:
        raise
    except Exception as exc:  # provider bugs surface as one error type
        raise EmbedderUnavailable(str(exc)) from exc
    vectors = np.asarray(raw, dtype=np.float64)
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    norms[norms < 1e-12] = 1.0
    unit = vectors / norms

    if n == 1:
        groups = [[0]]
    else:
        distances = 1.0 - np.sum(unit[:-1] * unit[1:], axis=1)
        threshold = float(np.percentile(distances, breakpoint_percentile))
        groups = [[0]]
        for i in range(n - 1):
            if distances[i] > threshold:
                groups.append([])
            groups[-1].append(i + 1)
    return _chunks_from_groups(doc, groups)


def attach_context_header(chunk: Chunk, doc: Document) -> Chunk:
    """Set the hierarchical context header: title plus enclosing headings."""
    stack: list = []
    for heading in doc.headings:
        if heading.start > chunk.span[0]:
            break
        while stack and stack[-1].level >= heading.level:
            stack.pop()
        stack.append(heading)
    parts = [doc.title] if doc.title else []
    parts.extend(h.text for h in stack)
    return replace(chunk, context_header=" > ".join(parts))
