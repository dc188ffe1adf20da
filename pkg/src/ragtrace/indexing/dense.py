"""Flat dense index: exhaustive cosine scan over normalized vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ragtrace.chunking.chunks import EmbeddingVector
from ragtrace.errors import DimensionMismatch, EmbedderUnavailable, EmptyCorpus, ProviderError
from ragtrace.indexing.hits import RetrievalHit


@dataclass
class DenseIndex:
    ids: list[str]          # sorted ascending; row i of matrix belongs to ids[i]
    matrix: np.ndarray      # shape (N, dims), rows L2-normalized
    dims: int
    metric: str = "cosine"

    def chunk_ids(self) -> set[str]:
        return set(self.ids)


def _normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    norms[norms < 1e-12] = 1.0
    return matrix / norms


def build_dense(chunks, embedder) -> DenseIndex:
    """Embed chunk ``enriched_text`` and store normalized vectors."""
    if not chunks:
        raise EmptyCorpus("no chunks to index")
    ordered = sorted(chunks, key=lambda c: c.id)
    try:
        raw = embedder.embed([c.enriched_text for c in ordered])
    except ProviderError:
        raise
    except Exception as exc:
        raise EmbedderUnavailable(str(exc)) from exc
    matrix = np.asarray(raw, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != len(ordered):
        raise DimensionMismatch("embedder returned a malformed batch")
    return DenseIndex(ids=[c.id for c in ordered], matrix=_normalize_rows(matrix),
                      dims=int(matrix.shape[1]))


def _as_query_vector(query_vector, dims: int) -> np.ndarray:
    if isinstance(query_vector, EmbeddingVector):
        vec = np.asarray(query_vector.values, dtype=np.float64)
    else:
        vec = np.asarray(query_vector, dtype=np.float64)
    if vec.ndim != 1 or vec.shape[0] != dims:
        raise DimensionMismatch(f"query vector has shape {vec.shape}, index dims {dims}")
    norm = float(np.linalg.norm(vec))
    return vec / norm if norm > 1e-12 else vec


def search_dense(index: DenseIndex, query_vector, k: int,
                 variant_text: str | None = None) -> list[RetrievalHit]:
    """Top-k by cosine similarity (dot product of normalized vectors)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    query = _as_query_vector(query_vector, index.dims)
    scores = index.matrix @ query
    # ids are sorted ascending, so a stable sort on -score breaks ties by id.
    order = np.argsort(-scores, kind="stable")[:k]
    return [
        RetrievalHit(chunk_id=index.ids[i], score=float(scores[i]), path="dense",
                     rank=rank, variant_text=variant_text)
        for rank, i in enumerate(order, start=1)
    ]
