"""Retrieval hit record shared by the sparse, dense and fused paths."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RetrievalHit:
    chunk_id: str
    score: float
    path: str              # "sparse" | "dense" | "fused"
    rank: int              # 1-based
    variant_text: str | None = None
