"""Multi-path retrieval with weighted reciprocal rank fusion.

Every query variant runs against both the sparse and dense paths; all
resulting rankings are fused with fused_score(c) = sum over rankings of
weight / (k_const + rank(c)). Ties break by ascending chunk id.
"""

from __future__ import annotations

from ragtrace.errors import IndexMismatch
from ragtrace.indexing.dense import DenseIndex, search_dense
from ragtrace.indexing.sparse import SparseIndex, search_sparse
from ragtrace.query.rewrite import QueryBundle
from ragtrace.indexing.hits import RetrievalHit

DEFAULT_RRF_K = 60
DEFAULT_K_PER_PATH = 20
DEFAULT_K_FINAL = 8


def rrf_fuse(rankings: list[tuple[list[str], float]], k_const: int = DEFAULT_RRF_K) -> list[RetrievalHit]:
    """Fuse duplicate-free rankings of chunk ids, each with a weight."""
    if k_const < 1:
        raise ValueError("k_const must be >= 1")
    contributions: dict[str, list[float]] = {}
    for ids, weight in rankings:
        if len(set(ids)) != len(ids):
            raise ValueError("ranking contains duplicate chunk ids")
        for rank, cid in enumerate(ids, start=1):
            contributions.setdefault(cid, []).append(weight / (k_const + rank))
    # Summing in sorted order makes the float total independent of the
    # order in which rankings were supplied.
    scores = {cid: sum(sorted(parts)) for cid, parts in contributions.items()}
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return [
        RetrievalHit(chunk_id=cid, score=score, path="fused", rank=rank)
        for rank, (cid, score) in enumerate(ordered, start=1)
    ]


def retrieve_multipath(
    bundle: QueryBundle,
    sparse: SparseIndex | None,
    dense: DenseIndex | None,
    embedder=None,
    k_per_path: int = DEFAULT_K_PER_PATH,
    k_final: int = DEFAULT_K_FINAL,
    k_const: int = DEFAULT_RRF_K,
) -> list[RetrievalHit]:
    """Run every variant through both paths and fuse the rankings.

    The dense path is skipped when either the dense index or the embedder
    is missing. Raises :class:`IndexMismatch` when the two indexes were
    built over different chunk sets.
    """
    if sparse is not None and dense is not None and sparse.chunk_ids() != dense.chunk_ids():
        raise IndexMismatch("sparse and dense indexes cover different chunk sets")

    rankings: list[tuple[list[str], float]] = []
    for text, weight in bundle.weighted_texts():
        if sparse is not None:
            hits = search_sparse(sparse, text, k_per_path, variant_text=text)
            if hits:
                rankings.append(([h.chunk_id for h in hits], weight))
        if dense is not None and embedder is not None:
            vector = embedder.embed([text])[0]
            hits = search_dense(dense, vector, k_per_path, variant_text=text)
            if hits:
                rankings.append(([h.chunk_id for h in hits], weight))
    return rrf_fuse(rankings, k_const)[:k_final]
