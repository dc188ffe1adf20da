"""Sparse (BM25) and dense (vector) indexes with persistence."""

from ragtrace.indexing.dense import DenseIndex, build_dense, search_dense
from ragtrace.indexing.hits import RetrievalHit
from ragtrace.indexing.sparse import SparseIndex, build_sparse, search_sparse, tokenize
from ragtrace.indexing.store import load, persist

__all__ = [
    "DenseIndex",
    "RetrievalHit",
    "SparseIndex",
    "build_dense",
    "build_sparse",
    "load",
    "persist",
    "search_dense",
    "search_sparse",
    "tokenize",
]
