"""Deterministic offline embedder: hashed bag-of-words vectors.

Each token is hashed into one of ``dims`` buckets; the L2-normalized bucket
counts form the vector. Texts sharing vocabulary land close in cosine
space, which is enough for semantic boundary detection and dense retrieval
at desk scale without any network dependency.
"""

from __future__ import annotations

import hashlib

from ragtrace.indexing.sparse import tokenize

DEFAULT_DIMS = 256


class HashingEmbedder:
    def __init__(self, dims: int = DEFAULT_DIMS):
        if dims < 2:
            raise ValueError("dims must be >= 2")
        self.dims = dims

    def _bucket(self, token: str) -> int:
        digest = hashlib.sha256(token.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "little") % self.dims

    def embed(self, texts: list[str]) -> list[list[float]]:
        out = []
        for text in texts:
            vec = [0.0] * self.dims
            for token in tokenize(text):
                vec[self._bucket(token)] += 1.0
            norm = sum(v * v for v in vec) ** 0.5
            if norm > 0.0:
                vec = [v / norm for v in vec]
            out.append(vec)
        return out
