"""BM25 inverted index over chunk enriched text.

Tokenization is lowercase, split on non-alphanumeric, empty tokens dropped.
Scoring uses k1=1.2, b=0.75 and the smoothed IDF
ln(1 + (N - df + 0.5) / (df + 0.5)); ties break by ascending chunk id.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

from ragtrace.errors import EmptyCorpus
from ragtrace.indexing.hits import RetrievalHit

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


@dataclass
class SparseIndex:
    postings: dict[str, list[tuple[str, int]]]
    doc_lengths: dict[str, int]
    avg_doc_length: float
    N: int
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B

    def idf(self, term: str) -> float:
        df = len(self.postings.get(term, ()))
        return math.log(1.0 + (self.N - df + 0.5) / (df + 0.5))

    def chunk_ids(self) -> set[str]:
        return set(self.doc_lengths)


def build_sparse(chunks, k1: float = DEFAULT_K1, b: float = DEFAULT_B) -> SparseIndex:
    """Index chunk ``enriched_text``; raises :class:`EmptyCorpus` on no chunks."""
    if not chunks:
        raise EmptyCorpus("no chunks to index")
    postings: dict[str, list[tuple[str, int]]] = {}
    doc_lengths: dict[str, int] = {}
    for chunk in chunks:
        tokens = tokenize(chunk.enriched_text)
        doc_lengths[chunk.id] = len(tokens)
        for term, tf in Counter(tokens).items():
            postings.setdefault(term, []).append((chunk.id, tf))
    for plist in postings.values():
        plist.sort(key=lambda entry: entry[0])
    avg = sum(doc_lengths.values()) / len(doc_lengths)
    return SparseIndex(postings=postings, doc_lengths=doc_lengths,
                       avg_doc_length=avg, N=len(doc_lengths), k1=k1, b=b)


def search_sparse(index: SparseIndex, query: str, k: int,
                  variant_text: str | None = None) -> list[RetrievalHit]:
    """Top-k chunks by BM25 score. Chunks matching no query term are omitted."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scores: dict[str, float] = {}
    for term in sorted(set(tokenize(query))):
        plist = index.postings.get(term)
        if not plist:
            continue
        idf = index.idf(term)
        for chunk_id, tf in plist:
            dl = index.doc_lengths[chunk_id]
            denom = tf + index.k1 * (1.0 - index.b + index.b * dl / index.avg_doc_length)
            scores[chunk_id] = scores.get(chunk_id, 0.0) + idf * tf * (index.k1 + 1.0) / denom
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    return [
        RetrievalHit(chunk_id=cid, score=score, path="sparse", rank=rank,
                     variant_text=variant_text if variant_text is not None else query)
        for rank, (cid, score) in enumerate(ranked, start=1)
    ]
