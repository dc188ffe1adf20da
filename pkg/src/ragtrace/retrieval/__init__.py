"""Multi-path retrieval, rank fusion, usefulness judging, evidence extraction."""

from ragtrace.retrieval.evidence import DEFAULT_MAX_SENTENCES, EvidenceSpan, chunk_sentences, extract_evidence
from ragtrace.retrieval.fusion import (
    DEFAULT_K_FINAL,
    DEFAULT_K_PER_PATH,
    DEFAULT_RRF_K,
    retrieve_multipath,
    rrf_fuse,
)
from ragtrace.indexing.hits import RetrievalHit
from ragtrace.retrieval.judge import DEGRADED_RATIONALE, UtilityVerdict, judge_usefulness

__all__ = [
    "DEFAULT_K_FINAL",
    "DEFAULT_K_PER_PATH",
    "DEFAULT_MAX_SENTENCES",
    "DEFAULT_RRF_K",
    "DEGRADED_RATIONALE",
    "EvidenceSpan",
    "RetrievalHit",
    "UtilityVerdict",
    "chunk_sentences",
    "extract_evidence",
    "judge_usefulness",
    "retrieve_multipath",
    "rrf_fuse",
]
