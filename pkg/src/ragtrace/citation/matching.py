"""Post-generation citation matching.

Answer sentences are aligned to source sentences after generation: a
whitespace-normalized, case-folded containment check yields an exact match
(score 1.0); otherwise the score is answer-coverage precision over exact
lowercase tokens, |T(answer) ∩ T(source)| / |T(answer)|. Citations below
the threshold are never emitted; sentences left without any citation are
reported as unsupported rather than dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ragtrace.generation.answers import StructuredAnswer
from ragtrace.indexing.sparse import tokenize

DEFAULT_THRESHOLD = 0.5
MAX_CITATIONS_PER_SENTENCE = 3

_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class SourceSentence:
    """One evidence sentence resolved to its document, ready for matching."""

    doc_id: str
    span: tuple[int, int]
    text: str
    doc_rank: int   # fused-rank order of the document's first hit


@dataclass(frozen=True)
class Citation:
    answer_sentence_index: int
    doc_id: str
    source_span: tuple[int, int]
    score: float
    kind: str        # "exact" | "aligned"


def _canonical(text: str) -> str:
    return _WS_RE.sub(" ", text).strip().casefold()


def sentence_score(answer_sentence: str, source_sentence: str) -> tuple[float, str]:
    """Score an answer sentence against one source sentence."""
    a = _canonical(answer_sentence)
    s = _canonical(source_sentence)
    if a and s and (a in s or s in a):
        return 1.0, "exact"
    answer_tokens = set(tokenize(answer_sentence))
    if not answer_tokens:
        return 0.0, "aligned"
    shared = answer_tokens & set(tokenize(source_sentence))
    return len(shared) / len(answer_tokens), "aligned"


def citation_targets(answer: StructuredAnswer, cite_summary: bool = True):
    """Answer sentences eligible for citation: opinion-bearing content, and
    summary sentences when configured. Headings are never cited."""
    for sentence in answer.all_sentences():
        if sentence.kind == "heading":
            continue
        if sentence.kind == "summary" and not cite_summary:
            continue
        if sentence.opinion_bearing:
            yield sentence


def match_citations(
    answer: StructuredAnswer,
    evidence_pool: list[SourceSentence],
    threshold: float = DEFAULT_THRESHOLD,
    cite_summary: bool = True,
) -> tuple[list[Citation], list[int]]:
    """Match every citation target against the whole evidence pool.

    Returns the citations (capped at 3 per answer sentence; ties broken by
    earlier document rank, then earlier span) and the indexes of target
    sentences that no source supported at the threshold.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    citations: list[Citation] = []
    unsupported: list[int] = []
    for sentence in citation_targets(answer, cite_summary=cite_summary):
        scored = []
        for pooled in evidence_pool:
            score, kind = sentence_score(sentence.text, pooled.text)
            if score >= threshold:
                scored.append((score, pooled, kind))
        scored.sort(key=lambda item: (-item[0], item[1].doc_rank, item[1].span[0]))
        if not scored:
            unsupported.append(sentence.index)
            continue
        seen_spans: set[tuple[str, tuple[int, int]]] = set()
        for score, pooled, kind in scored:
            if len(seen_spans) >= MAX_CITATIONS_PER_SENTENCE:
                break
            key = (pooled.doc_id, pooled.span)
            if key in seen_spans:
                continue
            seen_spans.add(key)
            citations.append(Citation(
                answer_sentence_index=sentence.index,
                doc_id=pooled.doc_id,
                source_span=pooled.span,
                score=score,
                kind=kind,
            ))
    return citations, unsupported
