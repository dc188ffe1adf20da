"""Post-generation citation matching, grouping and cross-referencing."""

from ragtrace.citation.grouping import CitationGroup, CrossReference, cross_reference, group_citations
from ragtrace.citation.matching import (
    DEFAULT_THRESHOLD,
    MAX_CITATIONS_PER_SENTENCE,
    Citation,
    SourceSentence,
    citation_targets,
    match_citations,
    sentence_score,
)
from ragtrace.citation.serialize import build_annotated_answer

__all__ = [
    "Citation",
    "CitationGroup",
    "CrossReference",
    "DEFAULT_THRESHOLD",
    "MAX_CITATIONS_PER_SENTENCE",
    "SourceSentence",
    "build_annotated_answer",
    "citation_targets",
    "cross_reference",
    "group_citations",
    "match_citations",
    "sentence_score",
]
