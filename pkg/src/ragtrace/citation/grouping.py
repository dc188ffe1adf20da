"""Citation grouping and cross-referencing.

Citations are grouped per source document; display labels [1]..[G] follow
first appearance order in the answer. Two groups cross-reference each
other when at least one answer sentence cites both.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from itertools import combinations

from ragtrace.citation.matching import Citation
from ragtrace.generation.answers import StructuredAnswer


@dataclass
class CitationGroup:
    group_id: int
    doc_id: str
    members: list[Citation] = field(default_factory=list)

    @property
    def display_label(self) -> str:
        return f"[{self.group_id}]"


@dataclass(frozen=True)
class CrossReference:
    from_group: int
    to_group: int
    shared_sentence_indexes: tuple[int, ...]


def group_citations(answer: StructuredAnswer, citations: list[Citation]) -> tuple[list[CitationGroup], StructuredAnswer]:
    """Group citations per document and annotate the answer with labels.

    The annotated answer is a deep copy whose cited sentences carry their
    group labels appended, e.g. ``"... heat stress. [1][2]"``.
    """
    ordered = sorted(citations, key=lambda c: (c.answer_sentence_index, -c.score, c.doc_id))
    groups: list[CitationGroup] = []
    by_doc: dict[str, CitationGroup] = {}
    for citation in ordered:
        group = by_doc.get(citation.doc_id)
        if group is None:
            group = CitationGroup(group_id=len(groups) + 1, doc_id=citation.doc_id)
            by_doc[citation.doc_id] = group
            groups.append(group)
        group.members.append(citation)
    for group in groups:
        group.members.sort(key=lambda c: (c.source_span[0], c.answer_sentence_index))

    labels: dict[int, list[int]] = {}
    for group in groups:
        for citation in group.members:
            per_sentence = labels.setdefault(citation.answer_sentence_index, [])
            if group.group_id not in per_sentence:
                per_sentence.append(group.group_id)

    annotated = copy.deepcopy(answer)
    for sentence in annotated.all_sentences():
        ids = labels.get(sentence.index)
        if ids:
            sentence.text = sentence.text + " " + "".join(f"[{gid}]" for gid in sorted(ids))
    annotated.summary = " ".join(s.text for s in annotated.summary_sentences)
    return groups, annotated


def cross_reference(groups: list[CitationGroup]) -> list[CrossReference]:
    """Pairs of groups whose citations share at least one answer sentence."""
    sentence_sets = {
        g.group_id: {c.answer_sentence_index for c in g.members} for g in groups
    }
    out: list[CrossReference] = []
    for a, b in combinations(sorted(sentence_sets), 2):
        shared = sorted(sentence_sets[a] & sentence_sets[b])
        if shared:
            out.append(CrossReference(from_group=a, to_group=b,
                                      shared_sentence_indexes=tuple(shared)))
    return out
