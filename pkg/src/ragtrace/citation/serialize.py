"""Wire format for annotated answers, consumed by the studio and the CLI."""

from __future__ import annotations

from ragtrace.citation.grouping import CitationGroup, CrossReference, group_citations, cross_reference
from ragtrace.citation.matching import Citation
from ragtrace.generation.answers import StructuredAnswer
from ragtrace.ingest.documents import Document


def build_annotated_answer(
    answer: StructuredAnswer,
    citations: list[Citation],
    unsupported: list[int],
    docs: dict[str, Document],
) -> dict:
    """Assemble the annotated-answer JSON payload.

    ``summary`` carries its group labels inline; section sentences are
    structured with their citation records and an ``unsupported`` flag.
    """
    groups, annotated = group_citations(answer, citations)
    crossrefs = cross_reference(groups)
    group_of: dict[tuple[int, str, tuple[int, int]], int] = {}
    for group in groups:
        for member in group.members:
            key = (member.answer_sentence_index, member.doc_id, member.source_span)
            group_of[key] = group.group_id
    unsupported_set = set(unsupported)

    by_sentence: dict[int, list[dict]] = {}
    for citation in citations:
        entry = {
            "group": group_of[(citation.answer_sentence_index, citation.doc_id, citation.source_span)],
            "doc_id": citation.doc_id,
            "span": [citation.source_span[0], citation.source_span[1]],
            "score": citation.score,
            "kind": citation.kind,
        }
        by_sentence.setdefault(citation.answer_sentence_index, []).append(entry)
    for entries in by_sentence.values():
        entries.sort(key=lambda e: (e["group"], e["span"][0]))

    sections = []
    for section in answer.sections:
        sentences = []
        for sentence in section.sentences:
            if sentence.kind == "heading":
                continue
            sentences.append({
                "text": sentence.text,
                "index": sentence.index,
                "opinion_bearing": sentence.opinion_bearing,
                "citations": by_sentence.get(sentence.index, []),
                "unsupported": sentence.index in unsupported_set,
            })
        sections.append({"heading": section.heading, "sentences": sentences})

    group_payload = []
    for group in groups:
        doc = docs.get(group.doc_id)
        group_payload.append({
            "id": group.group_id,
            "doc_id": group.doc_id,
            "title": doc.title if doc else "",
            "source_uri": doc.source_uri if doc else "",
            "publish_date": doc.publish_date.isoformat() if doc and doc.publish_date else None,
            "spans": [[m.source_span[0], m.source_span[1]] for m in group.members],
        })

    return {
        "summary": annotated.summary,
        "sections": sections,
        "groups": group_payload,
        "cross_references": [
            {
                "from_group": ref.from_group,
                "to_group": ref.to_group,
                "shared_sentence_indexes": list(ref.shared_sentence_indexes),
            }
            for ref in crossrefs
        ],
    }
