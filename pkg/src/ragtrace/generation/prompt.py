"""Grounded prompt assembly from extracted evidence.

Evidence sentences are grouped by document into numbered context blocks in
fused-rank order. When the rendered prompt exceeds the character budget,
whole blocks are dropped from the tail; if even the first block alone is
over budget its sentences are trimmed from the end, never mid-sentence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ragtrace.errors import EmptyEvidence
from ragtrace.ingest.documents import Document
from ragtrace.prompts import load_template
from ragtrace.retrieval.evidence import EvidenceSpan

DEFAULT_BUDGET = 8000


@dataclass
class ContextBlock:
    block_id: int
    doc_id: str
    title: str
    sentences: list[str]

    def render(self) -> str:
        return f"[{self.block_id}] {self.title}\n" + "\n".join(self.sentences)


@dataclass
class Prompt:
    system: str
    context_blocks: list[ContextBlock]
    user_query: str
    history: list[dict] = field(default_factory=list)

    def context_text(self) -> str:
        return "\n\n".join(block.render() for block in self.context_blocks)

    def render_messages(self) -> list[dict]:
        system = f"{self.system}\n\nContext:\n{self.context_text()}"
        return [{"role": "system", "content": system}, *self.history,
                {"role": "user", "content": self.user_query}]

    def rendered_length(self) -> int:
        return sum(len(m["content"]) for m in self.render_messages())


def assemble_prompt(
    query: str,
    evidence: list[EvidenceSpan],
    docs: dict[str, Document],
    history: list[dict] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Prompt:
    """Build a grounded prompt; raises :class:`EmptyEvidence` on no evidence."""
    if not evidence:
        raise EmptyEvidence("no evidence to ground the prompt")

    blocks: list[ContextBlock] = []
    by_doc: dict[str, ContextBlock] = {}
    seen_spans: set[tuple[str, tuple[int, int]]] = set()
    for span in evidence:
        key = (span.doc_id, span.sentence_span)
        if key in seen_spans:
            continue
        seen_spans.add(key)
        doc = docs[span.doc_id]
        block = by_doc.get(span.doc_id)
        if block is None:
            block = ContextBlock(block_id=len(blocks) + 1, doc_id=span.doc_id,
                                 title=doc.title, sentences=[])
            by_doc[span.doc_id] = block
            blocks.append(block)
        block.sentences.append(doc.body[span.sentence_span[0]:span.sentence_span[1]])

    prompt = Prompt(
        system=load_template("answer_system").strip(),
        context_blocks=blocks,
        user_query=query.strip(),
        history=list(history or []),
    )
    # Trim to budget: drop whole tail blocks first, then trailing sentences
    # of the sole remaining block.
    while prompt.rendered_length() > budget and len(prompt.context_blocks) > 1:
        prompt.context_blocks.pop()
    sole = prompt.context_blocks[0]
    while prompt.rendered_length() > budget and len(sole.sentences) > 1:
        sole.sentences.pop()
    return prompt
