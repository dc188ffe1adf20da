"""Decontextualize chunks: absolute dates, pronoun resolution, context header.

The pipeline is (1) relative-date normalization, (2) an optional LLM
coreference rewrite fed with the chunk plus up to two preceding sentences,
(3) prepending the hierarchical context header. The chunk's original text
and span are never modified; the result lands in ``enriched_text``. When
the LLM is missing or unreachable, step (2) is skipped and the chunk is
flagged, never failed.
"""

from __future__ import annotations

from dataclasses import replace

from ragtrace.chunking.chunks import Chunk
from ragtrace.chunking.dates import normalize_relative_dates
from ragtrace.errors import ProviderError
from ragtrace.ingest.documents import Document
from ragtrace.prompts import render_template

LOOKBACK_SENTENCES = 2


def _preceding_context(chunk: Chunk, doc: Document) -> str:
    before = [s for s in doc.sentences if s.end <= chunk.span[0]]
    return " ".join(doc.sentence_text(s) for s in before[-LOOKBACK_SENTENCES:])


def coreference_prompt(text: str, context: str) -> str:
    return render_template("coreference", context=context or "(none)", text=text)


def decontextualize(chunk: Chunk, doc: Document, llm=None) -> Chunk:
    """Return a copy of ``chunk`` with ``enriched_text`` and flags filled in."""
    metadata = dict(chunk.metadata)

    text = chunk.text.strip()
    if doc.publish_date is None:
        metadata["dates"] = "skipped"
    else:
        text = normalize_relative_dates(text, doc.publish_date)

    if llm is not None:
        prompt = coreference_prompt(text, _preceding_context(chunk, doc))
        try:
            rewritten = llm.complete([{"role": "user", "content": prompt}]).strip()
            if rewritten:
                text = rewritten
        except ProviderError:
            metadata["coref"] = "skipped"
    else:
        metadata["coref"] = "skipped"

    enriched = f"{chunk.context_header}\n{text}" if chunk.context_header else text
    return replace(chunk, enriched_text=enriched, metadata=metadata)
