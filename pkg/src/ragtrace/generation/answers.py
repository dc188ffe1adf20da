"""Parse generated text into the structured answer format.

Expected shape: leading summary paragraphs, then sections introduced by a
bold line or markdown heading, each holding bullet entries. The parser is
total: arbitrary text degrades to a single untitled section. Sentences are
segmented with the same segmenter used for documents, and each non-heading
sentence is classified as opinion-bearing unless it is pure structural
connective text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ragtrace.indexing.sparse import tokenize
from ragtrace.ingest.sentences import segment_sentences

_MD_HEADING_RE = re.compile(r"^#{1,6}\s+(.*?)\s*#*\s*$")
_BOLD_LINE_RE = re.compile(r"^\s*\*\*(.+?)\*\*[:.]?\s*$")
_BULLET_RE = re.compile(r"^\s*(?:[-*+]|\d{1,3}[.)])\s+")
_INLINE_MARKUP_RE = re.compile(r"(\*\*|__|[*_`])")

# Sentences consisting solely of one of these phrases carry no citable claim.
_STRUCTURAL_PATTERNS = tuple(
    re.compile(rf"^(?:{p})[\s:,.!]*$", re.IGNORECASE)
    for p in (
        "in summary", "in conclusion", "to summarize", "in short", "overall",
        "however", "moreover", "furthermore", "additionally", "finally",
        "for example", "for instance", "note that", "see below", "sources?",
        "key aspects?", "summary", "conclusion",
    )
)


@dataclass
class AnswerSentence:
    text: str
    index: int                  # global ordinal across the whole answer
    kind: str                   # "summary" | "heading" | "content"
    opinion_bearing: bool = False


@dataclass
class AnswerSection:
    heading: str
    sentences: list[AnswerSentence] = field(default_factory=list)


@dataclass
class StructuredAnswer:
    summary: str
    summary_sentences: list[AnswerSentence]
    sections: list[AnswerSection]
    raw: str

    def all_sentences(self) -> list[AnswerSentence]:
        out = list(self.summary_sentences)
        for section in self.sections:
            out.extend(section.sentences)
        return out


def _is_opinion_bearing(text: str) -> bool:
    stripped = _INLINE_MARKUP_RE.sub("", text).strip()
    if not tokenize(stripped):
        return False
    return not any(p.match(stripped) for p in _STRUCTURAL_PATTERNS)


def _heading_of(line: str) -> str | None:
    m = _MD_HEADING_RE.match(line)
    if m:
        return m.group(1).strip()
    m = _BOLD_LINE_RE.match(line)
    if m:
        return m.group(1).strip()
    return None


def _sentence_units(lines: list[str]) -> list[str]:
    """Split body lines into sentence-holding units: bullets and paragraphs."""
    units: list[str] = []
    paragraph: list[str] = []

    def flush() -> None:
        if paragraph:
            units.append(" ".join(paragraph))
            paragraph.clear()

    for line in lines:
        if not line.strip():
            flush()
            continue
        if _BULLET_RE.match(line):
            flush()
            units.append(_BULLET_RE.sub("", line).strip())
        else:
            paragraph.append(line.strip())
    flush()
    return units


def parse_structured_answer(raw: str) -> StructuredAnswer:
    """Parse ``raw`` into summary, sections and classified sentences."""
    lines = raw.split("\n")
    segments: list[tuple[str | None, list[str]]] = []  # (heading, body lines)
    preamble: list[str] = []
    current: list[str] = preamble
    for line in lines:
        heading = _heading_of(line)
        if heading is not None:
            current = []
            segments.append((heading, current))
        else:
            current.append(line)

    counter = 0

    def make_sentences(text: str, kind: str) -> list[AnswerSentence]:
        nonlocal counter
        out = []
        clean = _INLINE_MARKUP_RE.sub("", text)
        for span in segment_sentences(clean):
            sentence_text = clean[span.start:span.end]
            out.append(AnswerSentence(
                text=sentence_text,
                index=counter,
                kind=kind,
                opinion_bearing=(kind != "heading") and _is_opinion_bearing(sentence_text),
            ))
            counter += 1
        return out

    if not segments:
        # Headingless text: one untitled section, no summary.
        units = _sentence_units(preamble)
        sentences = [s for unit in units for s in make_sentences(unit, "content")]
        sections = [AnswerSection(heading="", sentences=sentences)]
        return StructuredAnswer(summary="", summary_sentences=[], sections=sections, raw=raw)

    summary_units = _sentence_units(preamble)
    summary_sentences = [s for unit in summary_units for s in make_sentences(unit, "summary")]
    summary_text = " ".join(s.text for s in summary_sentences)

    sections: list[AnswerSection] = []
    for heading, body_lines in segments:
        section = AnswerSection(heading=heading or "")
        if heading:
            counter_before = counter
            heading_sentences = make_sentences(heading, "heading")
            # A heading renders as exactly one sentence regardless of punctuation.
            if len(heading_sentences) > 1:
                counter = counter_before
                heading_sentences = [AnswerSentence(
                    text=heading, index=counter, kind="heading", opinion_bearing=False)]
                counter += 1
            section.sentences.extend(heading_sentences)
        for unit in _sentence_units(body_lines):
            section.sentences.extend(make_sentences(unit, "content"))
        sections.append(section)

    return StructuredAnswer(
        summary=summary_text,
        summary_sentences=summary_sentences,
        sections=sections,
        raw=raw,
    )
