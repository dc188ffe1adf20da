"""Deterministic sentence segmentation over normalized text.

Splits on terminal punctuation (``. ! ?`` and their CJK full-width
equivalents) and on paragraph breaks. An abbreviation list shipped as a
data file suppresses false splits after tokens like ``Dr.`` or ``e.g.``.
Spans are trimmed of surrounding whitespace, so together they cover every
non-whitespace character of the input exactly once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

TERMINALS = ".!?"
CJK_TERMINALS = "。！？"  # 。 ！ ？
_CLOSERS = "\"')»’”」』）]】"
_PARA_BREAK_RE = re.compile(r"\n\s*\n")
_ABBREV_TOKEN_CHARS = re.compile(r"[\w.]", re.UNICODE)


@dataclass(frozen=True)
class SentenceSpan:
    """Half-open character span of one sentence in a document body."""

    start: int
    end: int
    index: int


@lru_cache(maxsize=1)
def abbreviations() -> frozenset[str]:
    """Lowercased abbreviation tokens (with trailing dot) from the data file."""
    text = resources.files("ragtrace.ingest").joinpath("data/abbreviations.txt").read_text("utf-8")
    entries = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line.lower())
    return frozenset(entries)


def _trailing_token(text: str, dot_index: int) -> str:
    """The maximal run of word chars and dots ending at text[dot_index]."""
    start = dot_index
    while start > 0 and _ABBREV_TOKEN_CHARS.match(text[start - 1]):
        start -= 1
    return text[start:dot_index + 1]


def _split_points(segment: str, offset: int, abbrevs: frozenset[str]) -> list[int]:
    """Absolute offsets (exclusive) where sentences end within one paragraph."""
    points: list[int] = []
    n = len(segment)
    i = 0
    while i < n:
        ch = segment[i]
        if ch in CJK_TERMINALS:
            j = i + 1
            while j < n and segment[j] in _CLOSERS:
                j += 1
            points.append(offset + j)
            i = j
            continue
        if ch in TERMINALS:
            j = i + 1
            while j < n and segment[j] in _CLOSERS:
                j += 1
            at_boundary = j >= n or segment[j].isspace()
            if at_boundary:
                is_abbrev = ch == "." and _trailing_token(segment, i).lower() in abbrevs
                if not is_abbrev:
                    points.append(offset + j)
                    i = j
                    continue
        i += 1
    return points


def segment_sentences(body: str) -> list[SentenceSpan]:
    """Split ``body`` into ordered, disjoint sentence spans."""
    if not body:
        return []
    abbrevs = abbreviations()

    # Paragraph breaks always split; terminal punctuation splits within.
    boundaries: list[int] = [0]
    cursor = 0
    for para_break in _PARA_BREAK_RE.finditer(body):
        segment = body[cursor:para_break.start()]
        boundaries.extend(_split_points(segment, cursor, abbrevs))
        boundaries.append(para_break.end())
        cursor = para_break.end()
    boundaries.extend(_split_points(body[cursor:], cursor, abbrevs))
    boundaries.append(len(body))

    spans: list[SentenceSpan] = []
    seen_upto = 0
    for left, right in zip(boundaries, boundaries[1:]):
        left = max(left, seen_upto)
        if right <= left:
            continue
        chunk = body[left:right]
        if not chunk.strip():
            seen_upto = right
            continue
        start = left + (len(chunk) - len(chunk.lstrip()))
        end = left + len(chunk.rstrip())
        spans.append(SentenceSpan(start=start, end=end, index=len(spans)))
        seen_upto = right
    return spans
