"""Parse raw files into normalized documents with stable ids.

Supported formats: plain text, Markdown, HTML, JSON. Parsing strips markup
but records heading structure so chunkers can rebuild a hierarchical
context path. Character offsets of sentences and headings always refer to
the final normalized body.
"""

from __future__ import annotations

import hashlib
import json
import re
import unicodedata
from dataclasses import dataclass, field
from datetime import date
from html.parser import HTMLParser

from ragtrace.errors import EmptyDocument, MalformedJson, UndecodableInput, UnsupportedFormat
from ragtrace.ingest.sentences import SentenceSpan, segment_sentences

FORMATS = ("text", "markdown", "html", "json")

_BLANK_RUN_RE = re.compile(r"\n{4,}")
_MD_HEADING_RE = re.compile(r"^(#{1,6})\s+(.*?)\s*#*\s*$")
_MD_BULLET_RE = re.compile(r"^\s*(?:[-*+]|\d{1,3}[.)])\s+")
_MD_IMAGE_RE = re.compile(r"!\[([^\]]*)\]\([^)]*\)")
_MD_LINK_RE = re.compile(r"\[([^\]]+)\]\([^)]*\)")
_MD_BOLD_RE = re.compile(r"(\*\*|__)(.+?)\1")
_MD_EMPH_RE = re.compile(r"(?<!\w)([*_])([^*_]+)\1(?!\w)")
_MD_CODE_RE = re.compile(r"`([^`]*)`")


@dataclass(frozen=True)
class HeadingSpan:
    """A section heading and the body offset where its text begins."""

    level: int
    text: str
    start: int


@dataclass
class Document:
    id: str
    title: str
    source_uri: str
    publish_date: date | None
    body: str
    sentences: list[SentenceSpan]
    headings: list[HeadingSpan] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def sentence_text(self, span: SentenceSpan) -> str:
        return self.body[span.start:span.end]


def document_id(source_uri: str, body: str) -> str:
    """Deterministic id: sha256 over (source_uri, body)."""
    h = hashlib.sha256()
    h.update(source_uri.encode("utf-8"))
    h.update(b"\x00")
    h.update(body.encode("utf-8"))
    return h.hexdigest()


def normalize_text(text: str) -> str:
    """NFC, CRLF->LF, collapse runs of >2 blank lines to 2, trim the ends."""
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    text = unicodedata.normalize("NFC", text)
    text = _BLANK_RUN_RE.sub("\n\n\n", text)
    return text.strip()


def _strip_inline_markup(line: str) -> str:
    line = _MD_IMAGE_RE.sub(r"\1", line)
    line = _MD_LINK_RE.sub(r"\1", line)
    line = _MD_BOLD_RE.sub(r"\2", line)
    line = _MD_EMPH_RE.sub(r"\2", line)
    line = _MD_CODE_RE.sub(r"\1", line)
    return line


def _assemble_body(parts: list[tuple[str, int | None]]) -> tuple[str, list[HeadingSpan]]:
    """Join paragraph parts with blank lines, recording heading offsets."""
    pieces: list[str] = []
    headings: list[HeadingSpan] = []
    offset = 0
    for text, level in parts:
        if pieces:
            offset += 2  # the "\n\n" separator
        if level is not None:
            headings.append(HeadingSpan(level=level, text=text, start=offset))
        pieces.append(text)
        offset += len(text)
    return "\n\n".join(pieces), headings


def _parse_markdown(text: str) -> tuple[str | None, str, list[HeadingSpan]]:
    title: str | None = None
    parts: list[tuple[str, int | None]] = []
    buf: list[str] = []

    def flush() -> None:
        if buf:
            parts.append(("\n".join(buf), None))
            buf.clear()

    for line in text.split("\n"):
        m = _MD_HEADING_RE.match(line)
        if m:
            flush()
            level = len(m.group(1))
            heading = _strip_inline_markup(m.group(2)).strip()
            if level == 1 and title is None:
                title = heading
            elif heading:
                parts.append((heading, level))
            continue
        if not line.strip():
            flush()
            continue
        cleaned = _MD_BULLET_RE.sub("", line)
        buf.append(_strip_inline_markup(cleaned).rstrip())
    flush()
    body, headings = _assemble_body(parts)
    return title, body, headings


_BLOCK_TAGS = {
    "p", "div", "section", "article", "header", "footer", "main", "aside",
    "ul", "ol", "li", "table", "tr", "blockquote", "pre", "figure", "nav", "hr",
}
_SKIP_TAGS = {"script", "style", "noscript"}
_HEADING_TAGS = {f"h{i}": i for i in range(1, 7)}


class _TextExtractor(HTMLParser):
    """Tag-stripping extractor: block tags become paragraph breaks."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.parts: list[tuple[str, int | None]] = []
        self.buf: list[str] = []
        self.title_parts: list[str] = []
        self._skip_depth = 0
        self._in_title = False
        self._heading_level: int | None = None
        self._heading_buf: list[str] = []

    def _flush(self) -> None:
        text = " ".join(("".join(self.buf)).split())
        self.buf.clear()
        if text:
            self.parts.append((unicodedata.normalize("NFC", text), None))

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
        elif tag == "title":
            self._in_title = True
        elif tag in _HEADING_TAGS:
            self._flush()
            self._heading_level = _HEADING_TAGS[tag]
            self._heading_buf = []
        elif tag in _BLOCK_TAGS:
            self._flush()
        elif tag == "br":
            self.buf.append("\n")

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
        elif tag == "title":
            self._in_title = False
        elif tag in _HEADING_TAGS and self._heading_level is not None:
            text = " ".join("".join(self._heading_buf).split())
            if text:
                self.parts.append((unicodedata.normalize("NFC", text), self._heading_level))
            self._heading_level = None
            self._heading_buf = []
        elif tag in _BLOCK_TAGS:
            self._flush()

    def handle_data(self, data):
        if self._skip_depth:
            return
        if self._in_title:
            self.title_parts.append(data)
        elif self._heading_level is not None:
            self._heading_buf.append(data)
        else:
            self.buf.append(data)

    def close(self):
        super().close()
        self._flush()


def _parse_html(text: str) -> tuple[str | None, str, list[HeadingSpan]]:
    extractor = _TextExtractor()
    extractor.feed(text)
    extractor.close()

    parts = extractor.parts
    title = " ".join("".join(extractor.title_parts).split()) or None
    if title is None:
        # Promote the first h1 to the title and drop it from the body.
        for i, (part_text, level) in enumerate(parts):
            if level == 1:
                title = part_text
                parts = parts[:i] + parts[i + 1:]
                break
    body, headings = _assemble_body(parts)
    return title, body, headings


def _first_line(text: str) -> str:
    for line in text.split("\n"):
        if line.strip():
            return line.strip()
    return ""


def _parse_date(value: str | None) -> date | None:
    if not value:
        return None
    try:
        return date.fromisoformat(value.strip())
    except ValueError:
        return None


def parse_document(raw: bytes | str, format: str, metadata: dict[str, str] | None = None) -> Document:
    """Parse raw input into a normalized :class:`Document`.

    Title extraction per format: first level-1 heading (markdown),
    ``<title>`` or first ``<h1>`` (html), ``"title"`` field (json),
    first line (text). ``metadata`` may carry ``publish_date``
    (ISO ``YYYY-MM-DD``), ``source_uri`` and ``title`` overrides.
    """
    if format not in FORMATS:
        raise UnsupportedFormat(f"unknown format: {format!r}")
    metadata = dict(metadata or {})

    if isinstance(raw, bytes):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise UndecodableInput(str(exc)) from exc
    else:
        text = raw
    text = text.lstrip("﻿")

    title: str | None = None
    headings: list[HeadingSpan] = []
    source_uri = metadata.get("source_uri", "")
    publish_date = _parse_date(metadata.get("publish_date"))

    if format == "json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedJson(str(exc)) from exc
        if not isinstance(data, dict) or not isinstance(data.get("text"), str):
            raise MalformedJson('expected an object with a string "text" field')
        body = normalize_text(data["text"])
        raw_title = data.get("title")
        title = raw_title.strip() if isinstance(raw_title, str) else None
        if not source_uri and isinstance(data.get("source_uri"), str):
            source_uri = data["source_uri"]
        if publish_date is None and isinstance(data.get("publish_date"), str):
            publish_date = _parse_date(data["publish_date"])
    elif format == "markdown":
        title, body, headings = _parse_markdown(normalize_text(text))
    elif format == "html":
        title, body, headings = _parse_html(text)
    else:
        body = normalize_text(text)

    if not body.strip():
        raise EmptyDocument("document body is empty")

    if metadata.get("title"):
        title = metadata["title"]
    if not title:
        title = _first_line(body)[:120] or "Untitled"

    return Document(
        id=document_id(source_uri, body),
        title=title,
        source_uri=source_uri,
        publish_date=publish_date,
        body=body,
        sentences=segment_sentences(body),
        headings=headings,
        metadata=metadata,
    )
