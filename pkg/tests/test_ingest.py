import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ragtrace.errors import EmptyDocument, MalformedJson, UndecodableInput, UnsupportedFormat
from ragtrace.ingest import abbreviations, parse_document, segment_sentences


class TestParseDocument:
    def test_markdown_title_and_body(self):
        doc = parse_document(b"# Coral Report\nSea temperatures rose.", "markdown", {})
        assert doc.title == "Coral Report"
        assert doc.body == "Sea temperatures rose."

    def test_html_title_and_body(self):
        doc = parse_document(b"<html><h1>A</h1><p>B.</p></html>", "html", {})
        assert doc.title == "A"
        assert doc.body == "B."

    def test_json_with_publish_date(self):
        raw = json.dumps({"title": "T", "text": "X. Y."}).encode()
        doc = parse_document(raw, "json", {"publish_date": "2025-02-18"})
        assert doc.title == "T"
        assert doc.body == "X. Y."
        assert doc.publish_date.isoformat() == "2025-02-18"

    def test_text_first_line_title_kept_in_body(self):
        doc = parse_document(b"First line\nrest of it.", "text", {})
        assert doc.title == "First line"
        assert doc.body.startswith("First line")

    def test_html_entities_decoded(self):
        doc = parse_document(b"<p>Fish &amp; chips.</p>", "html", {})
        assert doc.body == "Fish & chips."

    def test_html_scripts_dropped(self):
        raw = b"<html><script>var x = 1;</script><p>Kept.</p><style>p{}</style></html>"
        doc = parse_document(raw, "html", {})
        assert doc.body == "Kept."

    def test_markdown_headings_recorded(self):
        raw = b"# T\nIntro.\n\n## A\nMid.\n\n### B\nDeep."
        doc = parse_document(raw, "markdown", {})
        assert [(h.level, h.text) for h in doc.headings] == [(2, "A"), (3, "B")]
        for h in doc.headings:
            assert doc.body[h.start:h.start + len(h.text)] == h.text

    def test_undecodable_input(self):
        with pytest.raises(UndecodableInput):
            parse_document(b"\xff\xfe\x00bad", "text", {})

    def test_malformed_json(self):
        with pytest.raises(MalformedJson):
            parse_document(b"{not json", "json", {})
        with pytest.raises(MalformedJson):
            parse_document(b'{"title": "no text field"}', "json", {})

    def test_empty_document(self):
        with pytest.raises(EmptyDocument):
            parse_document(b"   \n\n  ", "text", {})

    def test_unknown_format(self):
        with pytest.raises(UnsupportedFormat):
            parse_document(b"x", "pdf", {})

    def test_deterministic_id(self):
        a = parse_document(b"Same body.", "text", {"source_uri": "u"})
        b = parse_document(b"Same body.", "text", {"source_uri": "u"})
        assert a.id == b.id
        c = parse_document(b"Same body.", "text", {"source_uri": "other"})
        assert c.id != a.id

    def test_idempotent_reparse_of_body(self):
        raw = "Line one.\r\nLine two!\n\n\n\n\nLast   one?"
        doc = parse_document(raw.encode(), "text", {})
        again = parse_document(doc.body.encode(), "text", {})
        assert again.body == doc.body

    def test_invalid_publish_date_dropped(self):
        doc = parse_document(b"Body.", "text", {"publish_date": "not-a-date"})
        assert doc.publish_date is None


class TestSegmentSentences:
    def test_three_terminals(self):
        spans = segment_sentences("A. B? C!")
        assert [(s.start, s.end) for s in spans] == [(0, 2), (3, 5), (6, 8)]

    def test_empty(self):
        assert segment_sentences("") == []

    def test_abbreviation_not_split(self):
        assert "dr." in abbreviations()
        spans = segment_sentences("Dr. Smith arrived. He left.")
        assert len(spans) == 2

    def test_paragraph_break_always_splits(self):
        spans = segment_sentences("no terminal here\n\nsecond paragraph")
        assert len(spans) == 2

    def test_closing_quote_stays_with_sentence(self):
        body = 'She said "stop." Then left.'
        spans = segment_sentences(body)
        assert body[spans[0].start:spans[0].end] == 'She said "stop."'

    def test_cjk_terminals(self):
        spans = segment_sentences("今日は晴れ。明日は雨！")
        assert len(spans) == 2

    def test_sentence_indexes_are_ordinal(self):
        spans = segment_sentences("One. Two. Three.")
        assert [s.index for s in spans] == [0, 1, 2]


@settings(max_examples=150, deadline=None)
@given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=400))
def test_partition_property(text):
    """Spans are ordered, disjoint, and cover all non-whitespace characters."""
    from ragtrace.ingest import normalize_text
    body = normalize_text(text)
    spans = segment_sentences(body)
    prev_end = -1
    covered = set()
    for span in spans:
        assert span.start < span.end
        assert span.start > prev_end or (prev_end == -1 and span.start >= 0)
        assert span.start >= prev_end
        prev_end = span.end
        covered.update(range(span.start, span.end))
    for i, ch in enumerate(body):
        if not ch.isspace():
            assert i in covered, f"char {i!r} ({ch!r}) uncovered"
    for span in spans:
        assert not body[span.start].isspace()
        assert not body[span.end - 1].isspace()
