"""Document parsing and sentence segmentation."""

from ragtrace.ingest.documents import Document, HeadingSpan, document_id, normalize_text, parse_document
from ragtrace.ingest.sentences import SentenceSpan, abbreviations, segment_sentences

__all__ = [
    "Document",
    "HeadingSpan",
    "SentenceSpan",
    "abbreviations",
    "document_id",
    "normalize_text",
    "parse_document",
    "segment_sentences",
]
