"""Filesystem storage for corpora, documents, chunks and conversations.

One directory per corpus under ``corpora/``, one JSON file per
conversation under ``conversations/``. Writes go through a temp file and
an atomic rename so that a crash never leaves half-written state.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict
from datetime import date
from pathlib import Path

from ragtrace.chunking.chunks import Chunk
from ragtrace.errors import ConversationNotFound, CorpusNotFound
from ragtrace.ingest.documents import Document, HeadingSpan
from ragtrace.ingest.sentences import SentenceSpan


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_json(path: Path, payload) -> None:
    _atomic_write(path, json.dumps(payload, ensure_ascii=False, indent=2))


def read_json(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


# --- dataclass (de)serialization -------------------------------------------

def document_to_dict(doc: Document) -> dict:
    data = asdict(doc)
    data["publish_date"] = doc.publish_date.isoformat() if doc.publish_date else None
    return data


def document_from_dict(data: dict) -> Document:
    return Document(
        id=data["id"],
        title=data["title"],
        source_uri=data["source_uri"],
        publish_date=date.fromisoformat(data["publish_date"]) if data["publish_date"] else None,
        body=data["body"],
        sentences=[SentenceSpan(**s) for s in data["sentences"]],
        headings=[HeadingSpan(**h) for h in data.get("headings", [])],
        metadata=data.get("metadata", {}),
    )


def chunk_to_dict(chunk: Chunk) -> dict:
    return {
        "id": chunk.id,
        "doc_id": chunk.doc_id,
        "span": list(chunk.span),
        "seq": chunk.seq,
        "text": chunk.text,
        "context_header": chunk.context_header,
        "enriched_text": chunk.enriched_text,
        "metadata": chunk.metadata,
    }


def chunk_from_dict(data: dict) -> Chunk:
    return Chunk(
        id=data["id"],
        doc_id=data["doc_id"],
        span=tuple(data["span"]),
        seq=data["seq"],
        text=data["text"],
        context_header=data.get("context_header", ""),
        enriched_text=data.get("enriched_text", ""),
        metadata=data.get("metadata", {}),
    )


# --- store ------------------------------------------------------------------

class Storage:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "corpora").mkdir(parents=True, exist_ok=True)
        (self.root / "conversations").mkdir(parents=True, exist_ok=True)

    # corpora
    def corpus_dir(self, corpus_id: str) -> Path:
        return self.root / "corpora" / corpus_id

    def index_dir(self, corpus_id: str, kind: str) -> Path:
        return self.corpus_dir(corpus_id) / "index" / kind

    def save_corpus(self, meta: dict) -> None:
        directory = self.corpus_dir(meta["id"])
        (directory / "documents").mkdir(parents=True, exist_ok=True)
        write_json(directory / "corpus.json", meta)

    def load_corpus(self, corpus_id: str) -> dict:
        path = self.corpus_dir(corpus_id) / "corpus.json"
        if not path.is_file():
            raise CorpusNotFound(f"no corpus {corpus_id!r}")
        return read_json(path)

    def list_corpora(self) -> list[dict]:
        out = []
        for path in sorted((self.root / "corpora").glob("*/corpus.json")):
            out.append(read_json(path))
        return out

    def delete_corpus(self, corpus_id: str) -> None:
        import shutil
        directory = self.corpus_dir(corpus_id)
        if not directory.is_dir():
            raise CorpusNotFound(f"no corpus {corpus_id!r}")
        shutil.rmtree(directory)

    # documents
    def save_document(self, corpus_id: str, doc: Document) -> None:
        directory = self.corpus_dir(corpus_id) / "documents"
        directory.mkdir(parents=True, exist_ok=True)
        write_json(directory / f"{doc.id}.json", document_to_dict(doc))

    def load_documents(self, corpus_id: str) -> dict[str, Document]:
        directory = self.corpus_dir(corpus_id) / "documents"
        docs = {}
        if directory.is_dir():
            for path in sorted(directory.glob("*.json")):
                doc = document_from_dict(read_json(path))
                docs[doc.id] = doc
        return docs

    # chunks
    def save_chunks(self, corpus_id: str, chunks: list[Chunk]) -> None:
        write_json(self.corpus_dir(corpus_id) / "chunks.json",
                   [chunk_to_dict(c) for c in chunks])

    def load_chunks(self, corpus_id: str) -> list[Chunk]:
        path = self.corpus_dir(corpus_id) / "chunks.json"
        if not path.is_file():
            return []
        return [chunk_from_dict(d) for d in read_json(path)]

    # conversations
    def save_conversation(self, conv: dict) -> None:
        write_json(self.root / "conversations" / f"{conv['id']}.json", conv)

    def load_conversation(self, conversation_id: str) -> dict:
        path = self.root / "conversations" / f"{conversation_id}.json"
        if not path.is_file():
            raise ConversationNotFound(f"no conversation {conversation_id!r}")
        return read_json(path)

    def list_conversations(self) -> list[dict]:
        return [read_json(p) for p in sorted((self.root / "conversations").glob("*.json"))]
