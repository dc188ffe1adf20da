"""Corpus and conversation management over the full pipeline.

Builds run chunking -> decontextualization -> indexing under an exclusive
per-corpus lock (state empty -> building -> ready, reverting to empty on
failure). ``handle_message`` streams one TraceEvent per pipeline stage and
finishes with the complete annotated answer; provider outages degrade the
affected stage instead of killing the turn wherever the contract allows.
"""

from __future__ import annotations

import hashlib
import logging
import threading
import time
import uuid
from typing import Iterator

from ragtrace.chunking import attach_context_header, chunk_fixed, chunk_semantic, decontextualize
from ragtrace.citation import SourceSentence, build_annotated_answer, match_citations
from ragtrace.errors import (
    CorpusBusy,
    CorpusNotReady,
    EmptyCorpus,
    EmptyQuery,
    ProviderError,
    RagtraceError,
    UnsupportedFormat,
)
from ragtrace.generation import assemble_prompt, generate, parse_structured_answer
from ragtrace.indexing import build_dense, build_sparse, load, persist
from ragtrace.ingest import parse_document
from ragtrace.query import rewrite
from ragtrace.retrieval import DEGRADED_RATIONALE, extract_evidence, judge_usefulness, retrieve_multipath
from ragtrace.service.config import EngineConfig, ProviderSet
from ragtrace.service.events import ERROR_STAGE, TraceEvent
from ragtrace.service.storage import Storage

logger = logging.getLogger(__name__)

_EXTENSION_FORMATS = {
    ".txt": "text",
    ".md": "markdown",
    ".markdown": "markdown",
    ".html": "html",
    ".htm": "html",
    ".json": "json",
}

INSUFFICIENT_ANSWER = (
    "I could not find information relevant to this question in the corpus."
)


def _new_id() -> str:
    return uuid.uuid4().hex[:12]


def _doc_set_hash(doc_ids) -> str:
    h = hashlib.sha256()
    for doc_id in sorted(doc_ids):
        h.update(doc_id.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


class Engine:
    def __init__(self, config: EngineConfig, providers: ProviderSet, clock=time.time):
        self.config = config
        self.providers = providers
        self.clock = clock
        self.storage = Storage(config.data_dir)
        self._registry_lock = threading.Lock()
        self._corpus_locks: dict[str, threading.Lock] = {}
        self._conversation_locks: dict[str, threading.Lock] = {}
        self._cache: dict[str, dict] = {}  # corpus_id -> {hash, sparse, dense, chunks, docs}

    # --- locks --------------------------------------------------------------

    def _corpus_lock(self, corpus_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._corpus_locks.setdefault(corpus_id, threading.Lock())

    def _conversation_lock(self, conversation_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._conversation_locks.setdefault(conversation_id, threading.Lock())

    # --- corpus lifecycle -----------------------------------------------------

    def create_corpus(self, name: str, chunk_config: dict | None = None) -> dict:
        defaults = self.config.chunking
        merged = {
            "strategy": defaults.strategy,
            "target_size": defaults.target_size,
            "overlap": defaults.overlap,
            "breakpoint_percentile": defaults.breakpoint_percentile,
        }
        merged.update(chunk_config or {})
        if merged["strategy"] not in ("semantic", "fixed"):
            raise UnsupportedFormat(f"unknown chunking strategy {merged['strategy']!r}")
        meta = {
            "id": _new_id(),
            "name": name,
            "chunk_config": merged,
            "index_state": "empty",
            "doc_count": 0,
            "doc_set_hash": "",
            "created_at": self.clock(),
        }
        self.storage.save_corpus(meta)
        return meta

    def get_corpus(self, corpus_id: str) -> dict:
        return self.storage.load_corpus(corpus_id)

    def list_corpora(self) -> list[dict]:
        return self.storage.list_corpora()

    def delete_corpus(self, corpus_id: str) -> None:
        self.storage.delete_corpus(corpus_id)
        self._cache.pop(corpus_id, None)

    def upload_document(self, corpus_id: str, filename: str, raw: bytes,
                        metadata: dict[str, str] | None = None) -> dict:
        meta = self.storage.load_corpus(corpus_id)
        suffix = "." + filename.rsplit(".", 1)[-1].lower() if "." in filename else ""
        format = _EXTENSION_FORMATS.get(suffix)
        if format is None:
            raise UnsupportedFormat(f"unsupported file type: {filename!r}")
        doc_metadata = dict(metadata or {})
        doc_metadata.setdefault("source_uri", filename)
        doc = parse_document(raw, format, doc_metadata)
        self.storage.save_document(corpus_id, doc)
        # Any change to the document set invalidates existing indexes.
        docs = self.storage.load_documents(corpus_id)
        meta["doc_count"] = len(docs)
        if meta["index_state"] == "ready" and _doc_set_hash(docs) != meta["doc_set_hash"]:
            meta["index_state"] = "empty"
        self.storage.save_corpus(meta)
        self._cache.pop(corpus_id, None)
        return {"id": doc.id, "title": doc.title, "source_uri": doc.source_uri,
                "publish_date": doc.publish_date.isoformat() if doc.publish_date else None,
                "sentences": len(doc.sentences)}

    def _chunk_documents(self, docs, chunk_config) -> list:
        chunks = []
        for doc in sorted(docs.values(), key=lambda d: d.id):
            if chunk_config["strategy"] == "fixed":
                doc_chunks = chunk_fixed(doc, chunk_config["target_size"],
                                         chunk_config["overlap"])
            else:
                doc_chunks = chunk_semantic(doc, self.providers.embedder,
                                            chunk_config["breakpoint_percentile"])
            for chunk in doc_chunks:
                chunk = attach_context_header(chunk, doc)
                chunks.append(decontextualize(chunk, doc, self.providers.coref))
        return chunks

    def build_index(self, corpus_id: str) -> dict:
        lock = self._corpus_lock(corpus_id)
        if not lock.acquire(blocking=False):
            raise CorpusBusy(f"corpus {corpus_id!r} is already building")
        try:
            meta = self.storage.load_corpus(corpus_id)
            if meta["index_state"] == "building":
                raise CorpusBusy(f"corpus {corpus_id!r} is already building")
            docs = self.storage.load_documents(corpus_id)
            if not docs:
                raise EmptyCorpus("corpus has no documents")
            meta["index_state"] = "building"
            meta.pop("error", None)
            self.storage.save_corpus(meta)
            try:
                chunks = self._chunk_documents(docs, meta["chunk_config"])
                self.storage.save_chunks(corpus_id, chunks)
                sparse = build_sparse(chunks)
                persist(sparse, self.storage.index_dir(corpus_id, "sparse"))
                dense = None
                if self.providers.embedder is not None:
                    dense = build_dense(chunks, self.providers.embedder)
                    persist(dense, self.storage.index_dir(corpus_id, "dense"))
                meta["index_state"] = "ready"
                meta["doc_set_hash"] = _doc_set_hash(docs)
                meta["chunk_count"] = len(chunks)
                self.storage.save_corpus(meta)
                self._cache[corpus_id] = {"hash": meta["doc_set_hash"], "sparse": sparse,
                                          "dense": dense, "chunks": chunks, "docs": docs}
                return meta
            except Exception as exc:
                logger.exception("index build failed for corpus %s", corpus_id)
                meta["index_state"] = "empty"
                meta["error"] = {"message": str(exc), "at": self.clock()}
                self.storage.save_corpus(meta)
                raise
        finally:
            lock.release()

    def list_chunks(self, corpus_id: str) -> list[dict]:
        self.storage.load_corpus(corpus_id)
        from ragtrace.service.storage import chunk_to_dict
        return [chunk_to_dict(c) for c in self.storage.load_chunks(corpus_id)]

    def _loaded(self, corpus_id: str) -> dict:
        """Chunks, docs and indexes for a ready corpus, cached per doc set."""
        meta = self.storage.load_corpus(corpus_id)
        if meta["index_state"] != "ready":
            raise CorpusNotReady(f"corpus {corpus_id!r} is not ready (state: {meta['index_state']})")
        cached = self._cache.get(corpus_id)
        if cached and cached["hash"] == meta["doc_set_hash"]:
            return cached
        docs = self.storage.load_documents(corpus_id)
        chunks = self.storage.load_chunks(corpus_id)
        sparse = load(self.storage.index_dir(corpus_id, "sparse"))
        dense_dir = self.storage.index_dir(corpus_id, "dense")
        dense = load(dense_dir) if (dense_dir / "manifest.json").is_file() else None
        cached = {"hash": meta["doc_set_hash"], "sparse": sparse, "dense": dense,
                  "chunks": chunks, "docs": docs}
        self._cache[corpus_id] = cached
        return cached

    def search(self, corpus_id: str, query: str, k_final: int | None = None):
        """Fused retrieval over a ready corpus (no rewrite, no judging)."""
        if not query or not query.strip():
            raise EmptyQuery("query is empty")
        loaded = self._loaded(corpus_id)
        bundle = rewrite(query, modes=(), llm=None)
        r = self.config.retrieval
        return retrieve_multipath(
            bundle, loaded["sparse"], loaded["dense"], self.providers.embedder,
            k_per_path=r.k_per_path, k_final=k_final or r.k_final, k_const=r.rrf_k)

    # --- conversations --------------------------------------------------------

    def create_conversation(self, corpus_id: str, retrieval_config: dict | None = None,
                            generation_config: dict | None = None) -> dict:
        self.storage.load_corpus(corpus_id)
        conv = {
            "id": _new_id(),
            "corpus_id": corpus_id,
            "retrieval_config": retrieval_config or {},
            "generation_config": generation_config or {},
            "turns": [],
            "created_at": self.clock(),
        }
        self.storage.save_conversation(conv)
        return conv

    def get_conversation(self, conversation_id: str) -> dict:
        return self.storage.load_conversation(conversation_id)

    def _history_messages(self, conv: dict) -> list[dict]:
        limit = self.config.generation.history_turns
        messages: list[dict] = []
        for turn in conv["turns"][-limit:]:
            if turn.get("status") != "ok":
                continue
            messages.append({"role": "user", "content": turn["query"]})
            messages.append({"role": "assistant", "content": turn.get("raw_answer", "")})
        return messages

    def handle_message(self, conversation_id: str, query: str) -> Iterator[TraceEvent]:
        """Run one conversation turn, yielding TraceEvents in pipeline order.

        Validation happens eagerly, before the stream starts, so callers can
        still turn a bad request into an HTTP error status.
        """
        conv = self.storage.load_conversation(conversation_id)
        loaded = self._loaded(conv["corpus_id"])
        if not query or not query.strip():
            raise EmptyQuery("query is empty")
        return self._locked_turn(conv, query.strip(), loaded)

    def _locked_turn(self, conv: dict, query: str, loaded: dict) -> Iterator[TraceEvent]:
        with self._conversation_lock(conv["id"]):
            yield from self._run_turn(conv, query, loaded)

    def _event(self, sequence: int, stage: str, payload: dict) -> TraceEvent:
        return TraceEvent(stage=stage, payload=payload,
                          timestamp=self.clock(), sequence=sequence)

    def _run_turn(self, conv: dict, query: str, loaded: dict) -> Iterator[TraceEvent]:
        retrieval_cfg = self.config.retrieval
        citation_cfg = self.config.citation
        seq = 0

        def fail(code: str, message: str) -> TraceEvent:
            nonlocal seq
            seq += 1
            turn = {"query": query, "status": "error",
                    "error": {"code": code, "message": message},
                    "created_at": self.clock()}
            conv["turns"].append(turn)
            self.storage.save_conversation(conv)
            return self._event(seq, ERROR_STAGE, {"code": code, "message": message})

        # 1. query understanding
        modes = conv["retrieval_config"].get("rewrite_modes", retrieval_cfg.rewrite_modes)
        bundle = rewrite(query, modes=modes, llm=self.providers.rewriter)
        seq += 1
        yield self._event(seq, "query_understanding", {
            "original": bundle.original,
            "variants": [{"text": v.text, "kind": v.kind, "weight": v.weight}
                         for v in bundle.variants],
            "warnings": bundle.warnings,
        })

        # 2. retrieval
        k_final = conv["retrieval_config"].get("k_final", retrieval_cfg.k_final)
        try:
            hits = retrieve_multipath(
                bundle, loaded["sparse"], loaded["dense"], self.providers.embedder,
                k_per_path=retrieval_cfg.k_per_path, k_final=k_final,
                k_const=retrieval_cfg.rrf_k)
        except RagtraceError as exc:
            yield fail(exc.code, exc.message)
            return
        seq += 1
        yield self._event(seq, "retrieval", {
            "hits": [{"chunk_id": h.chunk_id, "score": h.score, "path": h.path,
                      "rank": h.rank} for h in hits],
        })

        # 3. utility: judge usefulness, then extract evidence per kept chunk
        chunk_map = {c.id: c for c in loaded["chunks"]}
        docs = loaded["docs"]
        flags: list[str] = []
        verdicts = []
        kept = []
        for hit in hits:
            chunk = chunk_map[hit.chunk_id]
            if self.providers.judger is None:
                kept.append(chunk)
                continue
            verdict = judge_usefulness(query, chunk, self.providers.judger)
            verdicts.append(verdict)
            if verdict.rationale == DEGRADED_RATIONALE and DEGRADED_RATIONALE not in flags:
                flags.append(DEGRADED_RATIONALE)
            if verdict.useful:
                kept.append(chunk)
        evidence = []
        for chunk in kept:
            evidence.extend(extract_evidence(
                query, chunk, docs[chunk.doc_id], embedder=self.providers.embedder,
                max_sentences=retrieval_cfg.evidence_per_chunk))
        seq += 1
        yield self._event(seq, "utility", {
            "verdicts": [{"chunk_id": v.chunk_id, "useful": v.useful,
                          "rationale": v.rationale} for v in verdicts],
            "evidence": [{"chunk_id": e.chunk_id, "doc_id": e.doc_id,
                          "span": [e.sentence_span[0], e.sentence_span[1]],
                          "score": e.score,
                          "text": docs[e.doc_id].body[e.sentence_span[0]:e.sentence_span[1]]}
                         for e in evidence],
            "flags": flags,
        })

        # 4. generation (streamed)
        raw_parts: list[str] = []
        if not evidence:
            raw_answer = INSUFFICIENT_ANSWER
            seq += 1
            yield self._event(seq, "generation", {"delta": raw_answer})
        else:
            prompt = assemble_prompt(
                query, evidence, docs, history=self._history_messages(conv),
                budget=self.config.generation.budget_chars)
            try:
                for delta in generate(prompt, self.providers.generator, stream=True):
                    raw_parts.append(delta)
                    seq += 1
                    yield self._event(seq, "generation", {"delta": delta})
            except ProviderError as exc:
                yield fail(exc.code, exc.message)
                return
            raw_answer = "".join(raw_parts)

        # 5. citation
        doc_rank: dict[str, int] = {}
        for hit in hits:
            doc_id = chunk_map[hit.chunk_id].doc_id
            doc_rank.setdefault(doc_id, hit.rank)
        pool = [
            SourceSentence(
                doc_id=e.doc_id,
                span=e.sentence_span,
                text=docs[e.doc_id].body[e.sentence_span[0]:e.sentence_span[1]],
                doc_rank=doc_rank.get(e.doc_id, len(doc_rank) + 1),
            )
            for e in evidence
        ]
        answer = parse_structured_answer(raw_answer)
        citations, unsupported = ([], [])
        if pool:
            citations, unsupported = match_citations(
                answer, pool, threshold=citation_cfg.threshold,
                cite_summary=citation_cfg.cite_summary)
        annotated = build_annotated_answer(answer, citations, unsupported, docs)
        seq += 1
        yield self._event(seq, "citation", {"answer": annotated, "unsupported": unsupported})

        turn = {"query": query, "status": "ok", "answer": annotated,
                "raw_answer": raw_answer, "created_at": self.clock()}
        conv["turns"].append(turn)
        self.storage.save_conversation(conv)
