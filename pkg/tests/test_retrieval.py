import random

import pytest

from ragtrace.chunking import Chunk
from ragtrace.errors import IndexMismatch
from ragtrace.indexing import build_dense, build_sparse
from ragtrace.providers import FailingProvider, HashingEmbedder, ScriptedGenerationProvider
from ragtrace.query import QueryBundle, QueryVariant
from ragtrace.retrieval import (
    DEGRADED_RATIONALE,
    extract_evidence,
    judge_usefulness,
    retrieve_multipath,
    rrf_fuse,
)
from tests.conftest import make_doc
from tests.oracles import oracle_rrf


class TestRrfFuse:
    def test_rank_one_in_two_lists(self):
        hits = rrf_fuse([(["x", "y"], 1.0), (["x", "z"], 1.0)], k_const=60)
        assert hits[0].chunk_id == "x"
        assert hits[0].score == pytest.approx(2 / 61, abs=1e-12)

    def test_single_list_single_entry(self):
        hits = rrf_fuse([(["only"], 1.0)], k_const=60)
        assert hits[0].score == pytest.approx(1 / 61, abs=1e-12)

    def test_single_ranking_preserves_order(self):
        ids = [f"c{i}" for i in range(10)]
        hits = rrf_fuse([(ids, 1.0)], k_const=60)
        assert [h.chunk_id for h in hits] == ids
        assert [h.rank for h in hits] == list(range(1, 11))
        assert all(h.path == "fused" for h in hits)

    def test_empty_input(self):
        assert rrf_fuse([], 60) == []

    def test_duplicate_ranking_rejected(self):
        with pytest.raises(ValueError):
            rrf_fuse([(["a", "a"], 1.0)], 60)

    def _random_rankings(self, rng, n_lists=4, universe=30):
        ids = [f"c{i:02d}" for i in range(universe)]
        rankings = []
        for _ in range(n_lists):
            sample = rng.sample(ids, rng.randint(1, universe))
            rankings.append((sample, rng.choice([0.25, 0.5, 1.0, 2.0])))
        return rankings

    def test_permutation_invariance(self, rng):
        for _ in range(100):
            rankings = self._random_rankings(rng)
            base = rrf_fuse(rankings, 60)
            shuffled = rankings[:]
            rng.shuffle(shuffled)
            assert rrf_fuse(shuffled, 60) == base

    def test_weight_scaling_argsort_invariance(self, rng):
        for _ in range(100):
            rankings = self._random_rankings(rng)
            factor = rng.choice([0.1, 3.0, 17.5])
            base = [h.chunk_id for h in rrf_fuse(rankings, 60)]
            scaled_rankings = [(ids, w * factor) for ids, w in rankings]
            scaled = [h.chunk_id for h in rrf_fuse(scaled_rankings, 60)]
            assert scaled == base

    def test_matches_oracle(self, rng):
        for _ in range(30):
            rankings = self._random_rankings(rng)
            hits = rrf_fuse(rankings, 60)
            expected = oracle_rrf(rankings, 60)
            assert [(h.chunk_id, pytest.approx(h.score)) for h in hits] == \
                [(cid, pytest.approx(s)) for cid, s in expected]


def corpus_chunks():
    texts = {
        "c-coral": "coral bleaching spreads in warm water",
        "c-stock": "stock markets fell on tuesday trading",
        "c-reef": "reef surveys show heat stress damage",
        "c-rain": "rainfall patterns shifted across the region",
    }
    return [Chunk(id=cid, doc_id="d", span=(0, 1), seq=i, text=text)
            for i, (cid, text) in enumerate(sorted(texts.items()))]


class TestRetrieveMultipath:
    def test_sparse_only_equals_sparse_order(self):
        chunks = corpus_chunks()
        sparse = build_sparse(chunks)
        bundle = QueryBundle(original="coral bleaching")
        hits = retrieve_multipath(bundle, sparse, None, None, k_per_path=4, k_final=4)
        from ragtrace.indexing import search_sparse
        expected = [h.chunk_id for h in search_sparse(sparse, "coral bleaching", 4)]
        assert [h.chunk_id for h in hits] == expected
        assert all(h.path == "fused" for h in hits)

    def test_two_variants_interleave_by_rrf(self):
        chunks = corpus_chunks()
        sparse = build_sparse(chunks)
        bundle = QueryBundle(
            original="coral bleaching warm",
            variants=[QueryVariant(text="stock markets trading", kind="expansion", weight=1.0)])
        hits = retrieve_multipath(bundle, sparse, None, None, k_per_path=2, k_final=4)
        ids = [h.chunk_id for h in hits]
        assert "c-coral" in ids and "c-stock" in ids
        # both rank-1 hits with equal weight: tie broken by ascending id
        assert ids[0] == "c-coral" and ids[1] == "c-stock"

    def test_k_final_truncates_with_contiguous_ranks(self):
        chunks = corpus_chunks()
        sparse = build_sparse(chunks)
        dense = build_dense(chunks, HashingEmbedder(64))
        bundle = QueryBundle(original="coral reef water heat stress rainfall markets")
        hits = retrieve_multipath(bundle, sparse, dense, HashingEmbedder(64),
                                  k_per_path=4, k_final=3)
        assert len(hits) == 3
        assert [h.rank for h in hits] == [1, 2, 3]

    def test_index_mismatch_detected(self):
        chunks = corpus_chunks()
        sparse = build_sparse(chunks)
        dense = build_dense(chunks[:2], HashingEmbedder(64))
        with pytest.raises(IndexMismatch):
            retrieve_multipath(QueryBundle(original="coral"), sparse, dense, HashingEmbedder(64))

    def test_results_subset_of_path_results(self):
        chunks = corpus_chunks()
        sparse = build_sparse(chunks)
        dense = build_dense(chunks, HashingEmbedder(64))
        embedder = HashingEmbedder(64)
        bundle = QueryBundle(original="coral heat")
        fused = retrieve_multipath(bundle, sparse, dense, embedder, k_per_path=3, k_final=8)
        from ragtrace.indexing import search_dense, search_sparse
        allowed = {h.chunk_id for h in search_sparse(sparse, "coral heat", 3)}
        allowed |= {h.chunk_id for h in search_dense(dense, embedder.embed(["coral heat"])[0], 3)}
        assert {h.chunk_id for h in fused} <= allowed


class TestJudgeUsefulness:
    def chunk(self):
        return Chunk(id="c1", doc_id="d", span=(0, 10), seq=0,
                     text="Corals bleach in warm water.")

    def test_useful_verdict(self):
        llm = ScriptedGenerationProvider(
            default='{"useful": true, "rationale": "mentions bleaching"}')
        verdict = judge_usefulness("why do corals bleach?", self.chunk(), llm)
        assert verdict.useful is True
        assert verdict.rationale == "mentions bleaching"
        assert verdict.chunk_id == "c1"

    def test_not_useful_verdict(self):
        llm = ScriptedGenerationProvider(default='{"useful": false, "rationale": "off topic"}')
        verdict = judge_usefulness("stock prices?", self.chunk(), llm)
        assert verdict.useful is False

    def test_parse_failure_fails_open(self):
        llm = ScriptedGenerationProvider(default="USEFUL!!!")
        verdict = judge_usefulness("q", self.chunk(), llm)
        assert verdict.useful is True
        assert verdict.rationale == "parse_failure"

    def test_outage_fails_open_with_flag(self):
        verdict = judge_usefulness("q", self.chunk(), FailingProvider())
        assert verdict.useful is True
        assert verdict.rationale == DEGRADED_RATIONALE

    def test_prompt_carries_query_and_passage(self):
        llm = ScriptedGenerationProvider(default='{"useful": true}')
        judge_usefulness("my special query", self.chunk(), llm)
        assert "my special query" in llm.calls[0]
        assert "Corals bleach" in llm.calls[0]


class TestExtractEvidence:
    def test_single_sentence_chunk(self):
        doc = make_doc("Corals bleach in heat.")
        chunk = Chunk(id="c", doc_id=doc.id, span=(0, len(doc.body)), seq=0, text=doc.body)
        spans = extract_evidence("corals bleach", chunk, doc)
        assert len(spans) == 1
        assert spans[0].score > 0

    def test_lexical_overlap_hand_counted(self):
        doc = make_doc("Corals bleach in heat. Stocks fell.")
        chunk = Chunk(id="c", doc_id=doc.id, span=(0, len(doc.body)), seq=0, text=doc.body)
        spans = extract_evidence("corals bleach", chunk, doc, max_sentences=2)
        by_text = {doc.body[s.sentence_span[0]:s.sentence_span[1]]: s.score for s in spans}
        assert by_text["Corals bleach in heat."] == pytest.approx(2 / 2)
        assert by_text["Stocks fell."] == pytest.approx(0 / 2)

    def test_max_sentences_keeps_document_order(self):
        doc = make_doc("Alpha coral fact. Unrelated filler words. Beta coral fact.")
        chunk = Chunk(id="c", doc_id=doc.id, span=(0, len(doc.body)), seq=0, text=doc.body)
        spans = extract_evidence("coral fact", chunk, doc, max_sentences=2)
        texts = [doc.body[s.sentence_span[0]:s.sentence_span[1]] for s in spans]
        assert texts == ["Alpha coral fact.", "Beta coral fact."]

    def test_all_sentences_when_budget_exceeds(self):
        doc = make_doc("One fact. Two fact. Three fact.")
        chunk = Chunk(id="c", doc_id=doc.id, span=(0, len(doc.body)), seq=0, text=doc.body)
        spans = extract_evidence("fact", chunk, doc, max_sentences=10)
        assert len(spans) == 3
        starts = [s.sentence_span[0] for s in spans]
        assert starts == sorted(starts)

    def test_embedding_scorer_clamped(self):
        doc = make_doc("Coral reefs bleach. Unrelated stocks fell.")
        chunk = Chunk(id="c", doc_id=doc.id, span=(0, len(doc.body)), seq=0, text=doc.body)
        spans = extract_evidence("coral reefs", chunk, doc,
                                 embedder=HashingEmbedder(64), max_sentences=2)
        assert all(0.0 <= s.score <= 1.0 for s in spans)

    def test_empty_chunk(self):
        doc = make_doc("Something here.")
        chunk = Chunk(id="c", doc_id=doc.id, span=(0, 0), seq=0, text="")
        assert extract_evidence("q", chunk, doc) == []
