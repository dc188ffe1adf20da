import math
import random

import numpy as np
import pytest

from ragtrace.chunking import Chunk
from ragtrace.errors import CorruptIndex, DimensionMismatch, EmptyCorpus, IoFailure, VersionMismatch
from ragtrace.indexing import (
    build_dense,
    build_sparse,
    load,
    persist,
    search_dense,
    search_sparse,
    tokenize,
)
from tests.conftest import WORDS
from tests.oracles import oracle_bm25_topk, oracle_cosine_topk


def chunks_from_texts(texts):
    return [Chunk(id=f"c{i:03d}", doc_id="d", span=(0, 1), seq=i, text=t)
            for i, t in enumerate(texts)]


def random_corpus(rng: random.Random, n_chunks: int):
    texts = [" ".join(rng.choices(WORDS, k=rng.randint(3, 25))) for _ in range(n_chunks)]
    return chunks_from_texts(texts)


class ArrayEmbedder:
    def __init__(self, mapping):
        self.mapping = mapping

    def embed(self, texts):
        return [self.mapping[t] for t in texts]


class TestSparse:
    def test_single_chunk_counts(self):
        index = build_sparse(chunks_from_texts(["a b a"]))
        assert index.postings == {"a": [("c000", 2)], "b": [("c000", 1)]}
        assert index.avg_doc_length == 3
        assert index.N == 1

    def test_identical_chunks_share_postings(self):
        index = build_sparse(chunks_from_texts(["x y", "x y"]))
        assert [cid for cid, _ in index.postings["x"]] == ["c000", "c001"]

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpus):
            build_sparse([])

    def test_term_frequencies_match_brute_count(self, rng):
        chunks = random_corpus(rng, 20)
        index = build_sparse(chunks)
        for chunk in chunks:
            tokens = tokenize(chunk.enriched_text)
            assert index.doc_lengths[chunk.id] == len(tokens)
            for term in set(tokens):
                entry = dict(index.postings[term])
                assert entry[chunk.id] == tokens.count(term)

    def test_hand_evaluated_bm25(self):
        index = build_sparse(chunks_from_texts(["a b a"]))
        hits = search_sparse(index, "a", 1)
        idf = math.log(1 + 0.5 / 1.5)
        expected = idf * (2 * (1.2 + 1)) / (2 + 1.2 * (1 - 0.75 + 0.75 * 3 / 3))
        assert hits[0].score == pytest.approx(expected, abs=1e-9)
        assert hits[0].path == "sparse"
        assert hits[0].rank == 1

    def test_absent_term_empty(self):
        index = build_sparse(chunks_from_texts(["a b a"]))
        assert search_sparse(index, "zebra", 5) == []

    def test_matches_oracle_on_random_corpora(self, rng):
        for _ in range(25):
            chunks = random_corpus(rng, rng.randint(2, 50))
            corpus = {c.id: c.enriched_text for c in chunks}
            index = build_sparse(chunks)
            query = " ".join(rng.choices(WORDS, k=rng.randint(1, 4)))
            k = rng.randint(1, 12)
            hits = search_sparse(index, query, k)
            expected = oracle_bm25_topk(corpus, query, k)
            assert [h.chunk_id for h in hits] == [cid for cid, _ in expected]
            for hit, (_, score) in zip(hits, expected):
                assert hit.score == pytest.approx(score, abs=1e-9)
            assert [h.rank for h in hits] == list(range(1, len(hits) + 1))

    def test_scores_non_increasing(self, rng):
        chunks = random_corpus(rng, 30)
        index = build_sparse(chunks)
        hits = search_sparse(index, "coral reef heat", 30)
        scores = [h.score for h in hits]
        assert scores == sorted(scores, reverse=True)


class TestDense:
    def test_exact_match_scores_one(self):
        vectors = {"va": [1.0, 0.0], "vb": [0.0, 1.0]}
        chunks = chunks_from_texts(["va", "vb"])
        index = build_dense(chunks, ArrayEmbedder({"va": vectors["va"], "vb": vectors["vb"]}))
        hits = search_dense(index, [1.0, 0.0], 2)
        assert hits[0].chunk_id == "c000"
        assert hits[0].score == pytest.approx(1.0, abs=1e-6)
        assert hits[1].score == pytest.approx(0.0, abs=1e-6)

    def test_dimension_mismatch(self):
        chunks = chunks_from_texts(["va"])
        index = build_dense(chunks, ArrayEmbedder({"va": [1.0, 0.0]}))
        with pytest.raises(DimensionMismatch):
            search_dense(index, [1.0, 0.0, 0.0], 1)

    def test_matches_exhaustive_scan(self, rng):
        n, dims = 1000, 16
        np_rng = np.random.default_rng(42)
        matrix = np_rng.normal(size=(n, dims))
        ids = [f"c{i:04d}" for i in range(n)]
        chunks = [Chunk(id=ids[i], doc_id="d", span=(0, 1), seq=i, text=f"t{i}")
                  for i in range(n)]
        embedder = ArrayEmbedder({f"t{i}": matrix[i] for i in range(n)})
        index = build_dense(chunks, embedder)
        for _ in range(10):
            query = np_rng.normal(size=dims)
            hits = search_dense(index, query, 10)
            expected = oracle_cosine_topk(ids, matrix, query, 10)
            assert [h.chunk_id for h in hits] == [cid for cid, _ in expected]
            for hit, (_, score) in zip(hits, expected):
                assert hit.score == pytest.approx(score, abs=1e-9)


class TestPersistence:
    def test_sparse_roundtrip_query_equivalent(self, rng, tmp_path):
        chunks = random_corpus(rng, 40)
        index = build_sparse(chunks)
        persist(index, tmp_path / "sparse")
        loaded = load(tmp_path / "sparse")
        for _ in range(100):
            query = " ".join(rng.choices(WORDS, k=2))
            assert search_sparse(loaded, query, 10) == search_sparse(index, query, 10)

    def test_dense_roundtrip_query_equivalent(self, rng, tmp_path):
        np_rng = np.random.default_rng(7)
        chunks = chunks_from_texts([f"t{i}" for i in range(50)])
        embedder = ArrayEmbedder({f"t{i}": np_rng.normal(size=8) for i in range(50)})
        index = build_dense(chunks, embedder)
        persist(index, tmp_path / "dense")
        loaded = load(tmp_path / "dense")
        for _ in range(50):
            query = np_rng.normal(size=8)
            assert search_dense(loaded, query, 5) == search_dense(index, query, 5)

    def test_truncated_file_is_corrupt(self, rng, tmp_path):
        index = build_sparse(random_corpus(rng, 5))
        persist(index, tmp_path / "idx")
        payload = tmp_path / "idx" / "sparse.json"
        payload.write_bytes(payload.read_bytes()[:20])
        with pytest.raises(CorruptIndex):
            load(tmp_path / "idx")

    def test_empty_directory_never_panics(self, tmp_path):
        with pytest.raises((IoFailure, VersionMismatch)):
            load(tmp_path)

    def test_future_version_rejected(self, rng, tmp_path):
        import json
        index = build_sparse(random_corpus(rng, 3))
        persist(index, tmp_path / "idx")
        manifest = tmp_path / "idx" / "manifest.json"
        data = json.loads(manifest.read_text())
        data["format_version"] = 99
        manifest.write_text(json.dumps(data))
        with pytest.raises(VersionMismatch):
            load(tmp_path / "idx")
