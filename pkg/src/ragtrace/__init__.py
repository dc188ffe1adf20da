"""ragtrace: attribution-first retrieval-augmented generation.

Pipeline: parse -> chunk (semantic boundaries, context headers,
decontextualization) -> index (BM25 + dense vectors) -> rewrite query ->
multi-path retrieval with reciprocal rank fusion -> usefulness judging and
evidence extraction -> grounded generation -> post-generation sentence-level
citations with grouping and cross-references.
"""

__version__ = "0.1.0"
