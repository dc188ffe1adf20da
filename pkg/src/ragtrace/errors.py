"""Exception hierarchy shared across the pipeline.

Every error carries a stable ``code`` string; the HTTP layer maps codes to
``{code, message}`` response bodies.
"""

from __future__ import annotations


class RagtraceError(Exception):
    """Base class for all package errors."""

    code = "internal_error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


# --- ingest ---------------------------------------------------------------

class UndecodableInput(RagtraceError):
    code = "undecodable_input"


class MalformedJson(RagtraceError):
    code = "malformed_json"


class EmptyDocument(RagtraceError):
    code = "empty_document"


class UnsupportedFormat(RagtraceError):
    code = "unsupported_format"


# --- chunking -------------------------------------------------------------

class InvalidChunkParams(RagtraceError):
    code = "invalid_chunk_params"


# --- providers ------------------------------------------------------------

class ProviderError(RagtraceError):
    code = "provider_error"


class LlmUnavailable(ProviderError):
    code = "llm_unavailable"


class ProviderTimeout(ProviderError):
    code = "provider_timeout"


class EmbedderUnavailable(ProviderError):
    code = "embedder_unavailable"


# --- indexing -------------------------------------------------------------

class EmptyCorpus(RagtraceError):
    code = "empty_corpus"


class DimensionMismatch(RagtraceError):
    code = "dimension_mismatch"


class IoFailure(RagtraceError):
    code = "io_failure"


class CorruptIndex(RagtraceError):
    code = "corrupt_index"


class VersionMismatch(RagtraceError):
    code = "version_mismatch"


# --- query / retrieval ----------------------------------------------------

class EmptyQuery(RagtraceError):
    code = "empty_query"


class IndexMismatch(RagtraceError):
    code = "index_mismatch"


# --- generation -----------------------------------------------------------

class EmptyEvidence(RagtraceError):
    code = "empty_evidence"


# --- service --------------------------------------------------------------

class CorpusNotFound(RagtraceError):
    code = "corpus_not_found"


class CorpusBusy(RagtraceError):
    code = "corpus_busy"


class CorpusNotReady(RagtraceError):
    code = "corpus_not_ready"


class ConversationNotFound(RagtraceError):
    code = "conversation_not_found"
