"""HTTP service, engine, storage and configuration."""

from ragtrace.service.app import create_app
from ragtrace.service.config import (
    ChunkingDefaults,
    CitationDefaults,
    EngineConfig,
    GenerationDefaults,
    ProviderConfig,
    ProviderSet,
    RetrievalDefaults,
    build_providers,
    load_config,
)
from ragtrace.service.engine import Engine
from ragtrace.service.events import STAGES, TraceEvent, event_json, sse_encode
from ragtrace.service.storage import Storage

__all__ = [
    "ChunkingDefaults",
    "CitationDefaults",
    "Engine",
    "EngineConfig",
    "GenerationDefaults",
    "ProviderConfig",
    "ProviderSet",
    "RetrievalDefaults",
    "STAGES",
    "Storage",
    "TraceEvent",
    "build_providers",
    "create_app",
    "event_json",
    "load_config",
    "sse_encode",
]
