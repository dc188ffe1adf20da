"""Engine configuration: one YAML file plus environment overrides.

Provider defaults are fully offline (hashing embedder, extractive
generator) so a fresh install answers questions without any network; HTTP
providers are opt-in per role. API keys are referenced by environment
variable name, never stored in the file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from ragtrace.providers.extractive import ExtractiveGenerator
from ragtrace.providers.hashing import DEFAULT_DIMS, HashingEmbedder
from ragtrace.providers.http import HttpEmbeddingProvider, HttpGenerationProvider

ENV_CONFIG = "RAGTRACE_CONFIG"
ENV_DATA_DIR = "RAGTRACE_DATA_DIR"


@dataclass
class ProviderConfig:
    type: str = "none"         # none | http | extractive | hashing
    base_url: str = ""
    model: str = ""
    api_key_env: str = ""
    timeout: float = 60.0
    dims: int = DEFAULT_DIMS


@dataclass
class ChunkingDefaults:
    strategy: str = "semantic"          # semantic | fixed
    target_size: int = 5
    overlap: int = 1
    breakpoint_percentile: float = 90.0


@dataclass
class RetrievalDefaults:
    k_per_path: int = 20
    k_final: int = 8
    rrf_k: int = 60
    rewrite_modes: list[str] = field(default_factory=list)
    evidence_per_chunk: int = 3


@dataclass
class CitationDefaults:
    threshold: float = 0.5
    cite_summary: bool = True


@dataclass
class GenerationDefaults:
    budget_chars: int = 8000
    history_turns: int = 3


@dataclass
class EngineConfig:
    data_dir: str = "./ragtrace-data"
    host: str = "127.0.0.1"
    port: int = 8000
    providers: dict[str, ProviderConfig] = field(default_factory=dict)
    chunking: ChunkingDefaults = field(default_factory=ChunkingDefaults)
    retrieval: RetrievalDefaults = field(default_factory=RetrievalDefaults)
    citation: CitationDefaults = field(default_factory=CitationDefaults)
    generation: GenerationDefaults = field(default_factory=GenerationDefaults)


@dataclass
class ProviderSet:
    """Resolved provider objects per pipeline role; None disables the role."""

    generator: object | None = None
    embedder: object | None = None
    judger: object | None = None
    rewriter: object | None = None
    coref: object | None = None


def _coerce(cls, data: dict):
    known = {f.name for f in fields(cls)}
    return cls(**{k: v for k, v in data.items() if k in known})


def load_config(path: str | Path | None = None) -> EngineConfig:
    """Build the config from defaults, an optional YAML file, and env vars."""
    config = EngineConfig()
    config.providers = {
        "generator": ProviderConfig(type="extractive"),
        "embedder": ProviderConfig(type="hashing"),
        "judger": ProviderConfig(type="none"),
        "rewriter": ProviderConfig(type="none"),
        "coref": ProviderConfig(type="none"),
    }

    path = path or os.environ.get(ENV_CONFIG)
    if path:
        raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
        for key in ("data_dir", "host", "port"):
            if key in raw:
                setattr(config, key, raw[key])
        for role, pdata in (raw.get("providers") or {}).items():
            config.providers[role] = _coerce(ProviderConfig, pdata or {})
        defaults = raw.get("defaults") or {}
        if "chunking" in defaults:
            config.chunking = _coerce(ChunkingDefaults, defaults["chunking"])
        if "retrieval" in defaults:
            config.retrieval = _coerce(RetrievalDefaults, defaults["retrieval"])
        if "citation" in defaults:
            config.citation = _coerce(CitationDefaults, defaults["citation"])
        if "generation" in defaults:
            config.generation = _coerce(GenerationDefaults, defaults["generation"])

    if os.environ.get(ENV_DATA_DIR):
        config.data_dir = os.environ[ENV_DATA_DIR]
    return config


def _build_one(role: str, pc: ProviderConfig):
    if pc.type == "none":
        return None
    if pc.type == "extractive":
        return ExtractiveGenerator()
    if pc.type == "hashing":
        return HashingEmbedder(dims=pc.dims)
    if pc.type == "http":
        if role == "embedder":
            return HttpEmbeddingProvider(pc.base_url, pc.model,
                                         api_key_env=pc.api_key_env or None,
                                         timeout=pc.timeout)
        return HttpGenerationProvider(pc.base_url, pc.model,
                                      api_key_env=pc.api_key_env or None,
                                      timeout=pc.timeout)
    raise ValueError(f"unknown provider type {pc.type!r} for role {role!r}")


def build_providers(config: EngineConfig) -> ProviderSet:
    resolved = {role: _build_one(role, pc) for role, pc in config.providers.items()}
    return ProviderSet(
        generator=resolved.get("generator"),
        embedder=resolved.get("embedder"),
        judger=resolved.get("judger"),
        rewriter=resolved.get("rewriter"),
        coref=resolved.get("coref"),
    )
