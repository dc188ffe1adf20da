"""Shared fixture corpus and scripted-provider engine for end-to-end tests.

Run ``python -m tests.fixture_pipeline`` to regenerate the golden files
(``tests/fixtures/golden/``) after an intentional pipeline change.
"""

from __future__ import annotations

from pathlib import Path

from ragtrace.providers import HashingEmbedder, ScriptedGenerationProvider
from ragtrace.service.config import (
    ChunkingDefaults,
    EngineConfig,
    ProviderSet,
    RetrievalDefaults,
)
from ragtrace.service.engine import Engine

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN_DIR = FIXTURES / "golden"

FIXTURE_QUERY = "How does climate change affect corals?"

CORPUS_FILES = {
    "rising_temperatures.md": (
        """# Rising Ocean Temperatures

Global ocean temperatures reached record highs as climate change accelerated.
Warmer water causes corals to expel the algae living in their tissues.
Corals turn completely white when they expel their symbiotic algae.

## Bleaching Events

Marine surveys recorded widespread coral bleaching across tropical reefs yesterday.
Bleached corals lose their primary source of energy.
""",
        "2025-02-18",
    ),
    "heat_stress.md": (
        """# Prolonged Heat Stress

Heat stress becomes lethal for corals when high temperatures persist for weeks.
Prolonged heat stress causes corals to die in large numbers.

## Recovery Limits

Reefs need decades to recover from severe mortality events.
""",
        "2025-02-10",
    ),
    "iconic_reefs.md": (
        """# Iconic Reefs Under Threat

The Great Barrier Reef has suffered repeated mass bleaching events.
Iconic reef systems face irreversible damage from marine heatwaves.
Scientists warn that climate change may destroy famous coral reefs this century.
""",
        "2025-01-30",
    ),
}

FIXTURE_ANSWER = """Warmer water causes corals to expel the algae living in their tissues.

**1. Rising Ocean Temperatures and Coral Bleaching**
- Corals turn completely white when they expel their symbiotic algae.
- Bleached corals lose their primary source of energy.

**2. Prolonged Heat Stress and Coral Death**
- Prolonged heat stress causes corals to die in large numbers.
- Reefs need decades to recover from severe mortality events.

**3. Impact on Iconic Coral Reefs**
- The Great Barrier Reef has suffered repeated mass bleaching events.
- Iconic reef systems face irreversible damage from marine heatwaves.
"""

REWRITE_RESPONSE = '["coral bleaching causes", "ocean temperature rise corals"]'
JUDGER_RESPONSE = '{"useful": true, "rationale": "discusses coral impacts"}'


class FakeClock:
    """Deterministic monotonically increasing clock for golden runs."""

    def __init__(self, start: float = 1700000000.0, step: float = 0.001):
        self.now = start
        self.step = step

    def __call__(self) -> float:
        self.now = round(self.now + self.step, 6)
        return self.now


def coref_echo_provider() -> ScriptedGenerationProvider:
    """Answers the coreference template by echoing the text to rewrite."""

    def echo(prompt: str) -> str:
        tail = prompt.rsplit("Text: ", 1)[-1]
        return tail.split("\nRewritten:", 1)[0].strip()

    return ScriptedGenerationProvider(rules=[("Rewrite the text so it stands on its own", echo)])


def fixture_providers(
    generator=None,
    judger=None,
    rewriter=None,
    coref=None,
    embedder=None,
) -> ProviderSet:
    return ProviderSet(
        generator=generator or ScriptedGenerationProvider(default=FIXTURE_ANSWER),
        judger=judger or ScriptedGenerationProvider(default=JUDGER_RESPONSE),
        rewriter=rewriter or ScriptedGenerationProvider(default=REWRITE_RESPONSE),
        coref=coref or coref_echo_provider(),
        embedder=embedder or HashingEmbedder(dims=64),
    )


def fixture_config(data_dir: str | Path) -> EngineConfig:
    config = EngineConfig(data_dir=str(data_dir))
    config.chunking = ChunkingDefaults(strategy="fixed", target_size=3, overlap=0)
    config.retrieval = RetrievalDefaults(k_per_path=20, k_final=8, rrf_k=60,
                                         rewrite_modes=["expansion"],
                                         evidence_per_chunk=5)
    return config


def build_fixture_engine(data_dir: str | Path, providers: ProviderSet | None = None,
                         clock=None) -> tuple[Engine, str]:
    """Create a fully built corpus over the fixture files; returns (engine, corpus_id)."""
    engine = Engine(fixture_config(data_dir), providers or fixture_providers(),
                    clock=clock or FakeClock())
    corpus = engine.create_corpus("climate-news")
    for filename, (content, publish_date) in sorted(CORPUS_FILES.items()):
        engine.upload_document(corpus["id"], filename, content.encode("utf-8"),
                               {"publish_date": publish_date})
    engine.build_index(corpus["id"])
    return engine, corpus["id"]


def regenerate_goldens() -> None:
    import json
    import tempfile

    from ragtrace.service.events import sse_encode

    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        engine, corpus_id = build_fixture_engine(tmp)
        conversation = engine.create_conversation(corpus_id)
        frames = []
        terminal = None
        for event in engine.handle_message(conversation["id"], FIXTURE_QUERY):
            frames.append(sse_encode(event))
            terminal = event
        (GOLDEN_DIR / "events.sse").write_text("".join(frames), encoding="utf-8")
        answer = terminal.payload["answer"]
        (GOLDEN_DIR / "answer.json").write_text(
            json.dumps(answer, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {GOLDEN_DIR / 'events.sse'}")
    print(f"wrote {GOLDEN_DIR / 'answer.json'}")


if __name__ == "__main__":
    regenerate_goldens()
