"""LLM-as-discriminator usefulness judgment for retrieved chunks.

Judging is a quality filter, not a safety gate: any provider failure or
unparseable response fails open (the chunk is kept) so that an outage can
never starve generation of context.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ragtrace.chunking.chunks import Chunk
from ragtrace.errors import ProviderError
from ragtrace.prompts import render_template

DEGRADED_RATIONALE = "judger_degraded"
PARSE_FAILURE_RATIONALE = "parse_failure"


@dataclass(frozen=True)
class UtilityVerdict:
    chunk_id: str
    useful: bool
    rationale: str = ""


def usefulness_prompt(query: str, passage: str) -> str:
    return render_template("usefulness", query=query, passage=passage)


def judge_usefulness(query: str, chunk: Chunk, llm) -> UtilityVerdict:
    """Ask the LLM whether ``chunk`` helps answer ``query``."""
    prompt = usefulness_prompt(query, chunk.enriched_text)
    try:
        raw = llm.complete([{"role": "user", "content": prompt}])
    except ProviderError:
        return UtilityVerdict(chunk_id=chunk.id, useful=True, rationale=DEGRADED_RATIONALE)
    try:
        data = json.loads(raw)
        if not isinstance(data, dict) or not isinstance(data.get("useful"), bool):
            raise ValueError("missing boolean 'useful'")
    except (ValueError, json.JSONDecodeError):
        return UtilityVerdict(chunk_id=chunk.id, useful=True, rationale=PARSE_FAILURE_RATIONALE)
    rationale = data.get("rationale")
    return UtilityVerdict(
        chunk_id=chunk.id,
        useful=data["useful"],
        rationale=rationale if isinstance(rationale, str) else "",
    )
