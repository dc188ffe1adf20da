"""Trace events: the pipeline's visible thinking, streamed as SSE."""

from __future__ import annotations

import json
from dataclasses import dataclass

STAGES = ("query_understanding", "retrieval", "utility", "generation", "citation")
ERROR_STAGE = "error"


@dataclass(frozen=True)
class TraceEvent:
    stage: str
    payload: dict
    timestamp: float
    sequence: int

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "payload": self.payload,
            "timestamp": self.timestamp,
            "sequence": self.sequence,
        }


def event_json(event: TraceEvent) -> str:
    return json.dumps(event.to_dict(), separators=(",", ":"))


def sse_encode(event: TraceEvent) -> str:
    """One SSE frame per event; errors use the ``error`` event name."""
    name = "error" if event.stage == ERROR_STAGE else "trace"
    return f"event: {name}\ndata: {event_json(event)}\n\n"
