"""Offline extractive generator.

A provider-shaped fallback that needs no network: it reads the numbered
context blocks out of the rendered prompt and composes the structured
answer format directly from them — a one-sentence summary, then one bolded
section per source document with its evidence sentences as bullets.
Deterministic, so it also powers demos and the CLI out of the box.
"""

from __future__ import annotations

import re
from typing import Iterator

_BLOCK_HEAD_RE = re.compile(r"^\[(\d+)\] (.*)$")
STREAM_CHUNK = 24


def _context_blocks(messages: list[dict]) -> list[tuple[str, list[str]]]:
    system = next((m["content"] for m in messages if m.get("role") == "system"), "")
    marker = "\nContext:\n"
    at = system.find(marker)
    if at < 0:
        return []
    blocks: list[tuple[str, list[str]]] = []
    for raw in system[at + len(marker):].split("\n\n"):
        lines = raw.split("\n")
        m = _BLOCK_HEAD_RE.match(lines[0]) if lines else None
        if m:
            blocks.append((m.group(2), [ln for ln in lines[1:] if ln.strip()]))
    return blocks


class ExtractiveGenerator:
    def complete(self, messages: list[dict]) -> str:
        blocks = _context_blocks(messages)
        if not blocks:
            return "The provided context does not contain enough information to answer."
        out: list[str] = []
        first_sentences = blocks[0][1]
        if first_sentences:
            out.append(first_sentences[0])
            out.append("")
        for i, (title, sentences) in enumerate(blocks, start=1):
            out.append(f"**{i}. {title}**")
            out.extend(f"- {s}" for s in sentences)
            out.append("")
        return "\n".join(out).strip()

    def stream(self, messages: list[dict]) -> Iterator[str]:
        text = self.complete(messages)
        for i in range(0, len(text), STREAM_CHUNK):
            yield text[i:i + STREAM_CHUNK]
