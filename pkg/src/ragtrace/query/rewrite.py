"""LLM-backed query rewriting into a weighted variant bundle.

Each rewrite kind has its own prompt template; all templates share one
output contract: a JSON list of strings. Output that fails to parse yields
zero variants for that kind and a warning, never an error. The original
query is always kept, with weight 1.0 against 0.5 for variants.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ragtrace.errors import EmptyQuery, ProviderError
from ragtrace.prompts import render_template

KINDS = ("expansion", "decomposition", "disambiguation", "abstraction")
MAX_VARIANTS = 8
VARIANT_WEIGHT = 0.5


@dataclass(frozen=True)
class QueryVariant:
    text: str
    kind: str
    weight: float = VARIANT_WEIGHT


@dataclass
class QueryBundle:
    original: str
    variants: list[QueryVariant] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def weighted_texts(self) -> list[tuple[str, float]]:
        """The original (weight 1.0) followed by every variant."""
        return [(self.original, 1.0)] + [(v.text, v.weight) for v in self.variants]


def _parse_variant_list(raw: str) -> list[str]:
    data = json.loads(raw)
    if not isinstance(data, list):
        raise ValueError("expected a JSON list")
    out = []
    for item in data:
        if isinstance(item, str) and item.strip():
            out.append(item.strip())
    return out


def rewrite(query: str, modes=(), llm=None) -> QueryBundle:
    """Produce a :class:`QueryBundle` for the requested rewrite kinds.

    Kinds are processed in declaration order; variants are deduplicated
    case-insensitively against the original and each other, and the bundle
    is truncated to :data:`MAX_VARIANTS`.
    """
    if not query or not query.strip():
        raise EmptyQuery("query is empty")
    query = query.strip()
    bundle = QueryBundle(original=query)
    modes = [m for m in KINDS if m in set(modes)]
    if not modes:
        return bundle
    if llm is None:
        bundle.warnings.append("rewriter_unavailable")
        return bundle

    seen = {query.lower()}
    for kind in modes:
        prompt = render_template(f"query_{kind}", query=query)
        try:
            raw = llm.complete([{"role": "user", "content": prompt}])
        except ProviderError:
            bundle.warnings.append(f"rewrite_{kind}_unavailable")
            continue
        try:
            texts = _parse_variant_list(raw)
        except (ValueError, json.JSONDecodeError):
            bundle.warnings.append(f"rewrite_{kind}_unparseable")
            continue
        for text in texts:
            if text.lower() in seen or len(bundle.variants) >= MAX_VARIANTS:
                continue
            seen.add(text.lower())
            bundle.variants.append(QueryVariant(text=text, kind=kind))
    return bundle
