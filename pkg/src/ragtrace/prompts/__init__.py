"""Versioned prompt templates, one plain-text file per task."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def load_template(name: str) -> str:
    """Read ``prompts/<name>.txt`` shipped with the package."""
    return resources.files("ragtrace.prompts").joinpath(f"{name}.txt").read_text("utf-8")


def render_template(name: str, **fields: str) -> str:
    """Substitute ``{field}`` placeholders by plain replacement, so literal
    braces elsewhere in a template (e.g. JSON examples) stay untouched."""
    text = load_template(name)
    for key, value in fields.items():
        text = text.replace("{" + key + "}", value)
    return text
