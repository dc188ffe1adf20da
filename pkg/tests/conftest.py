from __future__ import annotations

import random
import string

import pytest

from ragtrace.ingest import parse_document

WORDS = (
    "coral reef ocean heat bleach stress water algae temperature storm "
    "climate change survey record impact region species growth decline event"
).split()


def random_text(rng: random.Random, sentences: int, words_per_sentence: int = 8,
                paragraph_every: int = 4) -> str:
    parts = []
    for i in range(sentences):
        words = rng.choices(WORDS, k=words_per_sentence)
        terminal = rng.choice(".!?")
        sentence = " ".join(words).capitalize() + terminal
        parts.append(sentence)
        if paragraph_every and (i + 1) % paragraph_every == 0:
            parts.append("\n\n")
        else:
            parts.append(" ")
    return "".join(parts).strip()


def make_doc(text: str, title: str = "Doc", source: str = "test://doc",
             publish_date: str | None = None):
    metadata = {"source_uri": source, "title": title}
    if publish_date:
        metadata["publish_date"] = publish_date
    return parse_document(text.encode("utf-8"), "text", metadata)


def random_junk(rng: random.Random, length: int) -> str:
    alphabet = string.ascii_letters + string.digits + " .!?\n\"'()- \t" + "àéîøü中文。！？"
    return "".join(rng.choice(alphabet) for _ in range(length))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20250218)
