"""Grounded prompt assembly, provider invocation, structured answer parsing."""

from ragtrace.generation.answers import (
    AnswerSection,
    AnswerSentence,
    StructuredAnswer,
    parse_structured_answer,
)
from ragtrace.generation.generate import generate
from ragtrace.generation.prompt import DEFAULT_BUDGET, ContextBlock, Prompt, assemble_prompt

__all__ = [
    "AnswerSection",
    "AnswerSentence",
    "ContextBlock",
    "DEFAULT_BUDGET",
    "Prompt",
    "StructuredAnswer",
    "assemble_prompt",
    "generate",
    "parse_structured_answer",
]
