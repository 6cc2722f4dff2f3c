"""Two-level general translator: class rules and directives to bytes."""

from ._gentrans import (
    Result,
    TranslationError,
    classify_line,
    evaluate,
    hexdump,
    resolve,
    tokenize,
    translate,
)

__all__ = [
    "Result",
    "TranslationError",
    "classify_line",
    "evaluate",
    "hexdump",
    "resolve",
    "tokenize",
    "translate",
]
