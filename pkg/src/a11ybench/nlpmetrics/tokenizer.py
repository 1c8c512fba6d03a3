"""Deterministic tokenization shared by all metrics."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Tuple

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


@dataclass(frozen=True)
class TokenizedText:
    tokens: Tuple[str, ...]

    def __post_init__(self) -> None:
        if any(not t for t in self.tokens):
            raise ValueError("tokens must be non-empty strings")

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def tokenize(text: str) -> TokenizedText:
    """Lowercase, split punctuation into separate tokens, collapse whitespace."""
    return TokenizedText(tokens=tuple(_TOKEN_RE.findall(text.lower())))


def ngrams(tokens, n: int) -> List[Tuple[str, ...]]:
    seq = tuple(tokens)
    return [seq[i:i + n] for i in range(len(seq) - n + 1)]
