"""CIDEr: tf-idf weighted n-gram cosine consensus, reported on a 0-1 scale.

Per item, for each order n in 1..4, candidate and reference become raw-count
tf-idf vectors with idf = log(doc_count / df); the item score is the mean of
the four cosine similarities. No x10 rescaling is applied. N-grams unseen in
the corpus get df clamped to 1 (full idf weight).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from ..errors import A11yBenchError
from .tokenizer import TokenizedText, ngrams

MAX_ORDER = 4


class CorpusTooSmall(A11yBenchError):
    pass


class StatsMismatch(A11yBenchError):
    pass


@dataclass
class CorpusStats:
    doc_count: int
    ngram_document_frequency: Dict[Tuple[str, ...], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        bad = {g: c for g, c in self.ngram_document_frequency.items() if c > self.doc_count}
        if bad:
            raise StatsMismatch(f"document frequency exceeds doc_count for {len(bad)} n-grams")

    def idf(self, gram: Tuple[str, ...]) -> float:
        df = max(self.ngram_document_frequency.get(gram, 0), 1)
        return math.log(self.doc_count / df)


def build_corpus_stats(references: Sequence[TokenizedText]) -> CorpusStats:
    """Document frequencies over the reference corpus for n = 1..4."""
    df: Counter = Counter()
    for ref in references:
        seen = set()
        for n in range(1, MAX_ORDER + 1):
            seen.update(ngrams(ref, n))
        df.update(seen)
    return CorpusStats(doc_count=len(references), ngram_document_frequency=dict(df))


def _tfidf_vector(text: TokenizedText, n: int, stats: CorpusStats) -> Dict[Tuple[str, ...], float]:
    counts = Counter(ngrams(text, n))
    return {g: c * stats.idf(g) for g, c in counts.items()}


def _cosine(a: Dict, b: Dict) -> float:
    norm_a = math.sqrt(sum(v * v for v in a.values()))
    norm_b = math.sqrt(sum(v * v for v in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    dot = sum(v * b[g] for g, v in a.items() if g in b)
    return dot / (norm_a * norm_b)


def cider_item(candidate: TokenizedText, reference: TokenizedText, stats: CorpusStats) -> float:
    total = 0.0
    for n in range(1, MAX_ORDER + 1):
        total += _cosine(_tfidf_vector(candidate, n, stats), _tfidf_vector(reference, n, stats))
    return min(1.0, total / MAX_ORDER)


def cider(
    candidates: Sequence[TokenizedText],
    references: Sequence[TokenizedText],
    stats: CorpusStats,
) -> Tuple[List[float], float]:
    """Per-item scores and their corpus mean."""
    if stats.doc_count < 2:
        raise CorpusTooSmall(f"CIDEr needs at least 2 documents, got {stats.doc_count}")
    if len(candidates) != len(references) or len(references) != stats.doc_count:
        raise StatsMismatch(
            f"candidates ({len(candidates)}), references ({len(references)}) and "
            f"stats.doc_count ({stats.doc_count}) must agree"
        )
    per_item = [cider_item(c, r, stats) for c, r in zip(candidates, references)]
    return per_item, sum(per_item) / len(per_item)
