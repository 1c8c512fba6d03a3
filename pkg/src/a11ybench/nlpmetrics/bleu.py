"""Sentence-level BLEU with clipped modified n-gram precision.

Zero counts at orders >= 2 fall back to an epsilon precision so BLEU-4
degrades smoothly on short captions instead of collapsing to zero; a zero
unigram precision still yields an exact 0.
"""

from __future__ import annotations

import math
from collections import Counter

from ..errors import A11yBenchError
from .tokenizer import TokenizedText, ngrams

EPSILON = 1e-9


class EmptyReference(A11yBenchError):
    pass


def modified_precision(candidate: TokenizedText, reference: TokenizedText, k: int):
    """Clipped n-gram matches and candidate n-gram total for order k."""
    cand_counts = Counter(ngrams(candidate, k))
    ref_counts = Counter(ngrams(reference, k))
    correct = sum(min(count, ref_counts[gram]) for gram, count in cand_counts.items())
    total = sum(cand_counts.values())
    return correct, total


def brevity_penalty(candidate_len: int, reference_len: int) -> float:
    if candidate_len == 0:
        return 0.0
    return min(1.0, math.exp(1.0 - reference_len / candidate_len))


def bleu_n(candidate: TokenizedText, reference: TokenizedText, n: int) -> float:
    """Geometric mean of orders 1..n times the brevity penalty; in [0, 1]."""
    if n < 1 or n > 4:
        raise ValueError(f"n must be in 1..4, got {n}")
    if len(reference) == 0:
        raise EmptyReference("reference must be non-empty")
    if len(candidate) == 0:
        return 0.0

    log_sum = 0.0
    for k in range(1, n + 1):
        correct, total = modified_precision(candidate, reference, k)
        if correct > 0:
            p_k = correct / total
        elif k == 1:
            return 0.0
        else:
            p_k = EPSILON
        log_sum += math.log(p_k)

    score = brevity_penalty(len(candidate), len(reference)) * math.exp(log_sum / n)
    return min(1.0, score)
